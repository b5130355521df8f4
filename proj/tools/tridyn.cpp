// tridyn: construct, iterate, and analyze triangular rational systems.
//
// Subcommands: validate, iterate, growth, periodic, orbit, variety, bounds,
// gap. Machine-readable reports go to stdout only when --format is given
// (csv or json); human summaries always go to stderr. Exit codes: 0 success,
// 1 validation or hypothesis failure, 2 usage error.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tridyn/sysio.hpp"

using namespace tridyn;
using ojson = nlohmann::ordered_json;

namespace {

struct OutOpts {
    std::string format; // empty: no machine output
    std::string out = "-";
};

void add_out_opts(CLI::App* cmd, OutOpts& o) {
    cmd->add_option("--format", o.format, "machine output format on stdout")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "machine output destination ('-' for stdout)");
}

void emit(const OutOpts& o, const std::function<std::string(ReportFormat)>& render) {
    if (o.format.empty()) return;
    ReportFormat f = o.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    std::string text = render(f);
    if (o.out == "-")
        std::cout << text;
    else
        write_text_file(o.out, text);
}

TriangularSystem load_system(const std::string& path) {
    return parse_system(read_text_file(path));
}

std::vector<uint64_t> expand_primes(const std::vector<std::string>& specs, uint64_t lo,
                                    uint64_t hi) {
    std::vector<uint64_t> out;
    auto add_range = [&out](uint64_t a, uint64_t b) {
        if (a > b) throw std::invalid_argument("prime range lo exceeds hi");
        if (b - a > 100'000'000ull) throw std::invalid_argument("prime range too wide");
        for (uint64_t p = next_prime_u64(std::max<uint64_t>(a, 2)); p <= b;
             p = next_prime_u64(p + 1)) {
            out.push_back(p);
            if (p + 1 < p) break;
        }
    };
    if (specs.empty()) {
        add_range(lo, hi);
        return out;
    }
    for (const std::string& tok : specs) {
        size_t colon = tok.find(':');
        try {
            if (colon == std::string::npos) {
                uint64_t p = std::stoull(tok);
                if (!is_prime_u64(p))
                    throw std::invalid_argument("--p: " + tok + " is not prime");
                out.push_back(p);
            } else {
                add_range(std::stoull(tok.substr(0, colon)),
                          std::stoull(tok.substr(colon + 1)));
            }
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("--p: cannot read '" + tok + "'");
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).find("--p") == 0) throw;
            throw std::invalid_argument("--p: cannot read '" + tok + "'");
        }
    }
    return out;
}

std::vector<uint64_t> parse_u64_list(const std::string& text, const char* what) {
    std::vector<uint64_t> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        try {
            size_t used = 0;
            out.push_back(std::stoull(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot read '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<int64_t> parse_i64_list(const std::string& text, const char* what) {
    std::vector<int64_t> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        try {
            size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot read '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string join_i64(const std::vector<int64_t>& xs, char sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

uint64_t resolve_seed(bool flag_given, uint64_t flag_value, uint64_t config_seed) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("TRIDYN_SEED")) {
        std::string s(env);
        try {
            size_t used = 0;
            uint64_t v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("TRIDYN_SEED is not an unsigned integer: '" + s +
                                        "'");
        }
    }
    return config_seed;
}

// --- validate ----------------------------------------------------------------

int cmd_validate(const std::string& syspath, const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    ValidationResult res = validate_system(sys);
    if (const auto* lead = std::get_if<LeadingData>(&res)) {
        SystemMetrics m = system_metrics(sys);
        std::cerr << "valid: n=" << sys.n << " d=" << m.d
                  << " max|coeff|=" << m.h_exact.get_str() << "\n";
        for (size_t i = 0; i < lead->rows.size(); ++i) {
            const auto& r = lead->rows[i];
            std::cerr << "  level " << (i + 1) << ": e=" << (sys.levels[i].e > 0 ? "+1" : "-1")
                      << " lead=" << r.coeff.get_str() << " s=(" << join_i64(r.srow, ',')
                      << ")\n";
        }
        std::cerr << "  level " << sys.n << ": e=" << (sys.last.e > 0 ? "+1" : "-1")
                  << " g=" << sys.last.g.get_str() << " h=" << sys.last.h.get_str() << "\n";
        emit(oo, [&](ReportFormat f) -> std::string {
            if (f == ReportFormat::Csv) {
                std::string out = "level,lead_coeff,s_row\n";
                for (size_t i = 0; i < lead->rows.size(); ++i) {
                    const auto& r = lead->rows[i];
                    out += std::to_string(i + 1) + "," + csv_escape(r.coeff.get_str()) +
                           "," + csv_escape(join_i64(r.srow, ';')) + "\n";
                }
                return out;
            }
            ojson doc;
            doc["valid"] = true;
            doc["n"] = sys.n;
            ojson rows = ojson::array();
            for (size_t i = 0; i < lead->rows.size(); ++i) {
                ojson jr;
                jr["level"] = i + 1;
                jr["lead_coeff"] = lead->rows[i].coeff.get_str();
                jr["s_row"] = lead->rows[i].srow;
                rows.push_back(std::move(jr));
            }
            doc["leading"] = std::move(rows);
            return doc.dump(2) + "\n";
        });
        return 0;
    }
    const auto& v = std::get<ConditionViolation>(res);
    std::cerr << "invalid: level " << v.level << " part " << v.part;
    if (v.var > 0) std::cerr << " variable " << sys.vars[v.var - 1];
    std::cerr << ": " << v.reason << "\n";
    emit(oo, [&](ReportFormat f) -> std::string {
        if (f == ReportFormat::Csv) {
            std::string out = "valid,level,part,var,reason\n";
            out += "0," + std::to_string(v.level) + "," + csv_escape(v.part) + "," +
                   std::to_string(v.var) + "," + csv_escape(v.reason) + "\n";
            return out;
        }
        ojson doc;
        doc["valid"] = false;
        ojson jv;
        jv["level"] = v.level;
        jv["part"] = v.part;
        jv["var"] = v.var;
        jv["reason"] = v.reason;
        doc["violation"] = std::move(jv);
        return doc.dump(2) + "\n";
    });
    return 1;
}

// --- iterate -----------------------------------------------------------------

int cmd_iterate(const std::string& syspath, int64_t k, int level, const std::string& engine,
                uint64_t seed, uint64_t guard, const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    ValidationResult res = validate_system(sys);
    if (const auto* v = std::get_if<ConditionViolation>(&res)) {
        std::cerr << "invalid system: level " << v->level << " part " << v->part << ": "
                  << v->reason << "\n";
        return 1;
    }
    if (level < 0 || level > sys.n)
        throw std::invalid_argument("--level must lie in 1.." + std::to_string(sys.n));

    bool want_struct = engine != "naive";
    bool want_naive = engine != "structured";
    StructuredRun run;
    std::vector<ZRational> naive;
    if (want_struct) run = iterate_structured(sys, k, guard);
    if (want_naive) naive = iterate_naive(sys, k, guard);

    struct Row {
        int i;
        ZRational f;
        int64_t deg;
        bool agree;
    };
    std::vector<Row> rows;
    bool all_agree = true;
    for (int i = 1; i <= sys.n; ++i) {
        if (level != 0 && i != level) continue;
        ZRational raw = want_struct ? run.levels[i].F[static_cast<size_t>(k)]
                                    : naive[static_cast<size_t>(i - 1)];
        bool agree = true;
        if (want_struct && want_naive)
            agree = equivalent_rational(run.levels[i].F[static_cast<size_t>(k)],
                                        naive[static_cast<size_t>(i - 1)], {}, seed);
        all_agree = all_agree && agree;
        ZRational canon = canonical_form(raw, {}, seed).f;
        rows.push_back({i, std::move(canon), 0, agree});
        rows.back().deg = std::max(rows.back().f.num.total_degree(),
                                   rows.back().f.den.total_degree());
    }

    for (const auto& r : rows)
        std::cerr << "F" << r.i << "^(" << k << "): deg=" << r.deg
                  << " terms=" << r.f.num.term_count() << "/" << r.f.den.term_count()
                  << "\n";
    if (want_struct && want_naive)
        std::cerr << "engines agree: " << (all_agree ? "yes" : "NO") << "\n";

    emit(oo, [&](ReportFormat f) -> std::string {
        if (f == ReportFormat::Csv) {
            std::string out = "i,num,den,deg,agree\n";
            for (const auto& r : rows) {
                out += std::to_string(r.i) + "," +
                       csv_escape(serialize_polynomial(r.f.num, sys.vars)) + "," +
                       csv_escape(serialize_polynomial(r.f.den, sys.vars)) + "," +
                       std::to_string(r.deg) + "," + (r.agree ? "1" : "0") + "\n";
            }
            return out;
        }
        ojson doc;
        doc["k"] = k;
        doc["engine"] = engine;
        ojson comps = ojson::array();
        for (const auto& r : rows) {
            ojson jr;
            jr["i"] = r.i;
            jr["num"] = serialize_polynomial(r.f.num, sys.vars);
            jr["den"] = serialize_polynomial(r.f.den, sys.vars);
            jr["deg"] = r.deg;
            jr["agree"] = r.agree;
            comps.push_back(std::move(jr));
        }
        doc["components"] = std::move(comps);
        doc["engines_agree"] = all_agree;
        return doc.dump(2) + "\n";
    });
    return all_agree ? 0 : 1;
}

// --- growth ------------------------------------------------------------------

int cmd_growth(const std::string& syspath, int64_t k, bool timings, uint64_t guard,
               const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    ValidationResult res = validate_system(sys);
    if (const auto* v = std::get_if<ConditionViolation>(&res)) {
        std::cerr << "invalid system: level " << v->level << " part " << v->part << ": "
                  << v->reason << "\n";
        return 1;
    }
    GrowthReport rep = growth_report(sys, k, guard, timings);
    if (!timings) {
        for (auto& r : rep.rows) {
            r.t_naive_ns = 0;
            r.t_struct_ns = 0;
        }
    }
    size_t bad_deg = 0, bad_h = 0;
    for (const auto& r : rep.rows) {
        if (!r.ok_deg) ++bad_deg;
        if (!r.ok_h) ++bad_h;
    }
    std::cerr << "growth: " << rep.rows.size() << " rows (levels 1.." << rep.n
              << ", k=1.." << rep.k_max << "); degree mismatches: " << bad_deg
              << ", height bound violations: " << bad_h << "\n";
    emit(oo, [&](ReportFormat f) { return render_growth(rep, f); });
    return (bad_deg == 0 && bad_h == 0) ? 0 : 1;
}

// --- periodic ----------------------------------------------------------------

int cmd_periodic(const std::string& syspath, const std::vector<std::string>& pspecs,
                 uint64_t k, int jobs, uint64_t scan_cap, bool check, uint64_t check_cap,
                 const ExperimentConfig& cfg, const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    std::vector<uint64_t> primes = expand_primes(pspecs, cfg.prime_lo, cfg.prime_hi);
    if (primes.empty()) throw std::invalid_argument("no primes selected");
    std::vector<PeriodicCountRow> rows = periodic_count_table(sys, primes, k, jobs, scan_cap);

    std::vector<int64_t> bf(rows.size(), -1);
    size_t checked = 0, mismatches = 0;
    if (check) {
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.degenerate || r.count_fp < 0) continue;
            mpz_class total;
            mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(r.p),
                          static_cast<unsigned long>(sys.n));
            if (total > check_cap) continue;
            ReducedSystem rsys = reduce_system(sys, r.p);
            PrimeFieldCtx K(r.p);
            bf[i] = static_cast<int64_t>(periodic_points_bruteforce(rsys, K, k, check_cap)
                                             .size());
            ++checked;
            if (bf[i] != r.count_fp) ++mismatches;
        }
    }

    StabilizationSummary stab = stabilize(rows);
    size_t degenerate = 0, nonfinite = 0;
    for (const auto& r : rows) {
        if (r.degenerate) ++degenerate;
        if (r.nonfinite) ++nonfinite;
    }
    std::cerr << "periodic: " << rows.size() << " primes, k=" << k << " (degenerate "
              << degenerate << ", nonfinite " << nonfinite << ")\n";
    if (check)
        std::cerr << "engines agree: " << (mismatches == 0 ? "yes" : "NO") << " ("
                  << checked << " rows cross-checked)\n";
    if (stab.has_majority)
        std::cerr << "stabilization: majority count " << stab.majority_count.get_str()
                  << " on " << stab.majority_size << "/" << stab.usable
                  << " usable rows; bad primes: " << stab.bad_primes.size() << "\n";
    else
        std::cerr << "stabilization: no strict majority (" << stab.usable
                  << " usable rows)\n";

    emit(oo, [&](ReportFormat f) {
        return render_periodic(rows, &stab, f, check ? &bf : nullptr);
    });
    if (mismatches > 0) return 1;
    return stab.has_majority ? 0 : 1;
}

// --- orbit -------------------------------------------------------------------

int cmd_orbit(const std::string& syspath, uint64_t p, const std::string& wtext,
              uint64_t maxlen, bool brent, const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    if (!is_prime_u64(p)) throw std::invalid_argument("--p must be prime");
    ReducedSystem rsys = reduce_system(sys, p);
    if (rsys.degenerate()) {
        std::cerr << "reduction mod " << p << " is degenerate at level(s):";
        for (size_t i = 0; i < rsys.level_degenerate.size(); ++i)
            if (rsys.level_degenerate[i]) std::cerr << " " << (i + 1);
        std::cerr << "\n";
        return 1;
    }
    std::vector<uint64_t> w = parse_u64_list(wtext, "--w");
    if (static_cast<int>(w.size()) != sys.n)
        throw std::invalid_argument("--w needs " + std::to_string(sys.n) + " coordinates");
    for (uint64_t& x : w) x %= p;
    PrimeFieldCtx K(p);
    OrbitRecord<PrimeFieldCtx> rec = orbit(rsys, K, w, maxlen, brent);
    switch (rec.status) {
        case OrbitStatus::EnteredCycle:
            std::cerr << "orbit: entered a cycle; tail " << rec.tail_length << ", period "
                      << rec.period << ", S(w)=" << rec.s_value << "\n";
            break;
        case OrbitStatus::HitPole:
            std::cerr << "orbit: hit a pole at step " << rec.pole_step
                      << "; S(w)=" << rec.s_value << "\n";
            break;
        case OrbitStatus::Truncated:
            std::cerr << "orbit: truncated after " << maxlen << " stored points\n";
            break;
    }
    emit(oo, [&](ReportFormat f) { return render_orbit(rec, p, sys.vars, f); });
    return 0;
}

// --- variety -----------------------------------------------------------------

int cmd_variety(const std::string& syspath, const std::string& vpath,
                const std::vector<std::string>& pspecs, uint64_t ell, double epsilon,
                int jobs, uint64_t scan_cap, const ExperimentConfig& cfg,
                const OutOpts& oo) {
    TriangularSystem sys = load_system(syspath);
    Variety V = parse_variety(read_text_file(vpath), sys.vars);
    std::vector<uint64_t> primes = expand_primes(pspecs, cfg.prime_lo, cfg.prime_hi);
    if (primes.empty()) throw std::invalid_argument("no primes selected");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("--epsilon must lie in (0, 1)");
    std::vector<HitFreqRow> rows = hit_frequency_table(sys, V, primes, ell, jobs, scan_cap);

    std::set<uint64_t> used;
    size_t exceed = 0, insufficient = 0;
    for (const auto& r : rows) {
        used.insert(r.p);
        if (static_cast<double>(r.hits) > epsilon * static_cast<double>(r.ell)) ++exceed;
        if (!r.s_sufficient) ++insufficient;
    }
    std::cerr << "variety: " << rows.size() << " sampled points over " << used.size() << "/"
              << primes.size() << " primes (ell=" << ell << ", epsilon=" << fmt_double(epsilon)
              << "); exceedances: " << exceed << "; short orbits (S(w) < ell): "
              << insufficient << "\n";
    if (exceed > 0)
        std::cerr << "note: " << exceed
                  << " point(s) exceeded the eps*ell frequency threshold\n";
    emit(oo, [&](ReportFormat f) { return render_hits(rows, epsilon, f); });
    return 0;
}

// --- bounds ------------------------------------------------------------------

int cmd_bounds(const std::string& syspath, const std::string& vpath, int64_t n_opt,
               int64_t d_opt, double h_opt, int64_t s_opt, int64_t D_opt, int64_t k,
               double epsilon, int64_t L, bool have_n, bool have_d, bool have_h,
               bool have_s, bool have_D, const OutOpts& oo) {
    int n = 2;
    int64_t d = 1;
    double h = 0.0;
    int64_t s = 1;
    int64_t D = 1;
    if (!syspath.empty()) {
        TriangularSystem sys = load_system(syspath);
        SystemMetrics m = system_metrics(sys);
        n = m.n;
        d = m.d;
        h = m.h;
        if (!vpath.empty()) {
            Variety V = parse_variety(read_text_file(vpath), sys.vars);
            s = static_cast<int64_t>(V.s());
            D = V.D;
        } else {
            D = d;
        }
    } else if (!have_n || !have_d) {
        throw std::invalid_argument("bounds needs a system file or explicit --n and --d");
    }
    if (have_n) n = static_cast<int>(n_opt);
    if (have_d) d = d_opt;
    if (have_h) h = h_opt;
    if (have_s) s = s_opt;
    if (have_D) D = D_opt;

    NullstellensatzBound nb =
        nullstellensatz_bound(n, static_cast<long>(d), h, static_cast<long>(s));
    TheoremParams tp;
    tp.n = n;
    tp.k = k;
    tp.s = s;
    tp.D = D;
    tp.eps = epsilon;
    tp.L = L;
    std::vector<TheoremFragment> frags;
    for (const char* which : {"T1", "T1a", "T2", "T3"})
        frags.push_back(theorem_thresholds(which, tp));

    std::cerr << "bounds: n=" << n << " d=" << d << " h=" << fmt_double(h) << " s=" << s
              << " D=" << D << " eps=" << fmt_double(epsilon) << " L=" << L << "\n";
    std::cerr << "  nullstellensatz value: " << fmt_double(nb.value) << "\n";
    for (const auto& fr : frags) {
        std::cerr << "  " << fr.which << ":";
        for (const auto& [q, v] : fr.display) std::cerr << " " << q << "=" << v;
        std::cerr << "\n";
    }
    emit(oo, [&](ReportFormat f) { return render_bounds(nb, frags, f); });
    return 0;
}

// --- gap ---------------------------------------------------------------------

int cmd_gap(const std::string& seqtext, int64_t N, bool have_N, const OutOpts& oo) {
    std::vector<int64_t> seq = parse_i64_list(seqtext, "--seq");
    if (seq.empty()) throw std::invalid_argument("--seq must be nonempty");
    if (!have_N) N = seq.back();
    GapResult g = gap_structure(seq, N);
    std::cerr << "gap: r=" << g.r << " occurs " << g.count << " time(s); admissible r <= "
              << fmt_double(g.r_max) << ", guaranteed count >= " << fmt_double(g.count_min)
              << "\n";
    emit(oo, [&](ReportFormat f) { return render_gap(g, f); });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    // --config is honored before option parsing so its values become defaults
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    }
    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = parse_config(read_text_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"triangular rational dynamics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_dummy;
    app.add_option("--config", config_dummy, "experiment config file (JSON)");
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for table subcommands");
    uint64_t seed_flag = 0;
    CLI::Option* seed_opt =
        app.add_option("--seed", seed_flag, "randomness seed (TRIDYN_SEED env fallback)");

    std::string syspath, vpath, wtext, seqtext, engine = "both";
    std::vector<std::string> pspecs;
    int64_t k = static_cast<int64_t>(cfg.k_hi);
    int level = 0;
    uint64_t ell = cfg.ell, maxlen = cfg.maxlen, scan_cap = cfg.scan_cap;
    uint64_t check_cap = 1ull << 16;
    double epsilon = cfg.epsilon;
    bool timings = false, brent = false, no_check = false;
    int64_t N = 0, n_opt = 0, d_opt = 0, s_opt = 0, D_opt = 0, L_opt = 1;
    double h_opt = 0.0;

    OutOpts oo_validate, oo_iterate, oo_growth, oo_periodic, oo_orbit, oo_variety,
        oo_bounds, oo_gap;

    CLI::App* c_validate = app.add_subcommand("validate", "check the dominance shape");
    c_validate->add_option("system", syspath, "system JSON file")->required();
    add_out_opts(c_validate, oo_validate);

    CLI::App* c_iterate = app.add_subcommand("iterate", "compute F^(k) with both engines");
    c_iterate->add_option("system", syspath, "system JSON file")->required();
    c_iterate->add_option("--k", k, "iteration count")->check(CLI::PositiveNumber);
    c_iterate->add_option("--level", level, "restrict to one level (default: all)");
    c_iterate->add_option("--engine", engine, "both | structured | naive")
        ->check(CLI::IsMember({"both", "structured", "naive"}));
    add_out_opts(c_iterate, oo_iterate);

    CLI::App* c_growth = app.add_subcommand("growth", "degree and height growth table");
    c_growth->add_option("system", syspath, "system JSON file")->required();
    c_growth->add_option("--k", k, "iteration depth")->check(CLI::PositiveNumber);
    c_growth->add_flag("--timings", timings, "measure engine wall times (nondeterministic)");
    add_out_opts(c_growth, oo_growth);

    CLI::App* c_periodic = app.add_subcommand("periodic", "periodic point counts mod p");
    c_periodic->add_option("system", syspath, "system JSON file")->required();
    c_periodic->add_option("--p", pspecs, "primes: repeated value or lo:hi range");
    c_periodic->add_option("--k", k, "period")->check(CLI::PositiveNumber);
    c_periodic->add_option("--scan-cap", scan_cap, "field enumeration cap");
    c_periodic->add_flag("--no-check", no_check, "skip the brute-force cross-check");
    c_periodic->add_option("--check-cap", check_cap, "p^n cap for the cross-check");
    add_out_opts(c_periodic, oo_periodic);

    uint64_t p_single = 0;
    CLI::App* c_orbit = app.add_subcommand("orbit", "walk one forward orbit mod p");
    c_orbit->add_option("system", syspath, "system JSON file")->required();
    c_orbit->add_option("--p", p_single, "prime modulus")->required();
    c_orbit->add_option("--w", wtext, "start point, comma-separated")->required();
    c_orbit->add_option("--maxlen", maxlen, "stored point cap");
    c_orbit->add_flag("--brent", brent, "constant-memory cycle detection");
    add_out_opts(c_orbit, oo_orbit);

    CLI::App* c_variety = app.add_subcommand("variety", "orbit-variety hit frequencies");
    c_variety->add_option("system", syspath, "system JSON file")->required();
    c_variety->add_option("--variety", vpath, "variety JSON file")->required();
    c_variety->add_option("--p", pspecs, "primes: repeated value or lo:hi range");
    c_variety->add_option("--ell", ell, "orbit window length")->check(CLI::PositiveNumber);
    c_variety->add_option("--epsilon", epsilon, "frequency threshold factor");
    c_variety->add_option("--scan-cap", scan_cap, "field enumeration cap");
    add_out_opts(c_variety, oo_variety);

    CLI::App* c_bounds = app.add_subcommand("bounds", "explicit bound formulas");
    c_bounds->add_option("system", syspath, "system JSON file (metrics source)");
    c_bounds->add_option("--variety", vpath, "variety JSON file (s and D source)");
    CLI::Option* o_n = c_bounds->add_option("--n", n_opt, "variable count");
    CLI::Option* o_d = c_bounds->add_option("--d", d_opt, "degree");
    CLI::Option* o_h = c_bounds->add_option("--height", h_opt, "height (nats)");
    CLI::Option* o_s = c_bounds->add_option("--s", s_opt, "polynomial count");
    CLI::Option* o_D = c_bounds->add_option("--D", D_opt, "variety degree");
    c_bounds->add_option("--k", k, "iteration count");
    c_bounds->add_option("--epsilon", epsilon, "frequency threshold factor");
    c_bounds->add_option("--L", L_opt, "vanishing order");
    add_out_opts(c_bounds, oo_bounds);

    CLI::App* c_gap = app.add_subcommand("gap", "dominant gap of an integer sequence");
    c_gap->add_option("--seq", seqtext, "strictly increasing values, comma-separated")
        ->required();
    CLI::Option* o_N = c_gap->add_option("--N", N, "interval upper end (default: last value)");
    add_out_opts(c_gap, oo_gap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        uint64_t seed = resolve_seed(seed_opt->count() > 0, seed_flag, cfg.seed);
        if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
        if (c_validate->parsed()) return cmd_validate(syspath, oo_validate);
        if (c_iterate->parsed())
            return cmd_iterate(syspath, k, level, engine, seed, cfg.term_guard, oo_iterate);
        if (c_growth->parsed())
            return cmd_growth(syspath, k, timings, cfg.term_guard, oo_growth);
        if (c_periodic->parsed())
            return cmd_periodic(syspath, pspecs, static_cast<uint64_t>(k), jobs, scan_cap,
                                !no_check, check_cap, cfg, oo_periodic);
        if (c_orbit->parsed())
            return cmd_orbit(syspath, p_single, wtext, maxlen, brent, oo_orbit);
        if (c_variety->parsed())
            return cmd_variety(syspath, vpath, pspecs, ell, epsilon, jobs, scan_cap, cfg,
                               oo_variety);
        if (c_bounds->parsed())
            return cmd_bounds(syspath, vpath, n_opt, d_opt, h_opt, s_opt, D_opt, k, epsilon,
                              L_opt, o_n->count() > 0, o_d->count() > 0, o_h->count() > 0,
                              o_s->count() > 0, o_D->count() > 0, oo_bounds);
        if (c_gap->parsed()) return cmd_gap(seqtext, N, o_N->count() > 0, oo_gap);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TermGuardExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
