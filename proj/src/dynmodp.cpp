#include "tridyn/dynmodp.hpp"

#include <map>

#include "tridyn/bounds.hpp"

namespace tridyn {

FpPoly reduce_poly(const ZPoly& f, uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("reduce_poly: modulus must be prime");
    FpPoly out;
    out.maxe.assign(static_cast<size_t>(f.nvars()), 0);
    mpz_class pm(static_cast<unsigned long>(p));
    for (const auto& [e, c] : f.terms()) {
        mpz_class r = c % pm;
        if (r < 0) r += pm;
        if (r == 0) continue;
        for (size_t j = 0; j < e.size(); ++j) out.maxe[j] = std::max(out.maxe[j], e[j]);
        out.terms.push_back({e, r.get_ui()});
    }
    return out;
}

namespace {

uint64_t mod_res(const mpz_class& v, uint64_t p) {
    mpz_class r = v % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

} // namespace

ReducedSystem reduce_system(const TriangularSystem& sys, uint64_t p) {
    LeadingData lead = validate_or_throw(sys);
    if (!is_prime_u64(p)) throw std::invalid_argument("reduce_system: modulus must be prime");
    ReducedSystem r;
    r.p = p;
    r.n = sys.n;
    r.level_degenerate.assign(static_cast<size_t>(sys.n), false);
    for (int i = 1; i < sys.n; ++i) {
        const auto& L = sys.levels[static_cast<size_t>(i) - 1];
        ReducedLevel rl;
        rl.e = L.e;
        rl.G = reduce_poly(L.G, p);
        rl.H = reduce_poly(L.H, p);
        bool flag = mod_res(lead.rows[static_cast<size_t>(i) - 1].coeff, p) == 0;
        if (L.e < 0 && rl.G.is_zero()) flag = true; // reciprocal level lost G entirely
        r.level_degenerate[static_cast<size_t>(i) - 1] = flag;
        r.levels.push_back(std::move(rl));
    }
    r.last = {sys.last.e, mod_res(sys.last.g, p), mod_res(sys.last.h, p)};
    if (r.last.g == 0) r.level_degenerate[static_cast<size_t>(sys.n) - 1] = true;
    return r;
}

// ---------------------------------------------------------------------------
// closure counting

namespace {

struct ClosureAcc {
    bool nonfinite = false;
};

template <class Ctx>
std::vector<typename ExtFieldCtx<Ctx>::Elem> lift_point(const ExtFieldCtx<Ctx>& K2,
                                                        const std::vector<typename Ctx::Elem>& w) {
    std::vector<typename ExtFieldCtx<Ctx>::Elem> out;
    out.reserve(w.size());
    for (const auto& c : w) out.push_back(K2.from_base(c));
    return out;
}

// One level of the bottom-up closure solve over the current field K. Every
// irreducible factor of the level equation contributes its full conjugacy
// class: one representative root is followed (descending into the canonical
// degree-d extension when d > 1) and the branch count is multiplied by d,
// since periodicity and pole-freedom are preserved by conjugation over K.
template <int Depth, class Ctx>
mpz_class closure_level(const ReducedSystem& rsys, const Ctx& K, int i,
                        const std::vector<typename Ctx::Elem>& tail, uint64_t k,
                        ClosureAcc& acc) {
    using Elem = typename Ctx::Elem;
    std::vector<std::vector<Elem>> torb;
    if (i < rsys.n) {
        auto t = detail::tail_orbit(rsys, K, i, tail, k);
        if (!t) return 0;
        torb = std::move(*t);
    }
    auto eq = detail::level_equation(rsys, K, i, torb, k);
    if (eq.nowhere) return 0;
    if (eq.identity) {
        acc.nonfinite = true;
        return 0;
    }
    if (up::deg(eq.poly) < 1) return 0;
    const bool minus = (i == rsys.n ? rsys.last.e : rsys.levels[static_cast<size_t>(i) - 1].e) < 0;
    auto fac = up::factor(K, eq.poly, 0xd15c0u + static_cast<uint64_t>(i));
    mpz_class total = 0;
    for (const auto& [f, mult] : fac.factors) {
        (void)mult; // repeated roots are still single closure points
        int d = up::deg(f);
        if (d == 1) {
            Elem root = K.neg(f[0]); // factor is monic linear
            if (minus && !detail::level_pole_free(rsys, K, i, root, torb, k)) continue;
            if (i == 1) {
                total += 1;
                continue;
            }
            auto sub = tail;
            sub[static_cast<size_t>(i) - 1] = root;
            total += closure_level<Depth, Ctx>(rsys, K, i - 1, sub, k, acc);
            continue;
        }
        if (i == 1 && !minus) {
            total += d; // d distinct roots, nothing left to solve or filter
            continue;
        }
        if constexpr (Depth == 0) {
            throw std::domain_error("extension-degree cap exceeded");
        } else {
            ExtFieldCtx<Ctx> K2(K, up::find_irreducible(K, d));
            up::UPoly<ExtFieldCtx<Ctx>> f2;
            f2.reserve(f.size());
            for (const auto& c : f) f2.push_back(K2.from_base(c));
            auto roots2 = up::roots(K2, f2);
            if (roots2.empty())
                throw std::logic_error("irreducible factor rootless in its own splitting field");
            const auto& root = roots2.front();
            if (minus) {
                std::vector<std::vector<typename ExtFieldCtx<Ctx>::Elem>> torb2;
                torb2.reserve(torb.size());
                for (const auto& t : torb) torb2.push_back(lift_point(K2, t));
                if (!detail::level_pole_free(rsys, K2, i, root, torb2, k)) continue;
            }
            if (i == 1) {
                total += d;
                continue;
            }
            auto sub = lift_point(K2, tail);
            sub[static_cast<size_t>(i) - 1] = root;
            total += mpz_class(d) *
                     closure_level<Depth - 1, ExtFieldCtx<Ctx>>(rsys, K2, i - 1, sub, k, acc);
        }
    }
    return total;
}

} // namespace

ClosureCount closure_periodic_count(const ReducedSystem& rsys, uint64_t k) {
    if (k < 1) throw std::invalid_argument("periodic points: k must be >= 1");
    if (rsys.degenerate())
        throw std::domain_error("closure counting rejects a degenerate reduced system");
    if (rsys.n > 3) throw std::domain_error("closure counting is limited to n <= 3");
    PrimeFieldCtx K(rsys.p);
    ClosureAcc acc;
    std::vector<uint64_t> seed_tail(static_cast<size_t>(rsys.n), 0);
    mpz_class c = closure_level<3, PrimeFieldCtx>(rsys, K, rsys.n, seed_tail, k, acc);
    if (acc.nonfinite) return {mpz_class(0), true};
    return {c, false};
}

std::vector<int64_t> vk_equation_degrees(const TriangularSystem& sys, int64_t k) {
    if (k < 1) throw std::invalid_argument("vk_equation_degrees: k must be >= 1");
    std::vector<int64_t> degs(static_cast<size_t>(sys.n), 0);
    for (int i = 1; i < sys.n; ++i) {
        auto pld = predicted_level_degrees(sys, i, k);
        int64_t dk = pld.degF[static_cast<size_t>(k)];
        if (sys.levels[static_cast<size_t>(i) - 1].e > 0)
            degs[static_cast<size_t>(i) - 1] = std::max<int64_t>(dk, 1);
        else
            degs[static_cast<size_t>(i) - 1] =
                std::max<int64_t>(dk, 1 + pld.degF[static_cast<size_t>(k) - 1]);
    }
    degs[static_cast<size_t>(sys.n) - 1] = sys.last.e > 0 ? 1 : 2;
    return degs;
}

// ---------------------------------------------------------------------------
// varieties

Variety make_variety(std::vector<ZPoly> defs) {
    if (defs.empty()) throw std::invalid_argument("variety needs at least one polynomial");
    Variety V;
    for (const auto& f : defs) {
        if (f.is_zero()) throw std::invalid_argument("variety polynomial must be nonzero");
        if (f.nvars() != defs.front().nvars())
            throw std::invalid_argument("variety polynomials must share one variable set");
        V.D = std::max<int64_t>(V.D, f.total_degree());
        mpz_class m = max_abs_coeff(f);
        if (m > V.H_exact) V.H_exact = m;
    }
    V.H = log_mpz(V.H_exact);
    V.L = std::move(defs);
    return V;
}

// ---------------------------------------------------------------------------
// experiment drivers

std::vector<PeriodicCountRow> periodic_count_table(const TriangularSystem& sys,
                                                   const std::vector<uint64_t>& primes,
                                                   uint64_t k, int jobs, uint64_t scan_cap) {
    validate_or_throw(sys);
    std::vector<uint64_t> ps = primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    mpz_class bez = bezout_cap(vk_equation_degrees(sys, static_cast<int64_t>(k)));
    return parallel_map<PeriodicCountRow>(ps.size(), jobs, [&](size_t idx) {
        PeriodicCountRow row;
        row.p = ps[idx];
        row.k = k;
        row.bezout = bez;
        ReducedSystem rsys = reduce_system(sys, ps[idx]);
        if (rsys.degenerate()) {
            row.degenerate = true;
            return row;
        }
        PrimeFieldCtx K(ps[idx]);
        row.count_fp =
            static_cast<int64_t>(periodic_points_triangular(rsys, K, k, scan_cap).size());
        ClosureCount cc = closure_periodic_count(rsys, k);
        row.nonfinite = cc.nonfinite;
        row.count_closure = cc.count;
        return row;
    });
}

StabilizationSummary stabilize(const std::vector<PeriodicCountRow>& rows) {
    StabilizationSummary s;
    std::map<mpz_class, size_t> freq;
    for (const auto& r : rows) {
        if (r.degenerate || r.nonfinite) {
            s.bad_primes.push_back(r.p);
            continue;
        }
        ++s.usable;
        ++freq[r.count_closure];
    }
    for (const auto& [count, m] : freq) {
        if (m > s.majority_size) {
            s.majority_size = m;
            s.majority_count = count;
        }
    }
    s.has_majority = s.usable > 0 && 2 * s.majority_size > s.usable;
    if (s.has_majority) {
        for (const auto& r : rows)
            if (!r.degenerate && !r.nonfinite && r.count_closure != s.majority_count)
                s.bad_primes.push_back(r.p);
        std::sort(s.bad_primes.begin(), s.bad_primes.end());
    }
    return s;
}

std::vector<HitFreqRow> hit_frequency_table(const TriangularSystem& sys, const Variety& V,
                                            const std::vector<uint64_t>& primes, uint64_t ell,
                                            int jobs, uint64_t scan_cap) {
    validate_or_throw(sys);
    if (static_cast<int>(V.L.front().nvars()) != sys.n)
        throw std::invalid_argument("variety arity does not match the system");
    std::vector<uint64_t> ps = primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    auto per_prime = parallel_map<std::vector<HitFreqRow>>(ps.size(), jobs, [&](size_t idx) {
        std::vector<HitFreqRow> rows;
        uint64_t p = ps[idx];
        ReducedSystem rsys = reduce_system(sys, p);
        if (rsys.degenerate()) return rows;
        for (const auto& f : V.L)
            if (reduce_poly(f, p).is_zero()) return rows; // variety collapsed mod p
        mpz_class total;
        mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(sys.n));
        if (total > scan_cap)
            throw std::domain_error("scan cap exceeded: too many initial points");
        PrimeFieldCtx K(p);
        std::vector<uint64_t> w(static_cast<size_t>(sys.n), 0);
        const uint64_t count = total.get_ui();
        for (uint64_t t = 0; t < count; ++t) {
            HitSet hs = variety_hits(rsys, K, V, w, ell);
            HitFreqRow row;
            row.p = p;
            row.w = w;
            row.hits = hs.hits.size();
            row.ell = ell;
            row.s_sufficient = hs.s_sufficient;
            rows.push_back(std::move(row));
            for (size_t j = w.size(); j-- > 0;) { // last coordinate fastest: lex row order
                if (++w[j] < p) break;
                w[j] = 0;
                if (j == 0) break;
            }
        }
        return rows;
    });
    std::vector<HitFreqRow> out;
    for (auto& rows : per_prime)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

EscapeReport escape_check(const TriangularSystem& sys, const Variety& V, uint64_t k,
                          const std::vector<uint64_t>& primes, int jobs, uint64_t scan_cap) {
    validate_or_throw(sys);
    if (sys.n > 2) throw std::domain_error("escape check is limited to n <= 2");
    if (k < 1) throw std::invalid_argument("escape check: k must be >= 1");
    if (static_cast<int>(V.L.front().nvars()) != sys.n)
        throw std::invalid_argument("variety arity does not match the system");
    EscapeReport rep;
    int64_t gamma = 1;
    for (int i = 1; i <= sys.n; ++i)
        gamma = std::max(gamma, predicted_degree(sys, i, static_cast<int64_t>(k)));
    // D^s (D n gamma^(n-1))^s
    mpz_class gpow;
    mpz_ui_pow_ui(gpow.get_mpz_t(), static_cast<unsigned long>(gamma),
                  static_cast<unsigned long>(sys.n - 1));
    mpz_class inner = mpz_class(V.D) * sys.n * gpow;
    mpz_class b1, b2;
    mpz_pow_ui(b1.get_mpz_t(), mpz_class(V.D).get_mpz_t(), static_cast<unsigned long>(V.s()));
    mpz_pow_ui(b2.get_mpz_t(), inner.get_mpz_t(), static_cast<unsigned long>(V.s()));
    rep.bound = b1 * b2;

    std::vector<uint64_t> ps = primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    struct PerPrime {
        bool skipped = false;
        EscapeRow row;
    };
    auto per_prime = parallel_map<PerPrime>(ps.size(), jobs, [&](size_t idx) {
        PerPrime out;
        uint64_t p = ps[idx];
        out.row.p = p;
        ReducedSystem rsys = reduce_system(sys, p);
        if (rsys.degenerate()) {
            out.skipped = true;
            return out;
        }
        std::vector<FpPoly> Lp;
        for (const auto& f : V.L) Lp.push_back(reduce_poly(f, p));
        mpz_class total;
        mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(sys.n));
        if (total > scan_cap)
            throw std::domain_error("scan cap exceeded: too many initial points");
        PrimeFieldCtx K(p);
        std::vector<uint64_t> w(static_cast<size_t>(sys.n), 0);
        const uint64_t count = total.get_ui();
        for (uint64_t t = 0; t < count; ++t) {
            bool onV = true;
            for (const auto& f : Lp)
                if (!K.is_zero(eval_fp(K, f, w))) {
                    onV = false;
                    break;
                }
            if (onV) {
                auto cur = w;
                bool defined = true;
                for (uint64_t j = 0; j < k; ++j)
                    if (!step_point(rsys, K, cur)) {
                        defined = false;
                        break;
                    }
                if (defined) {
                    bool imageOnV = true;
                    for (const auto& f : Lp)
                        if (!K.is_zero(eval_fp(K, f, cur))) {
                            imageOnV = false;
                            break;
                        }
                    if (imageOnV) ++out.row.count;
                }
            }
            for (size_t j = w.size(); j-- > 0;) {
                if (++w[j] < p) break;
                w[j] = 0;
                if (j == 0) break;
            }
        }
        return out;
    });
    for (auto& pp : per_prime) {
        if (pp.skipped) {
            rep.skipped.push_back(pp.row.p);
            continue;
        }
        if (pp.row.count > rep.bound) rep.suspect = true;
        rep.rows.push_back(pp.row);
    }
    return rep;
}

} // namespace tridyn
