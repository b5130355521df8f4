#include "tridyn/sysio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tridyn {

using ojson = nlohmann::ordered_json;

namespace {

const ZZRing kZZ{};

struct Loc {
    int line = 1;
    int col = 1;
};

Loc find_loc(const std::string& input, size_t off) {
    Loc loc;
    for (size_t i = 0; i < off && i < input.size(); ++i) {
        if (input[i] == '\n') {
            ++loc.line;
            loc.col = 1;
        } else {
            ++loc.col;
        }
    }
    return loc;
}

std::string parse_msg(const std::string& input, size_t off, const std::string& expected) {
    Loc loc = find_loc(input, off);
    std::ostringstream os;
    os << "parse error at line " << loc.line << ", col " << loc.col
       << ": expected " << expected;
    return os.str();
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

} // namespace

ParseError::ParseError(const std::string& input, size_t off, std::string what_expected)
    : std::runtime_error(parse_msg(input, off, what_expected)),
      offset(off),
      expected(std::move(what_expected)) {
    Loc loc = find_loc(input, off);
    line = loc.line;
    col = loc.col;
}

// --- polynomial text ---------------------------------------------------------

namespace {

struct PolyCursor {
    const std::string& src;
    size_t pos = 0;

    bool eof() const { return pos >= src.size(); }
    char peek() const { return src[pos]; }

    void skip_ws() {
        while (!eof() && is_space(src[pos])) ++pos;
    }

    // consumes '+', '-', or U+2212; 0 when the next token is not a sign
    int try_sign() {
        if (eof()) return 0;
        if (src[pos] == '+') {
            ++pos;
            return +1;
        }
        if (src[pos] == '-') {
            ++pos;
            return -1;
        }
        if (src.compare(pos, 3, "\xe2\x88\x92") == 0) {
            pos += 3;
            return -1;
        }
        return 0;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(src, pos, expected);
    }
};

} // namespace

ZPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
    const int n = static_cast<int>(vars.size());
    PolyCursor cur{text};
    ZPoly out(kZZ, n);

    cur.skip_ws();
    if (cur.eof()) cur.fail("a term");
    int sign = cur.try_sign();
    if (sign == 0) sign = +1;

    for (;;) {
        mpz_class coeff(sign);
        ExpVec exps(n, 0);
        bool first_factor = true;
        for (;;) {
            cur.skip_ws();
            if (cur.eof() || (!is_digit(cur.peek()) && !is_ident_start(cur.peek()))) {
                cur.fail(first_factor ? "a coefficient or variable"
                                      : "a coefficient or variable after '*'");
            }
            if (is_digit(cur.peek())) {
                size_t start = cur.pos;
                while (!cur.eof() && is_digit(cur.peek())) ++cur.pos;
                coeff *= mpz_class(text.substr(start, cur.pos - start));
            } else {
                size_t start = cur.pos;
                while (!cur.eof() && is_ident_char(cur.peek())) ++cur.pos;
                std::string name = text.substr(start, cur.pos - start);
                auto it = std::find(vars.begin(), vars.end(), name);
                if (it == vars.end())
                    throw ParseError(text, start, "a known variable (got '" + name + "')");
                int idx = static_cast<int>(it - vars.begin());
                long long pw = 1;
                size_t save = cur.pos;
                cur.skip_ws();
                if (!cur.eof() && cur.peek() == '^') {
                    ++cur.pos;
                    cur.skip_ws();
                    if (cur.eof() || !is_digit(cur.peek()))
                        cur.fail("a positive integer exponent");
                    size_t dstart = cur.pos;
                    while (!cur.eof() && is_digit(cur.peek())) ++cur.pos;
                    std::string digits = text.substr(dstart, cur.pos - dstart);
                    if (digits.size() > 9)
                        throw ParseError(text, dstart, "an exponent below 10^9");
                    pw = std::stoll(digits);
                    if (pw < 1)
                        throw ParseError(text, dstart, "a positive integer exponent");
                } else {
                    cur.pos = save;
                }
                long long total = static_cast<long long>(exps[idx]) + pw;
                if (total > INT32_MAX)
                    throw ParseError(text, start, "a smaller accumulated exponent");
                exps[idx] = static_cast<int32_t>(total);
            }
            first_factor = false;
            size_t save = cur.pos;
            cur.skip_ws();
            if (!cur.eof() && cur.peek() == '*') {
                ++cur.pos;
                continue;
            }
            cur.pos = save;
            break;
        }
        out.add_term(exps, coeff);

        cur.skip_ws();
        if (cur.eof()) break;
        sign = cur.try_sign();
        if (sign == 0) cur.fail("'+', '-', or end of input");
    }
    return out;
}

std::string serialize_polynomial(const ZPoly& f, const std::vector<std::string>& vars) {
    if (static_cast<int>(vars.size()) != f.nvars())
        throw std::invalid_argument("serialize_polynomial: variable name count mismatch");
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : f.terms()) { // TermMap iterates in descending lex order
        bool neg = c < 0;
        mpz_class mag = abs(c);
        if (first) {
            if (neg) out += '-';
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::vector<std::string> parts;
        bool has_var = std::any_of(e.begin(), e.end(), [](int32_t x) { return x > 0; });
        if (!has_var || mag != 1) parts.push_back(mag.get_str());
        for (size_t j = 0; j < vars.size(); ++j) {
            if (e[j] == 1)
                parts.push_back(vars[j]);
            else if (e[j] > 1)
                parts.push_back(vars[j] + "^" + std::to_string(e[j]));
        }
        for (size_t j = 0; j < parts.size(); ++j) {
            if (j) out += '*';
            out += parts[j];
        }
    }
    return out;
}

// --- JSON plumbing -----------------------------------------------------------

namespace {

ojson parse_json_doc(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t off = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError(text, std::min(off, text.size()), "valid JSON");
    }
}

const ojson& require_key(const ojson& obj, const char* key, const std::string& doc) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(doc + ": missing \"" + key + "\"");
    return *it;
}

int64_t get_int(const ojson& v, const std::string& what) {
    if (!v.is_number_integer()) throw SchemaError(what + " must be an integer");
    return v.get<int64_t>();
}

uint64_t get_u64(const ojson& v, const std::string& what) {
    if (v.is_number_unsigned()) return v.get<uint64_t>();
    if (v.is_number_integer()) {
        int64_t x = v.get<int64_t>();
        if (x < 0) throw SchemaError(what + " must be nonnegative");
        return static_cast<uint64_t>(x);
    }
    throw SchemaError(what + " must be a nonnegative integer");
}

bool decimal_integer(const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (!is_digit(s[i])) return false;
    return true;
}

mpz_class get_mpz(const ojson& v, const std::string& what) {
    if (v.is_number_unsigned()) return mpz_class(static_cast<unsigned long>(v.get<uint64_t>()));
    if (v.is_number_integer()) return mpz_class(static_cast<long>(v.get<int64_t>()));
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (!decimal_integer(s))
            throw SchemaError(what + " is not a decimal integer: \"" + s + "\"");
        return mpz_class(s, 10);
    }
    throw SchemaError(what + " must be an integer or a decimal string");
}

ojson mpz_json(const mpz_class& v) {
    if (v.fits_slong_p()) return ojson(static_cast<int64_t>(v.get_si()));
    return ojson(v.get_str());
}

std::string get_poly_field(const ojson& obj, const char* key, const std::string& where) {
    const ojson& v = require_key(obj, key, where);
    if (!v.is_string())
        throw SchemaError(where + ": \"" + std::string(key) + "\" must be a polynomial string");
    return v.get<std::string>();
}

ZPoly parse_poly_field(const std::string& text, const std::vector<std::string>& vars,
                       const std::string& where) {
    try {
        return parse_polynomial(text, vars);
    } catch (const ParseError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

} // namespace

// --- system documents --------------------------------------------------------

TriangularSystem parse_system(const std::string& json_text) {
    ojson doc = parse_json_doc(json_text);
    const std::string where = "system document";
    if (!doc.is_object()) throw SchemaError(where + ": top level must be an object");
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        if (key != "n" && key != "vars" && key != "levels" && key != "name" &&
            key != "comment")
            throw SchemaError(where + ": unknown key \"" + key + "\"");
    }
    int64_t n = get_int(require_key(doc, "n", where), "\"n\"");
    if (n < 1 || n > 64) throw SchemaError("\"n\" must be between 1 and 64");

    std::vector<std::string> vars;
    if (auto it = doc.find("vars"); it != doc.end()) {
        if (!it->is_array() || static_cast<int64_t>(it->size()) != n)
            throw SchemaError("\"vars\" must be an array of n variable names");
        std::set<std::string> seen;
        for (const auto& v : *it) {
            if (!v.is_string()) throw SchemaError("\"vars\" entries must be strings");
            std::string name = v.get<std::string>();
            if (!is_identifier(name))
                throw SchemaError("variable name \"" + name + "\" is not an identifier");
            if (!seen.insert(name).second)
                throw SchemaError("duplicate variable name \"" + name + "\"");
            vars.push_back(std::move(name));
        }
    } else {
        for (int64_t j = 1; j <= n; ++j) vars.push_back("X" + std::to_string(j));
    }

    const ojson& lv = require_key(doc, "levels", where);
    if (!lv.is_array() || static_cast<int64_t>(lv.size()) != n)
        throw SchemaError("\"levels\" must be an array with one entry per level (n = " +
                          std::to_string(n) + ")");

    std::vector<SystemLevel> levels;
    for (int64_t i = 0; i + 1 < n; ++i) {
        const ojson& L = lv[i];
        std::string lw = "level " + std::to_string(i + 1);
        if (!L.is_object()) throw SchemaError(lw + " must be an object");
        for (const auto& item : L.items()) {
            const std::string& key = item.key();
            if (key != "e" && key != "G" && key != "H" && key != "comment")
                throw SchemaError(lw + ": unknown key \"" + key +
                                  "\" (inner levels take e, G, H)");
        }
        int64_t e = get_int(require_key(L, "e", lw), lw + " \"e\"");
        if (e != 1 && e != -1) throw SchemaError(lw + ": \"e\" must be 1 or -1");
        ZPoly G = parse_poly_field(get_poly_field(L, "G", lw), vars, lw + " \"G\"");
        ZPoly H = parse_poly_field(get_poly_field(L, "H", lw), vars, lw + " \"H\"");
        levels.push_back({static_cast<int>(e), std::move(G), std::move(H)});
    }

    const ojson& Lx = lv[n - 1];
    std::string lw = "level " + std::to_string(n) + " (last)";
    if (!Lx.is_object()) throw SchemaError(lw + " must be an object");
    for (const auto& item : Lx.items()) {
        const std::string& key = item.key();
        if (key != "e" && key != "g" && key != "h" && key != "comment")
            throw SchemaError(lw + ": unknown key \"" + key +
                              "\" (the last level takes e, g, h)");
    }
    int64_t e = get_int(require_key(Lx, "e", lw), lw + " \"e\"");
    if (e != 1 && e != -1) throw SchemaError(lw + ": \"e\" must be 1 or -1");
    LastLevel last;
    last.e = static_cast<int>(e);
    last.g = get_mpz(require_key(Lx, "g", lw), lw + " \"g\"");
    last.h = get_mpz(require_key(Lx, "h", lw), lw + " \"h\"");
    if (last.g == 0) throw SchemaError(lw + ": \"g\" must be nonzero");

    try {
        return make_system(static_cast<int>(n), std::move(levels), std::move(last),
                           std::move(vars));
    } catch (const std::invalid_argument& e2) {
        throw SchemaError(where + ": " + e2.what());
    }
}

std::string serialize_system(const TriangularSystem& sys) {
    ojson doc;
    doc["n"] = sys.n;
    doc["vars"] = sys.vars;
    ojson arr = ojson::array();
    for (const auto& lv : sys.levels) {
        ojson L;
        L["e"] = lv.e;
        L["G"] = serialize_polynomial(lv.G, sys.vars);
        L["H"] = serialize_polynomial(lv.H, sys.vars);
        arr.push_back(std::move(L));
    }
    ojson last;
    last["e"] = sys.last.e;
    last["g"] = mpz_json(sys.last.g);
    last["h"] = mpz_json(sys.last.h);
    arr.push_back(std::move(last));
    doc["levels"] = std::move(arr);
    return doc.dump(2) + "\n";
}

// --- variety documents -------------------------------------------------------

Variety parse_variety(const std::string& json_text, const std::vector<std::string>& vars) {
    ojson doc = parse_json_doc(json_text);
    const std::string where = "variety document";
    if (!doc.is_object()) throw SchemaError(where + ": top level must be an object");
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        if (key != "polys" && key != "name" && key != "comment")
            throw SchemaError(where + ": unknown key \"" + key + "\"");
    }
    const ojson& arr = require_key(doc, "polys", where);
    if (!arr.is_array() || arr.empty())
        throw SchemaError(where + ": \"polys\" must be a nonempty array");
    std::vector<ZPoly> defs;
    for (size_t j = 0; j < arr.size(); ++j) {
        if (!arr[j].is_string())
            throw SchemaError(where + ": \"polys\" entries must be strings");
        defs.push_back(parse_poly_field(arr[j].get<std::string>(), vars,
                                        where + " polys[" + std::to_string(j) + "]"));
    }
    try {
        return make_variety(std::move(defs));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

std::string serialize_variety(const Variety& V, const std::vector<std::string>& vars) {
    ojson doc;
    ojson arr = ojson::array();
    for (const auto& f : V.L) arr.push_back(serialize_polynomial(f, vars));
    doc["polys"] = std::move(arr);
    return doc.dump(2) + "\n";
}

// --- experiment configs ------------------------------------------------------

namespace {

void get_range(const ojson& v, const std::string& what, uint64_t& lo, uint64_t& hi) {
    if (!v.is_array() || v.size() != 2)
        throw SchemaError(what + " must be a two-element array [lo, hi]");
    lo = get_u64(v[0], what + "[0]");
    hi = get_u64(v[1], what + "[1]");
    if (lo > hi) throw SchemaError(what + ": lo exceeds hi");
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ojson doc = parse_json_doc(json_text);
    if (!doc.is_object()) throw SchemaError("config: top level must be an object");
    ExperimentConfig cfg;
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        const ojson& v = item.value();
        if (key == "primes") {
            get_range(v, "config \"primes\"", cfg.prime_lo, cfg.prime_hi);
        } else if (key == "k") {
            get_range(v, "config \"k\"", cfg.k_lo, cfg.k_hi);
            if (cfg.k_lo < 1) throw SchemaError("config \"k\": lo must be >= 1");
        } else if (key == "ell") {
            cfg.ell = get_u64(v, "config \"ell\"");
            if (cfg.ell < 1) throw SchemaError("config \"ell\" must be >= 1");
        } else if (key == "epsilon") {
            if (!v.is_number()) throw SchemaError("config \"epsilon\" must be a number");
            cfg.epsilon = v.get<double>();
            if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
                throw SchemaError("config \"epsilon\" must lie in (0, 1)");
        } else if (key == "seed") {
            cfg.seed = get_u64(v, "config \"seed\"");
        } else if (key == "maxlen") {
            cfg.maxlen = get_u64(v, "config \"maxlen\"");
            if (cfg.maxlen < 1) throw SchemaError("config \"maxlen\" must be >= 1");
        } else if (key == "scan_cap") {
            cfg.scan_cap = get_u64(v, "config \"scan_cap\"");
            if (cfg.scan_cap < 1) throw SchemaError("config \"scan_cap\" must be >= 1");
        } else if (key == "term_guard") {
            cfg.term_guard = get_u64(v, "config \"term_guard\"");
            if (cfg.term_guard < 1) throw SchemaError("config \"term_guard\" must be >= 1");
        } else if (key == "comment") {
            // annotation only
        } else {
            throw SchemaError("config: unknown key \"" + key + "\"");
        }
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    ojson doc;
    doc["primes"] = ojson::array({cfg.prime_lo, cfg.prime_hi});
    doc["k"] = ojson::array({cfg.k_lo, cfg.k_hi});
    doc["ell"] = cfg.ell;
    doc["epsilon"] = cfg.epsilon;
    doc["seed"] = cfg.seed;
    doc["maxlen"] = cfg.maxlen;
    doc["scan_cap"] = cfg.scan_cap;
    doc["term_guard"] = cfg.term_guard;
    return doc.dump(2) + "\n";
}

// --- report rendering --------------------------------------------------------

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

namespace {

struct CsvWriter {
    std::string out;

    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(fields[i]);
        }
        out += '\n';
    }
};

std::string join_u64(const std::vector<uint64_t>& xs, char sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace

std::string render_growth(const GrowthReport& rep, ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        w.row({"i", "k", "deg_measured", "deg_predicted", "h_measured", "bound_5t",
               "bound_l36", "ok_deg", "ok_h", "t_naive_ns", "t_struct_ns"});
        for (const auto& r : rep.rows) {
            w.row({std::to_string(r.i), std::to_string(r.k), std::to_string(r.deg_measured),
                   std::to_string(r.deg_predicted), fmt_double(r.h_measured),
                   r.bound_5t ? fmt_double(*r.bound_5t) : "", fmt_double(r.bound_l36),
                   r.ok_deg ? "1" : "0", r.ok_h ? "1" : "0", std::to_string(r.t_naive_ns),
                   std::to_string(r.t_struct_ns)});
        }
        return w.out;
    }
    ojson doc;
    doc["n"] = rep.n;
    doc["k_max"] = rep.k_max;
    doc["heights_structural"] = rep.heights_structural;
    ojson rows = ojson::array();
    for (const auto& r : rep.rows) {
        ojson jr;
        jr["i"] = r.i;
        jr["k"] = r.k;
        jr["deg_measured"] = r.deg_measured;
        jr["deg_predicted"] = r.deg_predicted;
        jr["h_measured"] = r.h_measured;
        jr["bound_5t"] = r.bound_5t ? ojson(*r.bound_5t) : ojson(nullptr);
        jr["bound_l36"] = r.bound_l36;
        jr["ok_deg"] = r.ok_deg;
        jr["ok_h"] = r.ok_h;
        jr["t_naive_ns"] = r.t_naive_ns;
        jr["t_struct_ns"] = r.t_struct_ns;
        rows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string render_periodic(const std::vector<PeriodicCountRow>& rows,
                            const StabilizationSummary* stab, ReportFormat fmt,
                            const std::vector<int64_t>* bf_counts) {
    if (bf_counts && bf_counts->size() != rows.size())
        throw std::invalid_argument("render_periodic: bf_counts size mismatch");
    auto bf_at = [&](size_t i) { return bf_counts ? (*bf_counts)[i] : int64_t(-1); };
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        w.row({"p", "k", "count_fp", "count_closure", "bezout", "flags"});
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            std::string flags = r.degenerate ? "degenerate" : r.nonfinite ? "nonfinite" : "";
            int64_t bf = bf_at(i);
            if (bf >= 0 && r.count_fp >= 0 && bf != r.count_fp) {
                if (!flags.empty()) flags += '+';
                flags += "engine_mismatch";
            }
            bool closure_known = !r.degenerate && !r.nonfinite;
            w.row({std::to_string(r.p), std::to_string(r.k),
                   r.count_fp < 0 ? "" : std::to_string(r.count_fp),
                   closure_known ? r.count_closure.get_str() : "", r.bezout.get_str(),
                   flags});
        }
        return w.out;
    }
    ojson doc;
    ojson jrows = ojson::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        ojson jr;
        jr["p"] = r.p;
        jr["k"] = r.k;
        jr["degenerate"] = r.degenerate;
        jr["nonfinite"] = r.nonfinite;
        jr["count_fp"] = r.count_fp < 0 ? ojson(nullptr) : ojson(r.count_fp);
        bool closure_known = !r.degenerate && !r.nonfinite;
        jr["count_closure"] = closure_known ? mpz_json(r.count_closure) : ojson(nullptr);
        jr["bezout"] = mpz_json(r.bezout);
        if (bf_counts) {
            int64_t bf = bf_at(i);
            jr["count_bruteforce"] = bf < 0 ? ojson(nullptr) : ojson(bf);
        }
        jrows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(jrows);
    if (stab) {
        ojson js;
        js["has_majority"] = stab->has_majority;
        js["majority_count"] = stab->has_majority ? mpz_json(stab->majority_count)
                                                  : ojson(nullptr);
        js["majority_size"] = stab->majority_size;
        js["usable"] = stab->usable;
        js["bad_primes"] = stab->bad_primes;
        doc["stabilization"] = std::move(js);
    }
    return doc.dump(2) + "\n";
}

namespace {

std::string orbit_status_name(OrbitStatus st) {
    switch (st) {
        case OrbitStatus::EnteredCycle: return "entered_cycle";
        case OrbitStatus::HitPole: return "hit_pole";
        case OrbitStatus::Truncated: return "truncated";
    }
    return "unknown";
}

} // namespace

std::string render_orbit(const OrbitRecord<PrimeFieldCtx>& rec, uint64_t p,
                         const std::vector<std::string>& vars, ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        std::vector<std::string> head = {"m"};
        head.insert(head.end(), vars.begin(), vars.end());
        w.row(head);
        for (size_t m = 0; m < rec.points.size(); ++m) {
            std::vector<std::string> fields = {std::to_string(m)};
            for (uint64_t x : rec.points[m]) fields.push_back(std::to_string(x));
            w.row(fields);
        }
        return w.out;
    }
    ojson doc;
    doc["p"] = p;
    doc["status"] = orbit_status_name(rec.status);
    bool cycled = rec.status == OrbitStatus::EnteredCycle;
    doc["tail_length"] = cycled ? ojson(rec.tail_length) : ojson(nullptr);
    doc["period"] = cycled ? ojson(rec.period) : ojson(nullptr);
    doc["pole_step"] =
        rec.status == OrbitStatus::HitPole ? ojson(rec.pole_step) : ojson(nullptr);
    doc["s_known"] = rec.s_known;
    doc["s_value"] = rec.s_known ? ojson(rec.s_value) : ojson(nullptr);
    ojson pts = ojson::array();
    for (const auto& w : rec.points) pts.push_back(w);
    doc["points"] = std::move(pts);
    return doc.dump(2) + "\n";
}

std::string render_hits(const std::vector<HitFreqRow>& rows, double epsilon,
                        ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        w.row({"p", "w", "ell", "hits", "eps_ell", "exceeds", "s_sufficient"});
        for (const auto& r : rows) {
            double thr = epsilon * static_cast<double>(r.ell);
            bool exceeds = static_cast<double>(r.hits) > thr;
            w.row({std::to_string(r.p), join_u64(r.w, ';'), std::to_string(r.ell),
                   std::to_string(r.hits), fmt_double(thr), exceeds ? "1" : "0",
                   r.s_sufficient ? "1" : "0"});
        }
        return w.out;
    }
    ojson doc;
    doc["epsilon"] = epsilon;
    ojson jrows = ojson::array();
    for (const auto& r : rows) {
        double thr = epsilon * static_cast<double>(r.ell);
        ojson jr;
        jr["p"] = r.p;
        jr["w"] = r.w;
        jr["ell"] = r.ell;
        jr["hits"] = r.hits;
        jr["eps_ell"] = thr;
        jr["exceeds"] = static_cast<double>(r.hits) > thr;
        jr["s_sufficient"] = r.s_sufficient;
        jrows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(jrows);
    return doc.dump(2) + "\n";
}

std::string render_bounds(const std::optional<NullstellensatzBound>& nb,
                          const std::vector<TheoremFragment>& frags, ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        w.row({"which", "quantity", "value"});
        if (nb) {
            w.row({"nullstellensatz", "h_coeff", nb->h_coeff.get_str()});
            w.row({"nullstellensatz", "log_coeff", nb->log_coeff.get_str()});
            w.row({"nullstellensatz", "log_arg", std::to_string(nb->log_arg)});
            w.row({"nullstellensatz", "value", fmt_double(nb->value)});
        }
        for (const auto& fr : frags)
            for (const auto& [quantity, value] : fr.display)
                w.row({fr.which, quantity, value});
        return w.out;
    }
    ojson doc;
    if (nb) {
        ojson jn;
        jn["h_coeff"] = mpz_json(nb->h_coeff);
        jn["log_coeff"] = mpz_json(nb->log_coeff);
        jn["log_arg"] = nb->log_arg;
        jn["value"] = nb->value;
        doc["nullstellensatz"] = std::move(jn);
    } else {
        doc["nullstellensatz"] = nullptr;
    }
    ojson jf = ojson::array();
    for (const auto& fr : frags) {
        ojson j;
        j["which"] = fr.which;
        j["log_bound_exponent"] =
            fr.log_bound_exponent ? mpz_json(*fr.log_bound_exponent) : ojson(nullptr);
        j["count_exponent"] =
            fr.count_exponent ? mpz_json(*fr.count_exponent) : ojson(nullptr);
        j["count_exponent_proof"] =
            fr.count_exponent_proof ? mpz_json(*fr.count_exponent_proof) : ojson(nullptr);
        j["ell_threshold"] = fr.ell_threshold ? ojson(*fr.ell_threshold) : ojson(nullptr);
        j["beta"] = fr.beta ? mpz_json(*fr.beta) : ojson(nullptr);
        j["binom_beta_L1"] = fr.binom_beta_L1 ? mpz_json(*fr.binom_beta_L1) : ojson(nullptr);
        ojson disp = ojson::array();
        for (const auto& [quantity, value] : fr.display)
            disp.push_back(ojson::array({quantity, value}));
        j["display"] = std::move(disp);
        jf.push_back(std::move(j));
    }
    doc["fragments"] = std::move(jf);
    return doc.dump(2) + "\n";
}

std::string render_gap(const GapResult& g, ReportFormat fmt) {
    if (fmt == ReportFormat::Csv) {
        CsvWriter w;
        w.row({"r", "count", "r_max", "count_min"});
        w.row({std::to_string(g.r), std::to_string(g.count), fmt_double(g.r_max),
               fmt_double(g.count_min)});
        return w.out;
    }
    ojson doc;
    doc["r"] = g.r;
    doc["count"] = g.count;
    doc["r_max"] = g.r_max;
    doc["count_min"] = g.count_min;
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os.good()) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    if (is.bad()) throw std::runtime_error("read failed: " + path);
    return ss.str();
}

} // namespace tridyn
