#include "tridyn/trisys.hpp"

#include <algorithm>

namespace tridyn {

namespace {

const ZZRing kZZ{};

std::string var_name(const TriangularSystem& sys, int idx0) {
    if (idx0 < static_cast<int>(sys.vars.size())) return sys.vars[idx0];
    return "X" + std::to_string(idx0 + 1);
}

void check_structure(const TriangularSystem& sys) {
    if (sys.n < 1) throw std::invalid_argument("system needs at least one level");
    if (static_cast<int>(sys.levels.size()) != sys.n - 1)
        throw std::invalid_argument("level count does not match n");
    for (int i = 1; i < sys.n; ++i) {
        const auto& lv = sys.levels[i - 1];
        if (lv.e != 1 && lv.e != -1)
            throw std::invalid_argument("exponent must be +1 or -1");
        if (lv.G.nvars() != sys.n || lv.H.nvars() != sys.n)
            throw std::invalid_argument("level polynomial arity mismatch");
        for (const ZPoly* p : {&lv.G, &lv.H}) {
            for (const auto& [e, c] : p->terms()) {
                for (int j = 0; j < i; ++j) {
                    if (e[j] > 0)
                        throw std::invalid_argument(
                            "level " + std::to_string(i) + " polynomial uses " +
                            var_name(sys, j) + " (index not above the level)");
                }
            }
        }
    }
    if (sys.last.e != 1 && sys.last.e != -1)
        throw std::invalid_argument("exponent must be +1 or -1");
}

} // namespace

TriangularSystem make_system(int n, std::vector<SystemLevel> levels, LastLevel last,
                             std::vector<std::string> vars) {
    TriangularSystem sys;
    sys.n = n;
    sys.levels = std::move(levels);
    sys.last = std::move(last);
    if (vars.empty()) {
        for (int j = 1; j <= n; ++j) vars.push_back("X" + std::to_string(j));
    }
    if (static_cast<int>(vars.size()) != n)
        throw std::invalid_argument("variable name count does not match n");
    sys.vars = std::move(vars);
    check_structure(sys);
    return sys;
}

ZRational TriangularSystem::component(int i) const {
    if (i < 1 || i > n) throw std::out_of_range("level index");
    ZPoly xi = ZPoly::variable(kZZ, n, i - 1);
    ZPoly one = ZPoly::constant(kZZ, n, 1);
    if (i == n) {
        ZPoly gx = xi * last.g;
        ZPoly hc = ZPoly::constant(kZZ, n, last.h);
        if (last.e == 1) return ZRational(gx + hc, one);
        // g/X_n + h = (h X_n + g) / X_n
        return ZRational(xi * last.h + ZPoly::constant(kZZ, n, last.g), xi);
    }
    const auto& lv = levels[i - 1];
    if (lv.e == 1) return ZRational(xi * lv.G + lv.H, one);
    return ZRational(xi * lv.H + lv.G, xi);
}

std::vector<ZRational> TriangularSystem::components() const {
    std::vector<ZRational> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.push_back(component(i));
    return out;
}

ValidationResult validate_system(const TriangularSystem& sys) {
    check_structure(sys);
    if (sys.last.g == 0)
        return ConditionViolation{sys.n, "g", 0, "last-level coefficient g is zero"};

    LeadingData ld;
    for (int i = 1; i < sys.n; ++i) {
        const auto& lv = sys.levels[i - 1];
        const bool plus = lv.e == 1;
        const ZPoly& lead_poly = plus ? lv.G : lv.H;
        const ZPoly& side_poly = plus ? lv.H : lv.G;
        const std::string lead_name = plus ? "G" : "H";
        const std::string side_name = plus ? "H" : "G";

        if (lead_poly.is_zero())
            return ConditionViolation{i, lead_name, 0,
                                      lead_name + " is zero: no leading monomial"};
        if (!plus && lv.G.is_zero())
            return ConditionViolation{i, "G", 0, "G is zero: level loses its X dependence"};

        auto prof = lead_poly.degree_profile();
        std::vector<int64_t> srow(sys.n, 0);
        for (int j = 0; j < sys.n; ++j) srow[j] = std::max<int64_t>(prof[j], 0);

        if (srow[i] < 1)
            return ConditionViolation{i, lead_name, i + 1,
                                      "s_{i,i+1} is zero: " + lead_name +
                                          " does not involve " + var_name(sys, i)};

        // exactly one term matches the max-degree row, all others strictly below
        // it in every variable the row uses
        const mpz_class* lead_coeff = nullptr;
        for (const auto& [e, c] : lead_poly.terms()) {
            bool is_lead = true;
            for (int j = 0; j < sys.n; ++j)
                if (e[j] != srow[j]) { is_lead = false; break; }
            if (is_lead) {
                lead_coeff = &c;
                continue;
            }
            for (int j = 0; j < sys.n; ++j) {
                if (srow[j] > 0 && e[j] >= srow[j])
                    return ConditionViolation{
                        i, lead_name, j + 1,
                        "residual term of " + lead_name + " reaches degree " +
                            std::to_string(e[j]) + " in " + var_name(sys, j) +
                            " (needs < " + std::to_string(srow[j]) + ")"};
            }
        }
        if (lead_coeff == nullptr)
            return ConditionViolation{i, lead_name, 0,
                                      "no single term attains the maximal exponent row"};

        // companion polynomial bounds: < s per variable (e=+1), < 2s for G (e=-1);
        // a variable missing from the leading row (s=0) must be absent entirely
        const int64_t mult = plus ? 1 : 2;
        for (const auto& [e, c] : side_poly.terms()) {
            for (int j = 0; j < sys.n; ++j) {
                const bool bad = srow[j] == 0 ? e[j] > 0 : e[j] >= mult * srow[j];
                if (bad)
                    return ConditionViolation{
                        i, side_name, j + 1,
                        side_name + " has degree " + std::to_string(e[j]) + " in " +
                            var_name(sys, j) +
                            (srow[j] == 0
                                 ? " which the leading row does not use"
                                 : " (needs < " + std::to_string(mult * srow[j]) + ")")};
            }
        }

        ld.rows.push_back(LevelLeading{*lead_coeff, std::move(srow)});
    }
    return ld;
}

LeadingData validate_or_throw(const TriangularSystem& sys) {
    auto r = validate_system(sys);
    if (auto* v = std::get_if<ConditionViolation>(&r))
        throw std::invalid_argument("system violates level " + std::to_string(v->level) +
                                    " condition: " + v->reason);
    return std::get<LeadingData>(std::move(r));
}

SystemMetrics system_metrics(const TriangularSystem& sys) {
    SystemMetrics m;
    m.n = sys.n;
    m.h_exact = 1;
    for (int i = 1; i <= sys.n; ++i) {
        ZRational f = sys.component(i);
        int64_t dn = f.num.total_degree();
        int64_t dd = f.den.total_degree();
        m.d = std::max({m.d, dn, dd});
        mpz_class c = coeff_max(f);
        if (c > m.h_exact) m.h_exact = c;
    }
    m.h = log_mpz(m.h_exact);
    return m;
}

namespace {

int64_t add_deg(int64_t a, int64_t b) {
    if (a == kNegInfDegree || b == kNegInfDegree) return kNegInfDegree;
    return a + b;
}

// degree of P(F_{...}^{(j-1)}) under dominance: max over terms of the weighted
// sum of tail degrees
int64_t composed_degree(const ZPoly& p, const std::vector<std::vector<int64_t>>& degF,
                        int64_t jm1) {
    if (p.is_zero()) return kNegInfDegree;
    int64_t best = kNegInfDegree;
    for (const auto& [e, c] : p.terms()) {
        int64_t s = 0;
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) s += e[v] * degF[v + 1][jm1];
        best = std::max(best, s);
    }
    return best;
}

} // namespace

LevelDegreePrediction predicted_level_degrees(const TriangularSystem& sys, int i, int64_t k) {
    if (i < 1 || i > sys.n) throw std::out_of_range("level index");
    if (k < 0) throw std::invalid_argument("negative iterate count");
    validate_or_throw(sys);

    LevelDegreePrediction out;
    // degF[m][j] = deg F_m^{(j)}, 1-based levels
    std::vector<std::vector<int64_t>> degF(sys.n + 1);
    degF[sys.n].assign(k + 1, 1);
    for (int m = sys.n - 1; m >= i; --m) {
        const auto& lv = sys.levels[m - 1];
        std::vector<int64_t> dGs(k), dHs(k);
        for (int64_t j = 1; j <= k; ++j) {
            dGs[j - 1] = composed_degree(lv.G, degF, j - 1);
            dHs[j - 1] = composed_degree(lv.H, degF, j - 1);
        }
        degF[m].assign(k + 1, 1); // j=0: identity
        if (lv.e == 1) {
            int64_t acc = 1;
            for (int64_t j = 1; j <= k; ++j) {
                acc += dGs[j - 1];
                degF[m][j] = acc;
            }
        } else {
            std::vector<int64_t> R(k + 1), S(k + 1);
            R[0] = 0;
            S[0] = kNegInfDegree;
            for (int64_t j = 1; j <= k; ++j) {
                int64_t dG = dGs[j - 1];
                int64_t dH = dHs[j - 1];
                if (j == 1) {
                    R[1] = dH;
                    S[1] = dG;
                } else {
                    R[j] = std::max(add_deg(dG, R[j - 2]), add_deg(dH, R[j - 1]));
                    S[j] = std::max(add_deg(dG, S[j - 2]), add_deg(dH, S[j - 1]));
                }
                degF[m][j] = std::max(add_deg(1, R[j]), S[j]);
            }
        }
        if (m == i) {
            out.degG = std::move(dGs);
            out.degH = std::move(dHs);
        }
    }
    out.degF = std::move(degF[i]);
    return out;
}

int64_t predicted_degree(const TriangularSystem& sys, int i, int64_t k) {
    return predicted_level_degrees(sys, i, k).degF[k];
}

} // namespace tridyn
