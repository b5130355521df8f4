#include "tridyn/bounds.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace tridyn {

namespace {

mpz_class zpow(const mpz_class& b, uint64_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

double slack_of(const mpz_class& actual, const mpz_class& bound) {
    mpz_class a = actual < 1 ? mpz_class(1) : actual;
    mpz_class b = bound < 1 ? mpz_class(1) : bound;
    return log_mpz(b) - log_mpz(a);
}

IneqCheck compare(const mpz_class& actual, const mpz_class& bound) {
    return IneqCheck{actual <= bound, slack_of(actual, bound)};
}

} // namespace

NullstellensatzBound nullstellensatz_bound(int n, long d, double h, long s) {
    if (n < 1 || d < 1 || s < 1 || h < 0)
        throw std::invalid_argument("nullstellensatz_bound: need n,d,s >= 1 and h >= 0");
    NullstellensatzBound out;
    out.h_coeff = mpz_class(11 * n + 4) * zpow(d, 3 * static_cast<uint64_t>(n) + 1);
    out.log_coeff = mpz_class(55 * n + 99) * zpow(d, 3 * static_cast<uint64_t>(n) + 2);
    out.log_arg = (2 * n + 5) * s;
    out.value = out.h_coeff.get_d() * h + out.log_coeff.get_d() * std::log(static_cast<double>(out.log_arg));
    return out;
}

TheoremFragment theorem_thresholds(const std::string& which, const TheoremParams& p) {
    if (p.n < 1) throw std::invalid_argument("theorem_thresholds: n >= 1 required");
    TheoremFragment out;
    out.which = which;
    auto kpow_str = [&](const mpz_class& exp) {
        mpz_class v = zpow(p.k, exp.get_ui());
        return "C × k^" + exp.get_str() + " (k=" + std::to_string(p.k) + ": C × " + v.get_str() + ")";
    };
    int64_t n = p.n;
    if (which == "T1") {
        out.log_bound_exponent = mpz_class(n * (3 * n - 1));
        out.count_exponent = mpz_class(n * (n - 1) / 2);
        out.display.emplace_back("log_bound", kpow_str(*out.log_bound_exponent));
        out.display.emplace_back("count", kpow_str(*out.count_exponent));
    } else if (which == "T1a") {
        out.log_bound_exponent = mpz_class(n) * (3 * n * n + 8 * n + 9) / 2;
        out.count_exponent = mpz_class(2 * n * n);
        out.count_exponent_proof = mpz_class(n * n);
        out.display.emplace_back("log_bound", kpow_str(*out.log_bound_exponent));
        out.display.emplace_back("count", kpow_str(*out.count_exponent));
        out.display.emplace_back("count_proof", kpow_str(*out.count_exponent_proof));
    } else if (which == "T2") {
        if (p.eps <= 0 || p.eps >= 1) throw std::invalid_argument("theorem_thresholds: eps in (0,1)");
        if (p.s < 1 || p.D < 1) throw std::invalid_argument("theorem_thresholds: s, D >= 1");
        double thr = std::pow(static_cast<double>(n), static_cast<double>(p.s)) *
                     std::pow(static_cast<double>(p.D), 2.0 * static_cast<double>(p.s)) /
                     std::pow(p.eps, static_cast<double>((n - 1) * p.s + 2));
        out.ell_threshold = thr;
        out.log_bound_exponent = mpz_class(n * (3 * n - 1));
        out.display.emplace_back("ell_threshold", std::to_string(thr));
        out.display.emplace_back("log_degree_bound",
                                 "C × (1/eps)^" + out.log_bound_exponent->get_str());
    } else if (which == "T3") {
        if (p.eps <= 0 || p.eps >= 1) throw std::invalid_argument("theorem_thresholds: eps in (0,1)");
        if (p.L < 1) throw std::invalid_argument("theorem_thresholds: L >= 1");
        double ratio = 2.0 * static_cast<double>(p.L) / p.eps;
        mpz_class beta = mpz_class(static_cast<long>(std::floor(ratio))) + 1;
        out.beta = beta;
        out.ell_threshold = ratio + 1.0;
        out.log_bound_exponent = mpz_class((n - 1) * (3 * n + 2) + (n + p.L + 2));
        mpz_class bin;
        mpz_bin_uiui(bin.get_mpz_t(), beta.get_ui(), static_cast<unsigned long>(p.L + 1));
        out.binom_beta_L1 = bin;
        out.display.emplace_back("beta", beta.get_str());
        out.display.emplace_back("ell_threshold", std::to_string(*out.ell_threshold));
        out.display.emplace_back("binom(beta,L+1)", bin.get_str());
        out.display.emplace_back("log_count_bound",
                                 "C × (1/eps)^" + out.log_bound_exponent->get_str());
    } else {
        throw std::invalid_argument("theorem_thresholds: unknown label " + which);
    }
    return out;
}

mpz_class bezout_cap(const std::vector<int64_t>& degs) {
    mpz_class r = 2;
    for (int64_t d : degs) {
        if (d < 1) throw std::invalid_argument("bezout_cap: degrees must be positive");
        r *= d;
    }
    return r;
}

GapResult gap_structure(const std::vector<int64_t>& seq, int64_t N) {
    int64_t M = static_cast<int64_t>(seq.size());
    if (M < 2 || 2 * M > N)
        throw std::invalid_argument("gap_structure: need 2 <= M <= N/2");
    if (seq.front() < 0 || seq.back() > N)
        throw std::invalid_argument("gap_structure: sequence must lie in [0, N]");
    for (size_t i = 1; i < seq.size(); ++i)
        if (seq[i] <= seq[i - 1])
            throw std::invalid_argument("gap_structure: sequence must be strictly increasing");

    std::map<int64_t, int64_t> freq;
    for (size_t i = 1; i < seq.size(); ++i) ++freq[seq[i] - seq[i - 1]];

    GapResult out;
    out.r_max = 2.0 * static_cast<double>(N) / static_cast<double>(M - 1);
    out.count_min = static_cast<double>(M - 1) * static_cast<double>(M - 1) /
                    (4.0 * static_cast<double>(N));
    out.r = 0;
    out.count = -1;
    for (const auto& [r, c] : freq) {
        if (r * (M - 1) > 2 * N) continue; // only gaps within the guaranteed range
        if (c > out.count) { // ascending key order keeps the smallest r on ties
            out.r = r;
            out.count = c;
        }
    }
    if (out.count < 0) throw std::logic_error("gap_structure: no admissible gap value");
    return out;
}

IneqCheck oracle_sum_height(const std::vector<ZPoly>& parts) {
    if (parts.empty()) throw std::invalid_argument("oracle_sum_height: empty input");
    ZPoly sum = parts[0];
    mpz_class mmax = max_abs_coeff(parts[0]);
    for (size_t i = 1; i < parts.size(); ++i) {
        check_compat(sum, parts[i]);
        sum = sum + parts[i];
        mpz_class m = max_abs_coeff(parts[i]);
        if (m > mmax) mmax = m;
    }
    mpz_class bound = mmax * static_cast<long>(parts.size());
    return compare(max_abs_coeff(sum), bound);
}

IneqCheck oracle_prod_height(const std::vector<ZPoly>& parts) {
    if (parts.empty()) throw std::invalid_argument("oracle_prod_height: empty input");
    int n = parts[0].nvars();
    ZPoly prod = parts[0];
    mpz_class mprod_parts = max_abs_coeff(parts[0]);
    int64_t sum_deg = 0;
    for (const auto& q : parts) {
        if (q.is_zero()) return IneqCheck{true, 0.0};
        sum_deg += q.total_degree();
    }
    for (size_t i = 1; i < parts.size(); ++i) {
        check_compat(prod, parts[i]);
        prod = prod * parts[i];
        mprod_parts *= max_abs_coeff(parts[i]);
    }
    mpz_class base = n + 1;
    mpz_class actual = max_abs_coeff(prod);
    mpz_class up = zpow(base, sum_deg) * mprod_parts;            // M(prod) <= this
    mpz_class down = zpow(base, 2 * sum_deg) * actual;           // prod M  <= this
    bool holds = actual <= up && mprod_parts <= down;
    double slack = std::min(slack_of(actual, up), slack_of(mprod_parts, down));
    return IneqCheck{holds, slack};
}

IneqCheck oracle_comp_poly(const ZPoly& L, const std::vector<ZPoly>& args) {
    if (args.empty()) throw std::invalid_argument("oracle_comp_poly: no arguments");
    if (static_cast<int>(args.size()) != L.nvars())
        throw std::invalid_argument("oracle_comp_poly: arity mismatch");
    if (L.is_zero()) return IneqCheck{true, 0.0};
    int n = args[0].nvars();
    std::vector<ZRational> rargs;
    rargs.reserve(args.size());
    int64_t d = 0;
    mpz_class mk = 1;
    for (const auto& a : args) {
        if (!a.is_zero()) d = std::max(d, a.total_degree());
        mpz_class m = max_abs_coeff(a);
        if (m > mk) mk = m;
        rargs.push_back(ZRational::from_poly(a));
    }
    auto comp = compose_many<ZZRing>({&L}, rargs);
    int64_t degL = L.total_degree();
    mpz_class factor = mpz_class(static_cast<long>(args.size()) + 1) * zpow(n + 1, d) * mk;
    mpz_class bound = max_abs_coeff(L) * zpow(factor, degL);
    mpz_class actual = max_abs_coeff(comp.nums[0]);
    IneqCheck hc = compare(actual, bound);
    bool deg_ok = comp.nums[0].is_zero() || comp.nums[0].total_degree() <= d * degL;
    return IneqCheck{hc.holds && deg_ok, hc.slack};
}

IneqCheck oracle_comp_rational(const ZPoly& L, const std::vector<ZRational>& args) {
    if (args.empty()) throw std::invalid_argument("oracle_comp_rational: no arguments");
    if (static_cast<int>(args.size()) != L.nvars())
        throw std::invalid_argument("oracle_comp_rational: arity mismatch");
    if (L.is_zero()) return IneqCheck{true, 0.0};
    int n = args[0].nvars();
    int64_t d = 0;
    mpz_class mk = 1;
    for (const auto& a : args) {
        if (!a.num.is_zero()) d = std::max(d, a.num.total_degree());
        d = std::max(d, a.den.total_degree());
        mpz_class m = coeff_max(a);
        if (m > mk) mk = m;
    }
    auto comp = compose_many<ZZRing>({&L}, args);
    ZRational reduced = normalize_rational(ZRational(comp.nums[0], comp.den));
    int64_t degL = L.total_degree();
    mpz_class bound = max_abs_coeff(L) * zpow(mk, degL) *
                      zpow(n + 1, static_cast<uint64_t>((3 * d * n + 1) * degL));
    IneqCheck hc = compare(coeff_max(reduced), bound);
    int64_t dc = reduced.den.total_degree();
    if (!reduced.num.is_zero()) dc = std::max(dc, reduced.num.total_degree());
    bool deg_ok = dc <= d * n * degL;
    return IneqCheck{hc.holds && deg_ok, hc.slack};
}

IneqCheck check_5t(const mpz_class& M_actual, const mpz_class& M_sys,
                   const mpz_class& amp, int64_t sum_degG) {
    if (sum_degG < 0) throw std::invalid_argument("check_5t: negative degree sum");
    if (amp < 1 || M_sys < 1) throw std::invalid_argument("check_5t: amp and M_sys must be >= 1");
    mpz_class bound = zpow(amp, sum_degG) * zpow(M_sys, sum_degG + 1);
    return compare(M_actual, bound);
}

IneqCheck check_l36(const mpz_class& M_actual, int n, int64_t k, int64_t degF,
                    const std::vector<mpz_class>& M_parts, bool minus_sign) {
    if (n < 1 || k < 1 || degF < 0) throw std::invalid_argument("check_l36: bad parameters");
    mpz_class bound = zpow(2, minus_sign ? k + 1 : 1) *
                      zpow(n + 1, static_cast<uint64_t>((k + 1) * degF));
    for (const auto& m : M_parts) {
        if (m < 1) throw std::invalid_argument("check_l36: part heights must be >= 1");
        bound *= m;
    }
    return compare(M_actual, bound);
}

IneqCheck check_last_level(const mpz_class& M_actual, const mpz_class& g,
                           const mpz_class& h, int64_t k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("check_last_level: bad parameters");
    mpz_class hg = abs(g), hh = abs(h);
    mpz_class H = hg > hh ? hg : hh;
    if (H < 1) H = 1;
    mpz_class bound = zpow(H, k) * (n + 1) * (k + 1);
    return compare(M_actual, bound);
}

} // namespace tridyn
