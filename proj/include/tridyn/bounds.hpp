#pragma once

// Exact evaluation of the explicit bound formulas, inequality oracles for the
// height lemmas (arbitrary-precision integer comparisons, logs only for slack
// reporting), and the combinatorial gap finder.

#include <optional>
#include <string>
#include <vector>

#include "tridyn/zzgcd.hpp"

namespace tridyn {

// (11n+4) d^(3n+1) h + (55n+99) log((2n+5)s) d^(3n+2), natural log
struct NullstellensatzBound {
    mpz_class h_coeff;    // (11n+4) d^(3n+1)
    mpz_class log_coeff;  // (55n+99) d^(3n+2)
    long log_arg = 0;     // (2n+5) s
    double value = 0.0;   // h_coeff*h + log_coeff*log(log_arg)
};
NullstellensatzBound nullstellensatz_bound(int n, long d, double h, long s);

struct TheoremParams {
    int n = 2;
    int64_t k = 1;
    int64_t s = 1;
    int64_t D = 1;
    double eps = 0.5;
    int64_t L = 1;
};

struct TheoremFragment {
    std::string which;
    std::optional<mpz_class> log_bound_exponent;   // exponent of k (T1, T1a) or 1/eps (T2, T3)
    std::optional<mpz_class> count_exponent;       // T1: n(n-1)/2; T1a stated: 2n^2
    std::optional<mpz_class> count_exponent_proof; // T1a proof-side: n^2
    std::optional<double> ell_threshold;           // T2, T3
    std::optional<mpz_class> beta;                 // T3
    std::optional<mpz_class> binom_beta_L1;        // T3: C(beta, L+1)
    std::vector<std::pair<std::string, std::string>> display; // report lines, "C ×" kept symbolic
};
// which ∈ {"T1", "T1a", "T2", "T3"}
TheoremFragment theorem_thresholds(const std::string& which, const TheoremParams& p);

// 2 * product of the supplied exact degrees
mpz_class bezout_cap(const std::vector<int64_t>& degs);

struct GapResult {
    int64_t r = 0;     // gap value: most frequent among admissible gaps, ties to smallest
    int64_t count = 0; // occurrences of r among consecutive gaps
    double r_max = 0;  // 2N/(M-1)
    double count_min = 0; // (M-1)^2 / (4N)
};
// seq strictly increasing, 0 <= seq[0], seq.back() <= N, 2 <= M <= N/2
GapResult gap_structure(const std::vector<int64_t>& seq, int64_t N);

// --- inequality oracles ------------------------------------------------------

struct IneqCheck {
    bool holds = false;
    double slack = 0.0; // log(bound) - log(actual), nats
};

// h(sum) <= max h + log t, as integers: M(sum) <= t * max M
IneqCheck oracle_sum_height(const std::vector<ZPoly>& parts);

// |h(prod) - sum h| <= log(n+1) * sum deg; both directions, integer-exact:
//   M(prod) <= (n+1)^(sum deg) * prod M   and   prod M <= (n+1)^(2 sum deg) * M(prod)
IneqCheck oracle_prod_height(const std::vector<ZPoly>& parts);

// polynomial-argument composition: M(L(K...)) <= M_L * ((t+1)(n+1)^d * M_K)^(deg L)
// and deg <= d * deg L
IneqCheck oracle_comp_poly(const ZPoly& L, const std::vector<ZPoly>& args);

// rational-argument composition, checked on the coprime composite:
//   M <= M_L * M_K^(deg L) * (n+1)^((3dn+1) deg L)  and  deg <= d*n*deg L
IneqCheck oracle_comp_rational(const ZPoly& L, const std::vector<ZRational>& args);

// raw-number forms used by the growth report ---------------------------------

// M_actual <= amp^sum_degG * M_sys^(sum_degG + 1); amp = (n-i)(n+1)^d
IneqCheck check_5t(const mpz_class& M_actual, const mpz_class& M_sys,
                   const mpz_class& amp, int64_t sum_degG);

// M_actual <= 2^(minus ? k+1 : 1) * (n+1)^((k+1) degF) * prod M_parts
IneqCheck check_l36(const mpz_class& M_actual, int n, int64_t k, int64_t degF,
                    const std::vector<mpz_class>& M_parts, bool minus_sign);

// last level: M_actual <= max(|g|,|h|,1)^k * (n+1) * (k+1)
IneqCheck check_last_level(const mpz_class& M_actual, const mpz_class& g,
                           const mpz_class& h, int64_t k, int n);

} // namespace tridyn
