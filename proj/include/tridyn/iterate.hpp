#pragma once

// Iteration engines. The naive engine substitutes the previous iterate into the
// base system; the structured engines build the closed forms level by level:
//   e_i=+1:  F_i^{(k)} = (X_i P_k + Q_k) / E_k   with
//              P_k = P_{k-1} gn_k,  Q_k = Q_{k-1} gn_k + hn_k E_{k-1},  E_k = E_{k-1} cd_k
//   e_i=-1:  F_i^{(k)} = (X_i A_k + B_k) / (cd_k (X_i A_{k-1} + B_{k-1}))  with
//              A_k = hn_k A_{k-1} + gn_k cd_{k-1} A_{k-2}   (B_k alike)
// where gn_j/cd_j and hn_j/cd_j are G_i and H_i composed with the tail
// components F_{i+1}^{(j-1)},...,F_n^{(j-1)} over one shared denominator cd_j.
// Multiplying the continuant pair by the running product of the cd_j keeps every
// object polynomial without any division.

#include <cstdint>
#include <optional>

#include "tridyn/trisys.hpp"

namespace tridyn {

std::vector<ZRational> identity_components(int n);

// F_n^{(k)} directly: geometric form for e_n=+1, 2x2 matrix power for e_n=-1
ZRational closed_form_last(const TriangularSystem& sys, int64_t k);

struct LevelIterates {
    int e = 1;
    std::vector<ZRational> F;       // F_i^{(j)}, j = 0..k
    std::vector<int64_t> step_ns;   // wall time per j = 1..k
    // composed level polynomials, j = 1..k (empty at the last level):
    std::vector<ZPoly> gn, hn, cd;  // G_i^{(j)} = gn[j-1]/cd[j-1], H_i^{(j)} = hn[j-1]/cd[j-1]
    // e=+1 accumulators, j = 1..k
    std::vector<ZPoly> P, Q, E;     // G_{i,k} = P/E, H_{i,k} = Q/E
    // e=-1 continuants (scaled polynomial form), j = 0..k
    std::vector<ZPoly> A, B;
};

struct StructuredRun {
    int n = 0;
    int64_t k = 0;
    std::vector<LevelIterates> levels; // index 0 unused; levels[i] for 1 <= i <= n
};

StructuredRun iterate_structured(const TriangularSystem& sys, int64_t k,
                                 size_t guard = kDefaultTermGuard);

// single-level views (the lower levels are iterated internally)
LevelIterates iterate_structured_plus(const TriangularSystem& sys, int i, int64_t k,
                                      size_t guard = kDefaultTermGuard);
LevelIterates iterate_structured_minus(const TriangularSystem& sys, int i, int64_t k,
                                       size_t guard = kDefaultTermGuard);

// all iterates F^{(j)} for j = 0..k; [j][i-1] is level i
std::vector<std::vector<ZRational>> iterate_naive_seq(const TriangularSystem& sys, int64_t k,
                                                      size_t guard = kDefaultTermGuard,
                                                      std::vector<std::vector<int64_t>>* step_ns = nullptr);

std::vector<ZRational> iterate_naive(const TriangularSystem& sys, int64_t k,
                                     size_t guard = kDefaultTermGuard);

// --- representation reduction and certified measurement ---------------------

// Divide out every atom that divides both parts, then the shared integer
// content; sign fixed by a positive denominator lead. Atoms are candidate
// common factors (denominator building blocks of the engines).
ZRational peel_atoms(const ZRational& f, const std::vector<const ZPoly*>& atoms);

// Is the pair certainly coprime (up to content)? One-sided modular test on a
// random diagonal line: a constant univariate gcd certifies coprimality; a
// nontrivial one is inconclusive (retried with fresh lines).
bool certify_coprime(const ZRational& f, uint64_t seed, int attempts = 3);

struct CanonicalResult {
    ZRational f;
    bool certified; // true: f is exactly the coprime canonical form
};

// Canonical coprime form: atom peeling plus certification, falling back to the
// full gcd when allowed. certified=false only when fallback was disallowed and
// certification failed.
CanonicalResult canonical_form(const ZRational& f, const std::vector<const ZPoly*>& atoms,
                               uint64_t seed = 0x1db7, bool allow_full_gcd = true);

// Degree of the underlying function (degree of the coprime representative).
int64_t measured_degree(const ZRational& f, const std::vector<const ZPoly*>& atoms = {},
                        uint64_t seed = 0x1db7);

// Exact equality as rational functions. Tiers: literal, mutual exact division,
// canonicalized comparison.
bool equivalent_rational(const ZRational& a, const ZRational& b,
                         const std::vector<const ZPoly*>& atoms = {},
                         uint64_t seed = 0x1db7);

// --- growth measurement ------------------------------------------------------

struct GrowthRow {
    int i = 0;
    int64_t k = 0;
    int64_t deg_measured = 0;
    int64_t deg_predicted = 0;
    double h_measured = 0.0;             // structural representation, nats
    std::optional<double> bound_5t;      // levels i < n only
    double bound_l36 = 0.0;              // last level: closed-form coefficient cap
    bool ok_deg = false;
    bool ok_h = false;
    int64_t t_naive_ns = 0;
    int64_t t_struct_ns = 0;
};

struct GrowthReport {
    int n = 0;
    int64_t k_max = 0;
    bool heights_structural = true; // heights taken on unreduced structured parts
    std::vector<GrowthRow> rows;    // ordered by (i, k)
};

// measure_naive: also run the naive engine for timing columns (skipped when the
// term budget makes it unreasonable; timings then read 0)
GrowthReport growth_report(const TriangularSystem& sys, int64_t k_max,
                           size_t guard = kDefaultTermGuard, bool measure_naive = true);

} // namespace tridyn
