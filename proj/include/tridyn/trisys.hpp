#pragma once

// Triangular systems: each component either
//   F_i = X_i * G_i(X_{i+1..n}) + H_i(X_{i+1..n})        (e_i = +1)
//   F_i = G_i(X_{i+1..n}) / X_i + H_i(X_{i+1..n})        (e_i = -1)
// with a last level F_n = g X_n + h or g/X_n + h. Validation enforces the
// dominance shape that makes degree growth exactly predictable: the polynomial
// carrying the leading monomial (G_i when e_i=+1, H_i when e_i=-1) has a single
// term of maximal exponent row s_i, every other term strictly below it in each
// used variable, and the companion polynomial is bounded by the same row
// (strictly, resp. strictly by twice the row for G_i when e_i=-1).

#include <string>
#include <variant>
#include <vector>

#include "tridyn/zzgcd.hpp"

namespace tridyn {

struct SystemLevel {
    int e; // +1 or -1
    ZPoly G;
    ZPoly H;
};

struct LastLevel {
    int e; // +1 or -1
    mpz_class g;
    mpz_class h;
};

struct TriangularSystem {
    int n = 0;
    std::vector<std::string> vars;    // names, size n
    std::vector<SystemLevel> levels;  // size n-1, index 0 = level 1
    LastLevel last;

    // F_i as an explicit rational function (coprime by construction); i is 1-based
    ZRational component(int i) const;
    std::vector<ZRational> components() const;
};

TriangularSystem make_system(int n, std::vector<SystemLevel> levels, LastLevel last,
                             std::vector<std::string> vars = {});

struct LevelLeading {
    mpz_class coeff;           // g_i when e_i=+1, h_i when e_i=-1
    std::vector<int64_t> srow; // srow[j] = s_{i,j+1}, full width n, zero for j < i
};

struct LeadingData {
    std::vector<LevelLeading> rows; // size n-1
};

struct ConditionViolation {
    int level = 0;       // 1-based
    std::string part;    // "G", "H", "g"
    int var = 0;         // 1-based variable index, 0 when not variable-specific
    std::string reason;
};

using ValidationResult = std::variant<LeadingData, ConditionViolation>;

// Checks the full dominance shape; the first failed condition is returned as a
// value. Structural damage (wrong arity, variables at or below the level's own
// index) throws instead.
ValidationResult validate_system(const TriangularSystem& sys);

// validate_system that throws on violation; convenience for pipelines
LeadingData validate_or_throw(const TriangularSystem& sys);

struct SystemMetrics {
    int n = 0;
    int64_t d = 0;       // max component degree
    double h = 0.0;      // max component height, natural log
    mpz_class h_exact;   // max absolute coefficient across components
};

SystemMetrics system_metrics(const TriangularSystem& sys);

// Exact degree of F_i^{(k)} by the dominance recurrence:
//   deg F_n^{(j)} = 1
//   deg of a composed level polynomial P(F_{i+1}^{(j-1)},...) =
//       max over terms t of P of sum_m t_m deg F_m^{(j-1)}
//   e_i=+1:  deg F_i^{(k)} = 1 + sum_{j<=k} deg G_i^{(j)}
//   e_i=-1:  continuant degree sequences
//              degR_j = max(degG^{(j)} + degR_{j-2}, degH^{(j)} + degR_{j-1})
//              degS_j likewise with initials degS_0 = -inf, degS_1 = deg G_i
//            and deg F_i^{(k)} = max(1 + degR_k, degS_k).
// The last form subsumes the numerator X_i R_k + S_k exactly (the two parts
// cannot overlap: R, S never contain X_i).
int64_t predicted_degree(const TriangularSystem& sys, int i, int64_t k);

// Full degree tables for one level: deg F_i^{(j)} for j = 0..k plus the composed
// step degrees deg G_i^{(j)}, deg H_i^{(j)} for j = 1..k (empty at the last
// level, and kNegInfDegree entries where the composed polynomial is zero).
struct LevelDegreePrediction {
    std::vector<int64_t> degF;
    std::vector<int64_t> degG;
    std::vector<int64_t> degH;
};

LevelDegreePrediction predicted_level_degrees(const TriangularSystem& sys, int i, int64_t k);

} // namespace tridyn
