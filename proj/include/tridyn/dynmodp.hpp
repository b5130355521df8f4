#pragma once

// Dynamics over finite fields: reduction of a triangular system mod p, pointwise
// orbits with pole handling, k-periodic point enumeration (brute force scan,
// bottom-up triangular solve, algebraic-closure counts), and orbit-variety
// intersection statistics.
//
// Points live in K^n for a field context K (PrimeFieldCtx or an ExtFieldCtx
// tower over one); system coefficients always come from the prime field and are
// embedded through K.from_fp. Orbits are always computed pointwise; symbolic
// iterates never appear here.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tridyn/extfield.hpp"
#include "tridyn/trisys.hpp"

namespace tridyn {

// ---------------------------------------------------------------------------
// reduced systems

struct FpTerm {
    ExpVec e;
    uint64_t c; // residue in [0, p)
};

struct FpPoly {
    std::vector<FpTerm> terms;  // zero residues dropped
    std::vector<int32_t> maxe;  // per-variable max exponent (power-table sizes)
    bool is_zero() const { return terms.empty(); }
};

FpPoly reduce_poly(const ZPoly& f, uint64_t p);

struct ReducedLevel {
    int e; // +1 or -1
    FpPoly G;
    FpPoly H;
};

struct ReducedLast {
    int e;
    uint64_t g;
    uint64_t h;
};

// Coefficientwise reduction of a triangular system. A level is flagged
// degenerate when the coefficient that carries its dominance shape dies mod p:
// the leading coefficient of G_i (e_i=+1) or H_i (e_i=-1), all of G_i for a
// reciprocal level, or g at the last level. Unflagged levels keep the dominance
// shape with the same exponent rows; flags are data, not errors.
struct ReducedSystem {
    uint64_t p = 0;
    int n = 0;
    std::vector<ReducedLevel> levels; // size n-1
    ReducedLast last{1, 0, 0};
    std::vector<bool> level_degenerate; // size n, [i-1] = level i

    bool degenerate() const {
        for (bool b : level_degenerate)
            if (b) return true;
        return false;
    }
};

ReducedSystem reduce_system(const TriangularSystem& sys, uint64_t p);

// ---------------------------------------------------------------------------
// pointwise evaluation

template <class Ctx>
typename Ctx::Elem eval_fp(const Ctx& K, const FpPoly& f,
                           const std::vector<typename Ctx::Elem>& pt) {
    if (f.terms.empty()) return K.zero();
    std::vector<std::vector<typename Ctx::Elem>> pw(f.maxe.size());
    for (size_t j = 0; j < f.maxe.size(); ++j) {
        if (f.maxe[j] <= 0) continue;
        pw[j].reserve(static_cast<size_t>(f.maxe[j]) + 1);
        pw[j].push_back(K.one());
        for (int32_t d = 1; d <= f.maxe[j]; ++d) pw[j].push_back(K.mul(pw[j].back(), pt[j]));
    }
    auto acc = K.zero();
    for (const auto& t : f.terms) {
        auto v = K.from_fp(t.c);
        for (size_t j = 0; j < t.e.size(); ++j)
            if (t.e[j] > 0) v = K.mul(v, pw[j][static_cast<size_t>(t.e[j])]);
        acc = K.add(acc, v);
    }
    return acc;
}

// One simultaneous step of levels lo..n, reading the old point throughout.
// Returns false (leaving w untouched) when a reciprocal level sits at zero,
// i.e. the point is a pole of the map.
template <class Ctx>
bool step_point(const ReducedSystem& rsys, const Ctx& K,
                std::vector<typename Ctx::Elem>& w, int lo = 1) {
    std::vector<typename Ctx::Elem> out = w;
    for (int i = rsys.n; i >= lo; --i) {
        const auto& x = w[static_cast<size_t>(i) - 1];
        typename Ctx::Elem gv, hv;
        int e;
        if (i == rsys.n) {
            gv = K.from_fp(rsys.last.g);
            hv = K.from_fp(rsys.last.h);
            e = rsys.last.e;
        } else {
            const auto& L = rsys.levels[static_cast<size_t>(i) - 1];
            gv = eval_fp(K, L.G, w);
            hv = eval_fp(K, L.H, w);
            e = L.e;
        }
        if (e > 0) {
            out[static_cast<size_t>(i) - 1] = K.add(K.mul(x, gv), hv);
        } else {
            if (K.is_zero(x)) return false;
            out[static_cast<size_t>(i) - 1] = K.add(K.mul(gv, K.inv(x)), hv);
        }
    }
    w = std::move(out);
    return true;
}

// ---------------------------------------------------------------------------
// point keys: flatten tower elements to word vectors for hashing and ordering

inline void flatten_elem(uint64_t v, std::vector<uint64_t>& out) { out.push_back(v); }

template <class T>
void flatten_elem(const std::vector<T>& v, std::vector<uint64_t>& out) {
    for (const auto& x : v) flatten_elem(x, out);
}

template <class Ctx>
std::vector<uint64_t> point_key(const Ctx&, const std::vector<typename Ctx::Elem>& w) {
    std::vector<uint64_t> key;
    for (const auto& c : w) flatten_elem(c, key);
    return key;
}

struct U64VecHash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        uint64_t h = 0x243f6a8885a308d3ull;
        for (uint64_t x : v) hash_combine(h, x);
        return static_cast<size_t>(h);
    }
};

template <class Ctx>
bool points_equal(const Ctx& K, const std::vector<typename Ctx::Elem>& a,
                  const std::vector<typename Ctx::Elem>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (!K.eq(a[i], b[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// orbits

enum class OrbitStatus { EnteredCycle, HitPole, Truncated };

template <class Ctx>
struct OrbitRecord {
    std::vector<std::vector<typename Ctx::Elem>> points; // w_0, w_1, ...
    OrbitStatus status = OrbitStatus::Truncated;
    size_t tail_length = 0; // EnteredCycle: steps before the cycle
    size_t period = 0;      // EnteredCycle: cycle length
    size_t pole_step = 0;   // HitPole: index m with F(w_m) undefined
    bool s_known = false;   // S(w) = #orbit determined
    size_t s_value = 0;
};

// Walks w, F(w), F^2(w), ... storing points until the first repeat, a pole, or
// maxlen stored points. With brent=true cycle detection runs in O(1) memory
// (only w_0 is stored; maxlen caps the number of steps instead).
template <class Ctx>
OrbitRecord<Ctx> orbit(const ReducedSystem& rsys, const Ctx& K,
                       std::vector<typename Ctx::Elem> w, size_t maxlen,
                       bool brent = false) {
    if (maxlen < 1) throw std::invalid_argument("orbit: maxlen must be >= 1");
    if (static_cast<int>(w.size()) != rsys.n)
        throw std::invalid_argument("orbit: point arity mismatch");
    OrbitRecord<Ctx> rec;
    if (!brent) {
        std::unordered_map<std::vector<uint64_t>, size_t, U64VecHash> seen;
        for (;;) {
            auto key = point_key(K, w);
            auto it = seen.find(key);
            if (it != seen.end()) {
                rec.status = OrbitStatus::EnteredCycle;
                rec.tail_length = it->second;
                rec.period = rec.points.size() - it->second;
                rec.s_known = true;
                rec.s_value = rec.points.size();
                return rec;
            }
            if (rec.points.size() == maxlen) {
                rec.status = OrbitStatus::Truncated;
                return rec;
            }
            seen.emplace(std::move(key), rec.points.size());
            rec.points.push_back(w);
            if (!step_point(rsys, K, w)) {
                rec.status = OrbitStatus::HitPole;
                rec.pole_step = rec.points.size() - 1;
                rec.s_known = true;
                rec.s_value = rec.points.size();
                return rec;
            }
        }
    }
    // Brent: race a power-of-two anchor against a single runner.
    rec.points.push_back(w);
    auto anchor = w;
    auto runner = w;
    size_t steps = 0;
    auto advance = [&](std::vector<typename Ctx::Elem>& x) -> bool {
        if (!step_point(rsys, K, x)) {
            rec.status = OrbitStatus::HitPole;
            rec.pole_step = steps;
            rec.s_known = true;
            rec.s_value = steps + 1;
            return false;
        }
        ++steps;
        return true;
    };
    if (!advance(runner)) return rec;
    size_t power = 1, lam = 1;
    while (!points_equal(K, anchor, runner)) {
        if (power == lam) {
            anchor = runner;
            power *= 2;
            lam = 0;
        }
        if (steps >= maxlen) {
            rec.status = OrbitStatus::Truncated;
            return rec;
        }
        if (!advance(runner)) return rec;
        ++lam;
    }
    // cycle length lam found; locate its start (no poles can appear before it)
    auto a = w, b = w;
    for (size_t i = 0; i < lam; ++i) step_point(rsys, K, b);
    size_t mu = 0;
    while (!points_equal(K, a, b)) {
        step_point(rsys, K, a);
        step_point(rsys, K, b);
        ++mu;
    }
    rec.status = OrbitStatus::EnteredCycle;
    rec.tail_length = mu;
    rec.period = lam;
    rec.s_known = true;
    rec.s_value = mu + lam;
    return rec;
}

// ---------------------------------------------------------------------------
// periodic points

inline constexpr uint64_t kScanCap = 1ull << 20;

template <class Ctx>
struct PeriodicPoint {
    std::vector<typename Ctx::Elem> w;
    uint64_t exact_period; // least r with F^(r)(w) = w; divides the queried k
};

namespace detail {

// Walks k steps from w; returns the first return time when F^(k)(w) = w with
// every intermediate step defined, nullopt otherwise.
template <class Ctx>
std::optional<uint64_t> reiterate_period(const ReducedSystem& rsys, const Ctx& K,
                                         const std::vector<typename Ctx::Elem>& w,
                                         uint64_t k) {
    auto cur = w;
    uint64_t period = 0;
    bool fixed = false;
    for (uint64_t j = 1; j <= k; ++j) {
        if (!step_point(rsys, K, cur)) return std::nullopt;
        if (points_equal(K, cur, w)) {
            if (period == 0) period = j;
            if (j == k) fixed = true;
        }
    }
    if (!fixed) return std::nullopt;
    return period;
}

// Orbit snapshots t_0..t_{k-1} of the coordinates above level i (the level-i
// composite needs the tail value entering each of the k steps). Coordinates
// at or below i ride along untouched. nullopt if the tail hits a pole.
template <class Ctx>
std::optional<std::vector<std::vector<typename Ctx::Elem>>>
tail_orbit(const ReducedSystem& rsys, const Ctx& K, int i,
           std::vector<typename Ctx::Elem> w, uint64_t k) {
    std::vector<std::vector<typename Ctx::Elem>> out;
    out.reserve(k);
    for (uint64_t j = 0; j < k; ++j) {
        out.push_back(w);
        if (j + 1 < k && !step_point(rsys, K, w, i + 1)) return std::nullopt;
    }
    return out;
}

// Fixed-point equation of the k-step composite of level i along a tail orbit.
// Level i acts on its own coordinate as an affine map (e=+1) or a Moebius map
// (e=-1) whose coefficients are tail values, so the composite is again affine
// or Moebius and its fixed points are the roots of a polynomial of degree <= 2.
// Degenerate composites collapse to the identity (every non-pole point fixed)
// or, for fully dead reciprocal levels, to a map defined nowhere.
template <class Ctx>
struct LevelEq {
    up::UPoly<Ctx> poly;
    bool identity = false;
    bool nowhere = false;
};

template <class Ctx>
LevelEq<Ctx> level_equation(const ReducedSystem& rsys, const Ctx& K, int i,
                            const std::vector<std::vector<typename Ctx::Elem>>& torb,
                            uint64_t k) {
    using Elem = typename Ctx::Elem;
    const bool lastlev = (i == rsys.n);
    const int e = lastlev ? rsys.last.e : rsys.levels[static_cast<size_t>(i) - 1].e;
    auto coeffs = [&](uint64_t j) -> std::pair<Elem, Elem> {
        if (lastlev) return {K.from_fp(rsys.last.g), K.from_fp(rsys.last.h)};
        const auto& L = rsys.levels[static_cast<size_t>(i) - 1];
        return {eval_fp(K, L.G, torb[j]), eval_fp(K, L.H, torb[j])};
    };
    LevelEq<Ctx> eq;
    if (e > 0) {
        Elem a = K.one(), b = K.zero();
        for (uint64_t j = 0; j < k; ++j) {
            auto [gv, hv] = coeffs(j);
            a = K.mul(gv, a);
            b = K.add(K.mul(gv, b), hv);
        }
        // (a-1)x + b = 0
        Elem a1 = K.sub(a, K.one());
        eq.poly = up::UPoly<Ctx>{b, a1};
        up::trim(K, eq.poly);
        if (eq.poly.empty()) eq.identity = true;
        return eq;
    }
    // x -> (h x + g)/x per step; compose as 2x2 matrices
    Elem m00 = K.one(), m01 = K.zero(), m10 = K.zero(), m11 = K.one();
    for (uint64_t j = 0; j < k; ++j) {
        auto [gv, hv] = coeffs(j);
        Elem n00 = K.add(K.mul(hv, m00), K.mul(gv, m10));
        Elem n01 = K.add(K.mul(hv, m01), K.mul(gv, m11));
        m10 = m00;
        m11 = m01;
        m00 = n00;
        m01 = n01;
    }
    // (m00 x + m01)/(m10 x + m11) = x
    eq.poly = up::UPoly<Ctx>{K.neg(m01), K.sub(m11, m00), m10};
    up::trim(K, eq.poly);
    if (eq.poly.empty()) {
        if (K.is_zero(m00))
            eq.nowhere = true; // zero matrix: composite defined nowhere
        else
            eq.identity = true; // scalar matrix: identity off the poles
    }
    return eq;
}

// For a reciprocal level: does x survive k steps without the level coordinate
// hitting zero? (Upper coordinates follow the already verified tail orbit.)
template <class Ctx>
bool level_pole_free(const ReducedSystem& rsys, const Ctx& K, int i,
                     typename Ctx::Elem x,
                     const std::vector<std::vector<typename Ctx::Elem>>& torb,
                     uint64_t k) {
    const bool lastlev = (i == rsys.n);
    for (uint64_t j = 0; j < k; ++j) {
        if (K.is_zero(x)) return false;
        typename Ctx::Elem gv, hv;
        if (lastlev) {
            gv = K.from_fp(rsys.last.g);
            hv = K.from_fp(rsys.last.h);
        } else {
            const auto& L = rsys.levels[static_cast<size_t>(i) - 1];
            gv = eval_fp(K, L.G, torb[j]);
            hv = eval_fp(K, L.H, torb[j]);
        }
        x = K.add(K.mul(gv, K.inv(x)), hv);
    }
    return true;
}

} // namespace detail

// Exhaustive scan of K^n: every w whose orbit is defined through k steps with
// F^(k)(w) = w, annotated with its exact period. Throws when |K|^n exceeds the
// scan cap. Works on degenerate reductions too (the map is still a map).
template <class Ctx>
std::vector<PeriodicPoint<Ctx>> periodic_points_bruteforce(const ReducedSystem& rsys,
                                                           const Ctx& K, uint64_t k,
                                                           uint64_t scan_cap = kScanCap) {
    if (k < 1) throw std::invalid_argument("periodic points: k must be >= 1");
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), K.cardinality().get_mpz_t(),
               static_cast<unsigned long>(rsys.n));
    if (total > scan_cap) throw std::domain_error("scan cap exceeded: field too large for brute force");
    const uint64_t q = K.cardinality_u64();
    std::vector<typename Ctx::Elem> elems;
    elems.reserve(q);
    for (uint64_t t = 0; t < q; ++t) elems.push_back(K.elem_at(t));

    std::vector<PeriodicPoint<Ctx>> out;
    std::vector<uint64_t> idx(static_cast<size_t>(rsys.n), 0);
    std::vector<typename Ctx::Elem> w(static_cast<size_t>(rsys.n), K.zero());
    const uint64_t count = total.get_ui();
    for (uint64_t t = 0; t < count; ++t) {
        for (int j = 0; j < rsys.n; ++j) w[static_cast<size_t>(j)] = elems[idx[static_cast<size_t>(j)]];
        if (auto r = detail::reiterate_period(rsys, K, w, k)) out.push_back({w, *r});
        for (size_t j = 0; j < idx.size(); ++j) {
            if (++idx[j] < q) break;
            idx[j] = 0;
        }
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return point_key(K, a.w) < point_key(K, b.w);
    });
    return out;
}

// Bottom-up solve: the last level's fixed-point equation is univariate; each
// solution fixes a periodic tail whose orbit turns every higher level into an
// affine or Moebius fixed-point problem in one variable. Reciprocal-level
// candidates are filtered by nonvanishing of the level coordinate along all k
// steps; every assembled point is confirmed by direct re-iteration. Degenerate
// composites (identity) fall back to enumerating the field, so the scan cap
// guards them; degenerate reductions are rejected outright.
template <class Ctx>
std::vector<PeriodicPoint<Ctx>> periodic_points_triangular(const ReducedSystem& rsys,
                                                           const Ctx& K, uint64_t k,
                                                           uint64_t scan_cap = kScanCap) {
    if (k < 1) throw std::invalid_argument("periodic points: k must be >= 1");
    if (rsys.degenerate())
        throw std::domain_error("triangular solve rejects a degenerate reduced system");
    using Elem = typename Ctx::Elem;
    using Point = std::vector<Elem>;
    std::vector<Point> partial{Point(static_cast<size_t>(rsys.n), K.zero())};
    for (int i = rsys.n; i >= 1; --i) {
        const bool minus = (i == rsys.n ? rsys.last.e : rsys.levels[static_cast<size_t>(i) - 1].e) < 0;
        std::vector<Point> next;
        for (const auto& tail : partial) {
            std::vector<Point> torb;
            if (i < rsys.n) {
                auto t = detail::tail_orbit(rsys, K, i, tail, k);
                if (!t) continue;
                torb = std::move(*t);
            }
            auto eq = detail::level_equation(rsys, K, i, torb, k);
            if (eq.nowhere) continue;
            std::vector<Elem> cands;
            if (eq.identity) {
                if (!K.cardinality_fits_u64() || K.cardinality_u64() > scan_cap)
                    throw std::domain_error("scan cap exceeded: identity composite over a large field");
                const uint64_t q = K.cardinality_u64();
                cands.reserve(q);
                for (uint64_t t = 0; t < q; ++t) cands.push_back(K.elem_at(t));
            } else if (up::deg(eq.poly) >= 1) {
                cands = up::roots(K, eq.poly);
            }
            for (auto& x : cands) {
                if (minus && !detail::level_pole_free(rsys, K, i, x, torb, k)) continue;
                Point w = tail;
                w[static_cast<size_t>(i) - 1] = x;
                next.push_back(std::move(w));
                if (next.size() > scan_cap)
                    throw std::domain_error("scan cap exceeded: candidate explosion");
            }
        }
        partial = std::move(next);
    }
    std::vector<PeriodicPoint<Ctx>> out;
    for (auto& w : partial)
        if (auto r = detail::reiterate_period(rsys, K, w, k)) out.push_back({std::move(w), *r});
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return point_key(K, a.w) < point_key(K, b.w);
    });
    return out;
}

// Count of F^(k)(w) = w solutions over the algebraic closure, by the same
// bottom-up solve descending into extension fields as level equations factor
// (canonical moduli, one root per conjugacy class, Galois multiplicity).
// nonfinite reports a level composite that collapsed to the identity: the
// solution set meets a whole line and the count is not a number.
struct ClosureCount {
    mpz_class count;
    bool nonfinite = false;
};

ClosureCount closure_periodic_count(const ReducedSystem& rsys, uint64_t k);

// Total degrees of the defining equations of the F^(k)(w) = w variety, from the
// exact degree recurrences: level equation num - X_i * den has degree
// max(deg F_i^(k), 1 + deg F_i^(k-1)) at reciprocal levels and
// max(deg F_i^(k), 1) at polynomial ones; the last level contributes 1 or 2.
// Feed to bezout_cap for the count ceiling.
std::vector<int64_t> vk_equation_degrees(const TriangularSystem& sys, int64_t k);

// ---------------------------------------------------------------------------
// varieties and orbit intersections

struct Variety {
    std::vector<ZPoly> L;  // defining polynomials, integer coefficients
    int64_t D = 0;         // max total degree
    mpz_class H_exact = 1; // max |coefficient|
    double H = 0.0;        // log H_exact

    size_t s() const { return L.size(); }
};

// Validates: at least one polynomial, none zero, equal arity.
Variety make_variety(std::vector<ZPoly> defs);

struct HitSet {
    std::vector<uint64_t> hits; // m < ell with every L_j vanishing at w_m
    uint64_t ell = 0;
    bool s_sufficient = false;  // S(w) >= ell: all ell orbit points exist, pairwise distinct
};

template <class Ctx>
HitSet variety_hits(const ReducedSystem& rsys, const Ctx& K, const Variety& V,
                    std::vector<typename Ctx::Elem> w, uint64_t ell) {
    if (ell < 1) throw std::invalid_argument("variety_hits: ell must be >= 1");
    if (static_cast<int>(w.size()) != rsys.n)
        throw std::invalid_argument("variety_hits: point arity mismatch");
    std::vector<FpPoly> Lp;
    Lp.reserve(V.L.size());
    for (const auto& f : V.L) Lp.push_back(reduce_poly(f, rsys.p));
    HitSet hs;
    hs.ell = ell;
    std::unordered_set<std::vector<uint64_t>, U64VecHash> seen;
    bool repeat = false;
    uint64_t visited = 0;
    for (uint64_t m = 0; m < ell; ++m) {
        if (!repeat && !seen.insert(point_key(K, w)).second) repeat = true;
        ++visited;
        bool allzero = true;
        for (const auto& f : Lp) {
            if (!K.is_zero(eval_fp(K, f, w))) {
                allzero = false;
                break;
            }
        }
        if (allzero) hs.hits.push_back(m);
        if (m + 1 < ell && !step_point(rsys, K, w)) break; // orbit ends at a pole
    }
    hs.s_sufficient = (visited == ell && !repeat);
    return hs;
}

// ---------------------------------------------------------------------------
// experiment drivers (prime-field points, deterministic row order)

// Index-ordered parallel map: fn(i) for i in [0, count), results in slot order
// regardless of scheduling. jobs <= 1 degrades to a serial loop.
template <class R, class Fn>
std::vector<R> parallel_map(size_t count, int jobs, Fn fn) {
    std::vector<R> out(count);
    size_t threads = jobs <= 1 ? 1 : std::min<size_t>(static_cast<size_t>(jobs), count);
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> head{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            size_t i = head.fetch_add(1);
            if (i >= count) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                head.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

struct PeriodicCountRow {
    uint64_t p = 0;
    uint64_t k = 0;
    bool degenerate = false; // reduction lost the dominance shape; counts skipped
    int64_t count_fp = -1;   // #periodic points in F_p^n (-1 when skipped)
    bool nonfinite = false;  // closure solve met an identity composite
    mpz_class count_closure; // meaningful iff !degenerate && !nonfinite
    mpz_class bezout;        // characteristic-zero equation-degree product
};

std::vector<PeriodicCountRow> periodic_count_table(const TriangularSystem& sys,
                                                   const std::vector<uint64_t>& primes,
                                                   uint64_t k, int jobs = 1,
                                                   uint64_t scan_cap = kScanCap);

struct StabilizationSummary {
    bool has_majority = false; // strict majority among usable rows
    mpz_class majority_count;
    size_t majority_size = 0;
    size_t usable = 0;                // rows neither degenerate nor nonfinite
    std::vector<uint64_t> bad_primes; // flagged rows and rows off the majority
};

StabilizationSummary stabilize(const std::vector<PeriodicCountRow>& rows);

struct HitFreqRow {
    uint64_t p = 0;
    std::vector<uint64_t> w;
    uint64_t hits = 0;
    uint64_t ell = 0;
    bool s_sufficient = false;
};

// All initial points of F_p^n for each non-degenerate prime, rows ordered by
// (p, w). Primes whose reduction is degenerate or kills some L_j are skipped.
std::vector<HitFreqRow> hit_frequency_table(const TriangularSystem& sys, const Variety& V,
                                            const std::vector<uint64_t>& primes,
                                            uint64_t ell, int jobs = 1,
                                            uint64_t scan_cap = kScanCap);

struct EscapeRow {
    uint64_t p = 0;
    uint64_t count = 0;
};

struct EscapeReport {
    std::vector<EscapeRow> rows;
    mpz_class bound;                  // D^s (D n gamma^(n-1))^s
    bool suspect = false;             // some count exceeded the bound
    std::vector<uint64_t> skipped;    // degenerate primes
};

// Counts w in F_p^n lying on V whose k-th image also lies on V, per prime, and
// compares against the degree-product bound. Advisory: a variety invariant
// under the map shows counts growing with p and trips the flag.
EscapeReport escape_check(const TriangularSystem& sys, const Variety& V, uint64_t k,
                          const std::vector<uint64_t>& primes, int jobs = 1,
                          uint64_t scan_cap = kScanCap);

} // namespace tridyn
