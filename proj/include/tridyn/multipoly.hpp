#pragma once

// Sparse multivariate polynomials over a coefficient ring context. Terms are kept
// in a map ordered by descending lexicographic exponent order, so iteration gives
// the canonical term order directly.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "tridyn/util.hpp"

#include <gmpxx.h>

namespace tridyn {

struct ZZRing {
    using Elem = mpz_class;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long v) const { return v; }
    Elem from_mpz(const mpz_class& v) const { return v; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool less(const Elem& a, const Elem& b) const { return a < b; }
    std::string fmt(const Elem& a) const { return a.get_str(); }
    bool operator==(const ZZRing&) const { return true; }
    bool operator!=(const ZZRing&) const { return false; }
};

using ExpVec = std::vector<int32_t>;

struct LexGreater {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
            if (a[i] != b[i]) return a[i] > b[i];
        }
        return a.size() > b.size();
    }
};

struct ExpVecHash {
    size_t operator()(const ExpVec& v) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (int32_t e : v) hash_combine(h, static_cast<uint64_t>(static_cast<uint32_t>(e)));
        return static_cast<size_t>(h);
    }
};

inline constexpr int64_t kNegInfDegree = std::numeric_limits<int64_t>::min();

template <class R>
class MultiPoly {
public:
    using Ring = R;
    using Elem = typename R::Elem;
    using TermMap = std::map<ExpVec, Elem, LexGreater>;

    MultiPoly(R ring, int nvars) : ring_(std::move(ring)), nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("negative variable count");
    }

    static MultiPoly constant(R ring, int nvars, Elem c) {
        MultiPoly p(std::move(ring), nvars);
        if (!p.ring_.is_zero(c)) p.terms_.emplace(ExpVec(nvars, 0), std::move(c));
        return p;
    }

    // idx is zero-based
    static MultiPoly variable(R ring, int nvars, int idx) {
        if (idx < 0 || idx >= nvars) throw std::out_of_range("variable index");
        MultiPoly p(std::move(ring), nvars);
        ExpVec e(nvars, 0);
        e[idx] = 1;
        p.terms_.emplace(std::move(e), p.ring_.one());
        return p;
    }

    const R& ring() const { return ring_; }
    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const ExpVec& e, const Elem& c) {
        if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent arity");
        for (int32_t x : e)
            if (x < 0) throw std::invalid_argument("negative exponent");
        if (ring_.is_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = ring_.add(it->second, c);
            if (ring_.is_zero(it->second)) terms_.erase(it);
        }
    }

    int64_t total_degree() const {
        if (terms_.empty()) return kNegInfDegree;
        int64_t d = 0;
        for (const auto& [e, c] : terms_) {
            int64_t s = 0;
            for (int32_t x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    int64_t degree_in(int var) const {
        if (terms_.empty()) return kNegInfDegree;
        int64_t d = 0;
        for (const auto& [e, c] : terms_) d = std::max<int64_t>(d, e[var]);
        return d;
    }

    // per-variable degrees; zero polynomial gives all kNegInfDegree
    std::vector<int64_t> degree_profile() const {
        std::vector<int64_t> prof(nvars_, terms_.empty() ? kNegInfDegree : 0);
        for (const auto& [e, c] : terms_)
            for (int j = 0; j < nvars_; ++j) prof[j] = std::max<int64_t>(prof[j], e[j]);
        return prof;
    }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        for (int32_t x : terms_.begin()->first)
            if (x != 0) return false;
        return true;
    }

    Elem constant_value() const {
        if (terms_.empty()) return ring_.zero();
        if (!is_constant()) throw std::domain_error("polynomial is not constant");
        return terms_.begin()->second;
    }

    // lexicographically greatest term
    const std::pair<const ExpVec, Elem>& lead() const {
        if (terms_.empty()) throw std::domain_error("lead of zero polynomial");
        return *terms_.begin();
    }

    bool operator==(const MultiPoly& o) const {
        if (!(ring_ == o.ring_) || nvars_ != o.nvars_ || terms_.size() != o.terms_.size())
            return false;
        auto it = terms_.begin();
        auto jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first || !ring_.eq(it->second, jt->second)) return false;
        }
        return true;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    template <class R2>
    friend class MultiPoly;

private:
    R ring_;
    int nvars_;
    TermMap terms_;
};

template <class R>
void check_compat(const MultiPoly<R>& a, const MultiPoly<R>& b) {
    if (!(a.ring() == b.ring())) throw DomainMismatch("coefficient domains differ");
    if (a.nvars() != b.nvars()) throw DomainMismatch("variable counts differ");
}

template <class R>
MultiPoly<R> operator+(const MultiPoly<R>& a, const MultiPoly<R>& b) {
    check_compat(a, b);
    MultiPoly<R> r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, c);
    return r;
}

template <class R>
MultiPoly<R> operator-(const MultiPoly<R>& a) {
    MultiPoly<R> r(a.ring(), a.nvars());
    for (const auto& [e, c] : a.terms()) r.add_term(e, a.ring().neg(c));
    return r;
}

template <class R>
MultiPoly<R> operator-(const MultiPoly<R>& a, const MultiPoly<R>& b) {
    check_compat(a, b);
    MultiPoly<R> r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, b.ring().neg(c));
    return r;
}

template <class R>
MultiPoly<R> mul(const MultiPoly<R>& a, const MultiPoly<R>& b,
                 size_t guard = kDefaultTermGuard) {
    check_compat(a, b);
    const R& ring = a.ring();
    MultiPoly<R> r(ring, a.nvars());
    if (a.is_zero() || b.is_zero()) return r;
    const int nv = a.nvars();

    // Fast path: when every per-variable result degree fits into a disjoint bit
    // field of a 64-bit word, exponent vectors pack into integer keys and the
    // accumulation loop degenerates to integer adds plus hash lookups (with a
    // fused multiply-add for bignum coefficients).
    auto pa = a.degree_profile();
    auto pb = b.degree_profile();
    std::vector<int> shift(nv), width(nv);
    int bits = 0;
    bool packable = nv >= 1 && nv <= 64;
    for (int j = 0; packable && j < nv; ++j) {
        int64_t dmax = pa[j] + pb[j];
        int w = 1;
        while (w < 63 && (int64_t(1) << w) <= dmax) ++w;
        shift[j] = bits;
        width[j] = w;
        bits += w;
        if ((int64_t(1) << w) <= dmax || bits > 64) packable = false;
    }
    if (packable) {
        auto pack_side = [&](const MultiPoly<R>& p) {
            std::vector<std::pair<uint64_t, const typename R::Elem*>> v;
            v.reserve(p.term_count());
            for (const auto& [e, c] : p.terms()) {
                uint64_t key = 0;
                for (int j = 0; j < nv; ++j)
                    key |= static_cast<uint64_t>(e[j]) << shift[j];
                v.emplace_back(key, &c);
            }
            return v;
        };
        auto ta = pack_side(a);
        auto tb = pack_side(b);
        std::unordered_map<uint64_t, typename R::Elem> acc;
        uint64_t slots = 1;
        for (int j = 0; j < nv; ++j) {
            uint64_t span = static_cast<uint64_t>(pa[j] + pb[j]) + 1;
            if (slots > (uint64_t(1) << 22) / span) { slots = uint64_t(1) << 22; break; }
            slots *= span;
        }
        acc.reserve(std::min<uint64_t>({slots, ta.size() * tb.size(), guard + 1}));
        for (const auto& [ka, ca] : ta) {
            for (const auto& [kb, cb] : tb) {
                uint64_t key = ka + kb;
                auto it = acc.find(key);
                if (it == acc.end()) {
                    acc.emplace(key, ring.mul(*ca, *cb));
                    if (acc.size() > guard) throw TermGuardExceeded(acc.size(), guard);
                } else if constexpr (std::is_same_v<typename R::Elem, mpz_class>) {
                    mpz_addmul(it->second.get_mpz_t(), ca->get_mpz_t(), cb->get_mpz_t());
                } else {
                    it->second = ring.add(it->second, ring.mul(*ca, *cb));
                }
            }
        }
        ExpVec e(nv);
        for (auto& [key, cc] : acc) {
            if (ring.is_zero(cc)) continue;
            for (int j = 0; j < nv; ++j)
                e[j] = static_cast<int32_t>((key >> shift[j]) & ((uint64_t(1) << width[j]) - 1));
            r.add_term(e, cc);
        }
        return r;
    }

    std::unordered_map<ExpVec, typename R::Elem, ExpVecHash> acc;
    acc.reserve(a.term_count() + b.term_count());
    ExpVec e(a.nvars());
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (int j = 0; j < a.nvars(); ++j) e[j] = ea[j] + eb[j];
            auto it = acc.find(e);
            if (it == acc.end()) {
                acc.emplace(e, ring.mul(ca, cb));
                if (acc.size() > guard) throw TermGuardExceeded(acc.size(), guard);
            } else {
                it->second = ring.add(it->second, ring.mul(ca, cb));
            }
        }
    }
    for (auto& [ee, cc] : acc)
        if (!ring.is_zero(cc)) r.add_term(ee, cc);
    return r;
}

template <class R>
MultiPoly<R> operator*(const MultiPoly<R>& a, const MultiPoly<R>& b) {
    return mul(a, b, kDefaultTermGuard);
}

template <class R>
MultiPoly<R> operator*(const MultiPoly<R>& a, const typename R::Elem& c) {
    MultiPoly<R> r(a.ring(), a.nvars());
    for (const auto& [e, cc] : a.terms()) r.add_term(e, a.ring().mul(cc, c));
    return r;
}

template <class R>
MultiPoly<R> pow(const MultiPoly<R>& p, uint64_t k, size_t guard = kDefaultTermGuard) {
    MultiPoly<R> r = MultiPoly<R>::constant(p.ring(), p.nvars(), p.ring().one());
    MultiPoly<R> base = p;
    while (k) {
        if (k & 1) r = mul(r, base, guard);
        k >>= 1;
        if (k) base = mul(base, base, guard);
    }
    return r;
}

// Rebuild a polynomial in another ring (or the same one) by mapping coefficients.
// Coefficients that map to zero are dropped; the caller can compare term counts
// or degree profiles to detect the collapse.
template <class S, class R, class Map>
MultiPoly<S> map_poly(const MultiPoly<R>& p, S target, Map&& f) {
    MultiPoly<S> r(std::move(target), p.nvars());
    for (const auto& [e, c] : p.terms()) r.add_term(e, f(c));
    return r;
}

// Evaluate with coefficients translated into the target context by `f`.
// Powers of the coordinates are cached per variable.
template <class S, class R, class Map>
typename S::Elem eval_point_mapped(const MultiPoly<R>& p, const S& T,
                                   const std::vector<typename S::Elem>& pt, Map&& f) {
    if (static_cast<int>(pt.size()) != p.nvars())
        throw std::invalid_argument("evaluation point arity");
    auto prof = p.degree_profile();
    std::vector<std::vector<typename S::Elem>> pw(p.nvars());
    for (int j = 0; j < p.nvars(); ++j) {
        int64_t d = prof[j] == kNegInfDegree ? 0 : prof[j];
        pw[j].reserve(d + 1);
        pw[j].push_back(T.one());
        for (int64_t k = 1; k <= d; ++k) pw[j].push_back(T.mul(pw[j].back(), pt[j]));
    }
    auto acc = T.zero();
    for (const auto& [e, c] : p.terms()) {
        auto t = f(c);
        for (int j = 0; j < p.nvars(); ++j)
            if (e[j] > 0) t = T.mul(t, pw[j][e[j]]);
        acc = T.add(acc, t);
    }
    return acc;
}

template <class R>
typename R::Elem eval_point(const MultiPoly<R>& p, const std::vector<typename R::Elem>& pt) {
    return eval_point_mapped(p, p.ring(), pt, [](const typename R::Elem& c) { return c; });
}

// largest absolute coefficient; 0 for the zero polynomial
inline mpz_class max_abs_coeff(const MultiPoly<ZZRing>& p) {
    mpz_class m = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_class a = abs(c);
        if (a > m) m = a;
    }
    return m;
}

// gcd of all coefficients, nonnegative; 0 for the zero polynomial
inline mpz_class content(const MultiPoly<ZZRing>& p) {
    mpz_class g = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

} // namespace tridyn
