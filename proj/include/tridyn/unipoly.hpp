#pragma once

// Dense univariate polynomial routines over a field context (PrimeFieldCtx or an
// extension context). A polynomial is a coefficient vector, index = degree, with
// no trailing zeros; the empty vector is the zero polynomial.

#include <algorithm>
#include <utility>
#include <vector>

#include "tridyn/fields.hpp"

namespace tridyn::up {

template <class C> using UPoly = std::vector<typename C::Elem>;

template <class C>
void trim(const C& F, UPoly<C>& p) {
    while (!p.empty() && F.is_zero(p.back())) p.pop_back();
}

template <class T>
int deg(const std::vector<T>& p) { return static_cast<int>(p.size()) - 1; }

template <class T>
bool is_zero(const std::vector<T>& p) { return p.empty(); }

template <class C>
UPoly<C> constant(const C& F, typename C::Elem c) {
    UPoly<C> r;
    if (!F.is_zero(c)) r.push_back(c);
    return r;
}

template <class C>
UPoly<C> ident(const C& F) { return UPoly<C>{F.zero(), F.one()}; }

template <class C>
bool eq(const C& F, const UPoly<C>& a, const UPoly<C>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!F.eq(a[i], b[i])) return false;
    return true;
}

template <class C>
UPoly<C> add(const C& F, const UPoly<C>& a, const UPoly<C>& b) {
    UPoly<C> r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    trim(F, r);
    return r;
}

template <class C>
UPoly<C> sub(const C& F, const UPoly<C>& a, const UPoly<C>& b) {
    UPoly<C> r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    trim(F, r);
    return r;
}

template <class C>
UPoly<C> neg(const C& F, const UPoly<C>& a) {
    UPoly<C> r = a;
    for (auto& c : r) c = F.neg(c);
    return r;
}

template <class C>
UPoly<C> scale(const C& F, const UPoly<C>& a, typename C::Elem c) {
    if (F.is_zero(c)) return {};
    UPoly<C> r = a;
    for (auto& x : r) x = F.mul(x, c);
    trim(F, r);
    return r;
}

template <class C>
UPoly<C> mul(const C& F, const UPoly<C>& a, const UPoly<C>& b) {
    if (a.empty() || b.empty()) return {};
    UPoly<C> r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(F, r);
    return r;
}

// Euclidean division; divisor must be nonzero.
template <class C>
std::pair<UPoly<C>, UPoly<C>> divmod(const C& F, UPoly<C> a, const UPoly<C>& b) {
    if (b.empty()) throw std::domain_error("univariate division by zero");
    if (a.size() < b.size()) return {UPoly<C>{}, std::move(a)};
    auto linv = F.inv(b.back());
    UPoly<C> q(a.size() - b.size() + 1, F.zero());
    for (size_t i = a.size(); i-- >= b.size();) {
        if (F.is_zero(a[i])) { if (i == 0) break; continue; }
        auto c = F.mul(a[i], linv);
        q[i - b.size() + 1] = c;
        for (size_t j = 0; j < b.size(); ++j)
            a[i - b.size() + 1 + j] = F.sub(a[i - b.size() + 1 + j], F.mul(c, b[j]));
        if (i == 0) break;
    }
    trim(F, a);
    trim(F, q);
    return {std::move(q), std::move(a)};
}

template <class C>
UPoly<C> rem(const C& F, UPoly<C> a, const UPoly<C>& b) {
    return divmod(F, std::move(a), b).second;
}

template <class C>
UPoly<C> make_monic(const C& F, const UPoly<C>& a) {
    if (a.empty()) throw std::domain_error("monic normalization of zero");
    return scale(F, a, F.inv(a.back()));
}

// Monic gcd; gcd(0,0) = 0.
template <class C>
UPoly<C> gcd(const C& F, UPoly<C> a, UPoly<C> b) {
    while (!b.empty()) {
        a = rem(F, std::move(a), b);
        std::swap(a, b);
    }
    if (a.empty()) return a;
    return make_monic(F, a);
}

// Inverse of a modulo f (gcd(a, f) must be 1).
template <class C>
UPoly<C> inv_mod(const C& F, UPoly<C> a, const UPoly<C>& f) {
    UPoly<C> r0 = f, r1 = rem(F, std::move(a), f);
    UPoly<C> t0{}, t1{F.one()};
    while (!r1.empty()) {
        auto [q, r2] = divmod(F, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
        UPoly<C> t2 = sub(F, t0, mul(F, q, t1));
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (deg(r0) != 0) throw std::domain_error("inv_mod: element not invertible");
    return scale(F, t0, F.inv(r0[0]));
}

template <class C>
UPoly<C> deriv(const C& F, const UPoly<C>& a) {
    if (a.size() <= 1) return {};
    UPoly<C> r(a.size() - 1, F.zero());
    typename C::Elem k = F.zero();
    for (size_t i = 1; i < a.size(); ++i) {
        k = F.add(k, F.one());
        r[i - 1] = F.mul(a[i], k);
    }
    trim(F, r);
    return r;
}

template <class C>
typename C::Elem eval(const C& F, const UPoly<C>& a, const typename C::Elem& x) {
    auto r = F.zero();
    for (size_t i = a.size(); i-- > 0;) {
        r = F.add(F.mul(r, x), a[i]);
        if (i == 0) break;
    }
    return r;
}

template <class C>
UPoly<C> mulmod(const C& F, const UPoly<C>& a, const UPoly<C>& b, const UPoly<C>& f) {
    return rem(F, mul(F, a, b), f);
}

template <class C>
UPoly<C> powmod(const C& F, UPoly<C> base, const mpz_class& e, const UPoly<C>& f) {
    if (e < 0) throw std::domain_error("powmod: negative exponent");
    UPoly<C> r = rem(F, constant(F, F.one()), f);
    base = rem(F, std::move(base), f);
    size_t bits = (e == 0) ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(F, r, base, f);
        if (i + 1 < bits) base = mulmod(F, base, base, f);
    }
    return r;
}

// f must have only exponents divisible by char; returns h with h^p = f.
template <class C>
UPoly<C> pth_root_poly(const C& F, const UPoly<C>& f) {
    uint64_t p = F.characteristic();
    UPoly<C> h;
    for (size_t i = 0; i < f.size(); ++i) {
        if (F.is_zero(f[i])) continue;
        if (i % p != 0) throw std::domain_error("pth_root_poly: exponent not divisible by p");
        size_t j = i / p;
        if (h.size() <= j) h.resize(j + 1, F.zero());
        h[j] = F.pth_root(f[i]);
    }
    trim(F, h);
    return h;
}

namespace detail {
template <class C>
void squarefree_rec(const C& F, UPoly<C> f, unsigned outer,
                    std::vector<std::pair<UPoly<C>, unsigned>>& out) {
    if (deg(f) <= 0) return;
    UPoly<C> d = deriv(F, f);
    if (d.empty()) {
        squarefree_rec(F, pth_root_poly(F, f), outer * static_cast<unsigned>(F.characteristic()), out);
        return;
    }
    UPoly<C> c = gcd(F, f, d);
    UPoly<C> w = divmod(F, std::move(f), c).first;
    unsigned i = 1;
    while (deg(w) > 0) {
        UPoly<C> y = gcd(F, w, c);
        UPoly<C> z = divmod(F, std::move(w), y).first;
        if (deg(z) > 0) out.emplace_back(make_monic(F, z), i * outer);
        w = std::move(y);
        c = divmod(F, std::move(c), w).first;
        ++i;
    }
    if (deg(c) > 0)
        squarefree_rec(F, pth_root_poly(F, c), outer * static_cast<unsigned>(F.characteristic()), out);
}
} // namespace detail

// Monic squarefree factors with multiplicities, characteristic-p safe. Parts are
// pairwise coprime: multiplicities not divisible by p are emitted directly, the
// rest are peeled off through p-th roots.
template <class C>
std::vector<std::pair<UPoly<C>, unsigned>> squarefree_decompose(const C& F, const UPoly<C>& f) {
    if (is_zero(f)) throw std::domain_error("squarefree decomposition of zero");
    std::vector<std::pair<UPoly<C>, unsigned>> out;
    detail::squarefree_rec(F, make_monic(F, f), 1, out);
    return out;
}

template <class C>
UPoly<C> squarefree_part(const C& F, const UPoly<C>& f) {
    auto parts = squarefree_decompose(F, f);
    UPoly<C> r = constant(F, F.one());
    for (auto& [g, m] : parts) r = mul(F, r, g);
    return r;
}

// Distinct-degree factorization of a monic squarefree f:
// returns (product of irreducible factors of degree d, d) with d ascending.
template <class C>
std::vector<std::pair<UPoly<C>, int>> ddf(const C& F, UPoly<C> f) {
    std::vector<std::pair<UPoly<C>, int>> out;
    mpz_class q = F.cardinality();
    UPoly<C> h = rem(F, ident(F), f);
    int d = 0;
    while (deg(f) > 0 && 2 * (d + 1) <= deg(f)) {
        ++d;
        h = powmod(F, std::move(h), q, f);
        UPoly<C> g = gcd(F, sub(F, h, ident(F)), f);
        if (deg(g) > 0) {
            out.emplace_back(g, d);
            f = divmod(F, std::move(f), g).first;
            h = rem(F, std::move(h), f);
        }
    }
    if (deg(f) > 0) out.emplace_back(make_monic(F, f), deg(f));
    return out;
}

namespace detail {
template <class C>
UPoly<C> random_poly_below(const C& F, int degree, Rng& rng) {
    UPoly<C> a(static_cast<size_t>(degree), F.zero());
    for (auto& c : a) c = F.random_elem(rng);
    trim(F, a);
    return a;
}

template <class C>
void edf_rec(const C& F, UPoly<C> f, int d, Rng& rng, std::vector<UPoly<C>>& out) {
    if (deg(f) == d) { out.push_back(make_monic(F, f)); return; }
    mpz_class q = F.cardinality();
    while (true) {
        UPoly<C> a = random_poly_below(F, deg(f), rng);
        if (deg(a) < 1) continue; // constants never produce a proper split
        UPoly<C> g = gcd(F, a, f);
        if (deg(g) > 0 && deg(g) < deg(f)) {
            edf_rec(F, g, d, rng, out);
            edf_rec(F, divmod(F, std::move(f), g).first, d, rng, out);
            return;
        }
        UPoly<C> b;
        if (F.characteristic() == 2) {
            // trace map over F_{2^(k*d)}
            size_t k = mpz_sizeinbase(q.get_mpz_t(), 2) - 1;
            UPoly<C> t = rem(F, a, f);
            b = t;
            for (size_t i = 1; i < k * static_cast<size_t>(d); ++i) {
                t = mulmod(F, t, t, f);
                b = add(F, b, t);
            }
        } else {
            mpz_class e;
            mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            b = sub(F, powmod(F, a, e, f), constant(F, F.one()));
        }
        UPoly<C> g2 = gcd(F, b, f);
        if (deg(g2) > 0 && deg(g2) < deg(f)) {
            edf_rec(F, g2, d, rng, out);
            edf_rec(F, divmod(F, std::move(f), g2).first, d, rng, out);
            return;
        }
    }
}
} // namespace detail

// Equal-degree factorization: f monic squarefree, all factors of degree d.
template <class C>
std::vector<UPoly<C>> edf(const C& F, const UPoly<C>& f, int d, Rng& rng) {
    std::vector<UPoly<C>> out;
    if (deg(f) <= 0) return out;
    detail::edf_rec(F, f, d, rng, out);
    return out;
}

template <class C>
bool lex_less_poly(const C& F, const UPoly<C>& a, const UPoly<C>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;) {
        if (!F.eq(a[i], b[i])) return F.less(a[i], b[i]);
        if (i == 0) break;
    }
    return false;
}

template <class C>
struct Factorization {
    typename C::Elem lead;
    std::vector<std::pair<UPoly<C>, unsigned>> factors; // monic irreducible, multiplicity
};

// Full factorization into monic irreducibles, deterministic for a given seed.
template <class C>
Factorization<C> factor(const C& F, const UPoly<C>& f, uint64_t seed) {
    if (is_zero(f)) throw std::domain_error("factorization of zero");
    Factorization<C> res;
    res.lead = f.back();
    if (deg(f) == 0) return res;
    Rng rng(seed);
    for (auto& [sq, mult] : squarefree_decompose(F, f)) {
        for (auto& [prod, d] : ddf(F, sq)) {
            for (auto& irred : edf(F, prod, d, rng))
                res.factors.emplace_back(irred, mult);
        }
    }
    std::sort(res.factors.begin(), res.factors.end(), [&](const auto& x, const auto& y) {
        if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
        if (lex_less_poly(F, x.first, y.first)) return true;
        if (lex_less_poly(F, y.first, x.first)) return false;
        return x.second < y.second;
    });
    return res;
}

inline constexpr uint64_t kRootScanCap = 1ull << 16;

// All roots in the field of the context, canonically sorted.
template <class C>
std::vector<typename C::Elem> roots(const C& F, const UPoly<C>& f, uint64_t seed = 0x5eed) {
    if (is_zero(f)) throw std::domain_error("roots of the zero polynomial");
    std::vector<typename C::Elem> out;
    if (deg(f) == 0) return out;
    if (F.cardinality_fits_u64() && F.cardinality_u64() <= kRootScanCap) {
        uint64_t n = F.cardinality_u64();
        for (uint64_t i = 0; i < n; ++i) {
            auto x = F.elem_at(i);
            if (F.is_zero(eval(F, f, x))) out.push_back(x);
        }
        return out;
    }
    UPoly<C> xq = powmod(F, ident(F), F.cardinality(), f);
    UPoly<C> g = gcd(F, sub(F, xq, ident(F)), f);
    if (deg(g) <= 0) return out;
    Rng rng(seed);
    for (auto& lin : edf(F, g, 1, rng))
        out.push_back(F.neg(lin[0]));
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return F.less(a, b); });
    return out;
}

// Rabin irreducibility test for monic f.
template <class C>
bool irreducible(const C& F, const UPoly<C>& f) {
    int m = deg(f);
    if (m <= 0) return false;
    if (m == 1) return true;
    mpz_class q = F.cardinality();
    std::vector<int> prime_divs;
    int mm = m;
    for (int r = 2; r * r <= mm; ++r) {
        if (mm % r == 0) {
            prime_divs.push_back(r);
            while (mm % r == 0) mm /= r;
        }
    }
    if (mm > 1) prime_divs.push_back(mm);
    // X^(q^j) mod f for j = m and j = m/r
    auto frob_iter = [&](int steps) {
        UPoly<C> h = rem(F, ident(F), f);
        for (int i = 0; i < steps; ++i) h = powmod(F, std::move(h), q, f);
        return h;
    };
    for (int r : prime_divs) {
        UPoly<C> h = frob_iter(m / r);
        UPoly<C> g = gcd(F, sub(F, h, ident(F)), f);
        if (deg(g) != 0) return false;
    }
    UPoly<C> h = frob_iter(m);
    return eq(F, h, rem(F, ident(F), f));
}

// Least monic irreducible of degree m: candidates X^m + c_{m-1}X^{m-1}+...+c_0
// ordered by the tuple (c_{m-1}, ..., c_0), each coordinate in the field's
// canonical element order.
template <class C>
UPoly<C> find_irreducible(const C& F, int m) {
    if (m < 1) throw std::invalid_argument("find_irreducible: degree must be >= 1");
    if (!F.cardinality_fits_u64())
        throw std::domain_error("find_irreducible: field too large to enumerate");
    uint64_t card = F.cardinality_u64();
    std::vector<uint64_t> idx(static_cast<size_t>(m), 0); // idx[j] indexes coefficient of X^j
    while (true) {
        UPoly<C> f(static_cast<size_t>(m) + 1, F.zero());
        f[m] = F.one();
        for (int j = 0; j < m; ++j) f[j] = F.elem_at(idx[j]);
        trim(F, f); // no-op: monic lead
        if (irreducible(F, f)) return f;
        // advance (c_{m-1},...,c_0) lexicographically: c_0 moves fastest
        size_t j = 0;
        while (j < idx.size()) {
            if (++idx[j] < card) break;
            idx[j] = 0;
            ++j;
        }
        if (j == idx.size()) throw std::logic_error("find_irreducible: none found");
    }
}

} // namespace tridyn::up
