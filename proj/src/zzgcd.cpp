#include "tridyn/zzgcd.hpp"

#include <algorithm>

namespace tridyn {

namespace {

const ZZRing kZZ{};

// r -= c * x^d * b, in place
void sub_scaled_shifted(ZPoly& r, const ZPoly& b, const ExpVec& d, const mpz_class& c) {
    ExpVec e(r.nvars());
    for (const auto& [eb, cb] : b.terms()) {
        for (int j = 0; j < r.nvars(); ++j) e[j] = eb[j] + d[j];
        r.add_term(e, -(c * cb));
    }
}

// coefficients with respect to one variable; index = power of v, v zeroed out
std::vector<ZPoly> uview(const ZPoly& p, int v) {
    int64_t d = p.degree_in(v);
    if (d == kNegInfDegree) return {};
    std::vector<ZPoly> out(static_cast<size_t>(d) + 1, ZPoly(kZZ, p.nvars()));
    ExpVec e(p.nvars());
    for (const auto& [ep, c] : p.terms()) {
        e = ep;
        int32_t k = e[v];
        e[v] = 0;
        out[k].add_term(e, c);
    }
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
}

ZPoly mul_vpow(const ZPoly& p, int v, int64_t k) {
    if (k == 0 || p.is_zero()) return p;
    ZPoly r(kZZ, p.nvars());
    ExpVec e(p.nvars());
    for (const auto& [ep, c] : p.terms()) {
        e = ep;
        e[v] += static_cast<int32_t>(k);
        r.add_term(e, c);
    }
    return r;
}

ZPoly lc_in(const ZPoly& p, int v) {
    auto coeffs = uview(p, v);
    if (coeffs.empty()) return ZPoly(kZZ, p.nvars());
    return coeffs.back();
}

ZPoly make_lexlead_positive(ZPoly p) {
    if (p.is_zero()) return p;
    if (p.lead().second < 0) return -p;
    return p;
}

// content of p viewed as a polynomial in v (gcd of the v-coefficients)
ZPoly content_in(const ZPoly& p, int v) {
    ZPoly g(kZZ, p.nvars());
    for (const auto& c : uview(p, v)) {
        if (c.is_zero()) continue;
        g = gcd_mpoly(g, c);
        if (g.is_constant() && g.constant_value() == 1) break;
    }
    return g;
}

ZPoly primitive_in(const ZPoly& p, int v) {
    if (p.is_zero()) return p;
    ZPoly c = content_in(p, v);
    auto q = exact_divide(p, c);
    if (!q) throw std::logic_error("content division failed");
    return *q;
}

// pseudo-remainder of a by b with respect to v: lc(b)^(deg a - deg b + 1) * a mod b
ZPoly prem(const ZPoly& a, const ZPoly& b, int v) {
    int64_t db = b.degree_in(v);
    ZPoly lcb = lc_in(b, v);
    ZPoly r = a;
    int64_t e = a.degree_in(v) - db + 1;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        int64_t dr = r.degree_in(v);
        ZPoly lcr = lc_in(r, v);
        r = r * lcb - mul_vpow(lcr * b, v, dr - db);
        // the v^dr terms cancel exactly; degree strictly drops
        --e;
    }
    for (; e > 0; --e) r = r * lcb;
    return r;
}

} // namespace

std::optional<ZPoly> exact_divide(const ZPoly& a, const ZPoly& b) {
    check_compat(a, b);
    if (b.is_zero()) return std::nullopt;
    ZPoly q(kZZ, a.nvars());
    if (a.is_zero()) return q;
    const auto& lb = b.lead();
    ZPoly r = a;
    ExpVec d(a.nvars());
    while (!r.is_zero()) {
        const auto& lr = r.lead();
        for (int j = 0; j < a.nvars(); ++j) {
            d[j] = lr.first[j] - lb.first[j];
            if (d[j] < 0) return std::nullopt;
        }
        if (!mpz_divisible_p(lr.second.get_mpz_t(), lb.second.get_mpz_t()))
            return std::nullopt;
        mpz_class c = lr.second / lb.second;
        q.add_term(d, c);
        sub_scaled_shifted(r, b, d, c);
    }
    return q;
}

ZPoly gcd_mpoly(const ZPoly& a, const ZPoly& b) {
    check_compat(a, b);
    if (a.is_zero()) return make_lexlead_positive(b);
    if (b.is_zero()) return make_lexlead_positive(a);
    if (a.is_constant() || b.is_constant()) {
        mpz_class g;
        mpz_class ca = content(a), cb = content(b);
        mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        return ZPoly::constant(kZZ, a.nvars(), g);
    }

    auto pa = a.degree_profile();
    auto pb = b.degree_profile();
    int v = -1;
    int64_t best = 0;
    for (int j = 0; j < a.nvars(); ++j) {
        if (pa[j] > 0 && pb[j] > 0) {
            int64_t m = std::min(pa[j], pb[j]);
            if (v < 0 || m < best) {
                v = j;
                best = m;
            }
        }
    }
    if (v < 0) {
        // no shared variable: only constants divide both
        mpz_class g;
        mpz_class ca = content(a), cb = content(b);
        mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        return ZPoly::constant(kZZ, a.nvars(), g);
    }

    ZPoly ca = content_in(a, v);
    ZPoly cb = content_in(b, v);
    ZPoly cg = gcd_mpoly(ca, cb);
    ZPoly A = *exact_divide(a, ca);
    ZPoly B = *exact_divide(b, cb);
    if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);

    // primitive remainder sequence
    ZPoly g(kZZ, a.nvars());
    while (true) {
        if (B.is_zero()) {
            g = A;
            break;
        }
        if (B.degree_in(v) == 0) {
            g = ZPoly::constant(kZZ, a.nvars(), 1);
            break;
        }
        ZPoly r = prem(A, B, v);
        A = std::move(B);
        B = r.is_zero() ? std::move(r) : primitive_in(r, v);
    }
    return make_lexlead_positive(mul(cg, g));
}

ZRational normalize_rational(const ZRational& f) {
    const ZZRing ring = f.ring();
    int nv = f.nvars();
    if (f.num.is_zero())
        return ZRational(ZPoly(ring, nv), ZPoly::constant(ring, nv, 1));
    ZPoly g = gcd_mpoly(f.num, f.den);
    ZPoly n = *exact_divide(f.num, g);
    ZPoly d = *exact_divide(f.den, g);
    if (d.lead().second < 0) {
        n = -n;
        d = -d;
    }
    return ZRational(std::move(n), std::move(d));
}

} // namespace tridyn
