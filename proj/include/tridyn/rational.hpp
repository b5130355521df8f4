#pragma once

// Rational functions as explicit numerator/denominator pairs. Arithmetic is kept
// unreduced on purpose: cancellation is a separate, deliberate step (zzgcd.hpp),
// so representation growth stays observable.

#include <vector>

#include "tridyn/multipoly.hpp"

namespace tridyn {

template <class R>
struct RationalFn {
    MultiPoly<R> num;
    MultiPoly<R> den;

    RationalFn(MultiPoly<R> n, MultiPoly<R> d) : num(std::move(n)), den(std::move(d)) {
        check_compat(num, den);
        if (den.is_zero()) throw std::domain_error("zero denominator");
    }

    static RationalFn from_poly(MultiPoly<R> p) {
        auto one = MultiPoly<R>::constant(p.ring(), p.nvars(), p.ring().one());
        return RationalFn(std::move(p), std::move(one));
    }

    static RationalFn variable(R ring, int nvars, int idx) {
        return from_poly(MultiPoly<R>::variable(std::move(ring), nvars, idx));
    }

    const R& ring() const { return num.ring(); }
    int nvars() const { return num.nvars(); }
    bool is_zero() const { return num.is_zero(); }
    bool is_polynomial() const { return den.is_constant(); }
};

template <class R>
void check_compat(const RationalFn<R>& a, const RationalFn<R>& b) {
    check_compat(a.num, b.num);
}

template <class R>
RationalFn<R> operator+(const RationalFn<R>& a, const RationalFn<R>& b) {
    check_compat(a, b);
    return RationalFn<R>(a.num * b.den + b.num * a.den, a.den * b.den);
}

template <class R>
RationalFn<R> operator-(const RationalFn<R>& a, const RationalFn<R>& b) {
    check_compat(a, b);
    return RationalFn<R>(a.num * b.den - b.num * a.den, a.den * b.den);
}

template <class R>
RationalFn<R> operator-(const RationalFn<R>& a) {
    return RationalFn<R>(-a.num, a.den);
}

template <class R>
RationalFn<R> operator*(const RationalFn<R>& a, const RationalFn<R>& b) {
    check_compat(a, b);
    return RationalFn<R>(a.num * b.num, a.den * b.den);
}

template <class R>
RationalFn<R> operator/(const RationalFn<R>& a, const RationalFn<R>& b) {
    check_compat(a, b);
    if (b.num.is_zero()) throw std::domain_error("division by the zero function");
    return RationalFn<R>(a.num * b.den, a.den * b.num);
}

// Substitute rational functions for every variable of several polynomials at once.
// All outers share one denominator: with d_m the max degree of variable m across
// the outers and args[m] = num_m/den_m,
//   D = prod_m den_m^(d_m),   outer L  ->  P_L = sum_t c_t prod_m num_m^(t_m) den_m^(d_m - t_m),
// so L(args) = P_L / D. Composing the numerator and denominator of a rational
// outer together makes D cancel in the quotient.
template <class R>
struct Composed {
    std::vector<MultiPoly<R>> nums;
    MultiPoly<R> den;
};

template <class R>
Composed<R> compose_many(const std::vector<const MultiPoly<R>*>& outers,
                         const std::vector<RationalFn<R>>& args,
                         size_t guard = kDefaultTermGuard) {
    if (outers.empty()) throw std::invalid_argument("compose_many: no outer polynomials");
    const R& ring = outers[0]->ring();
    int m = outers[0]->nvars();
    if (static_cast<int>(args.size()) != m)
        throw std::invalid_argument("compose_many: arity mismatch");
    for (const auto* o : outers) {
        if (!(o->ring() == ring) || o->nvars() != m)
            throw DomainMismatch("compose_many: outer domain mismatch");
    }
    int target_nvars = args[0].nvars();
    for (const auto& a : args) {
        if (!(a.ring() == ring)) throw DomainMismatch("compose_many: argument ring mismatch");
        if (a.nvars() != target_nvars)
            throw DomainMismatch("compose_many: argument arity mismatch");
    }

    std::vector<int64_t> dmax(m, 0);
    for (const auto* o : outers) {
        auto prof = o->degree_profile();
        for (int j = 0; j < m; ++j)
            if (prof[j] != kNegInfDegree) dmax[j] = std::max(dmax[j], prof[j]);
    }

    auto one = MultiPoly<R>::constant(ring, target_nvars, ring.one());
    std::vector<std::vector<MultiPoly<R>>> pnum(m), pden(m);
    for (int j = 0; j < m; ++j) {
        pnum[j].push_back(one);
        pden[j].push_back(one);
        for (int64_t k = 1; k <= dmax[j]; ++k) {
            pnum[j].push_back(mul(pnum[j].back(), args[j].num, guard));
            pden[j].push_back(mul(pden[j].back(), args[j].den, guard));
        }
    }

    Composed<R> out{{}, one};
    for (int j = 0; j < m; ++j)
        if (dmax[j] > 0) out.den = mul(out.den, pden[j][dmax[j]], guard);

    out.nums.reserve(outers.size());
    for (const auto* o : outers) {
        MultiPoly<R> acc(ring, target_nvars);
        for (const auto& [e, c] : o->terms()) {
            MultiPoly<R> t = MultiPoly<R>::constant(ring, target_nvars, c);
            for (int j = 0; j < m; ++j) {
                if (e[j] > 0) t = mul(t, pnum[j][e[j]], guard);
                if (dmax[j] - e[j] > 0) t = mul(t, pden[j][dmax[j] - e[j]], guard);
            }
            acc = acc + t;
        }
        out.nums.push_back(std::move(acc));
    }
    return out;
}

// Evaluation result before the final division: a zero denominator marks a pole.
template <class S>
struct EvalPair {
    typename S::Elem num;
    typename S::Elem den;
};

template <class S, class R, class Map>
EvalPair<S> eval_rational_mapped(const RationalFn<R>& f, const S& T,
                                 const std::vector<typename S::Elem>& pt, Map&& cmap) {
    return EvalPair<S>{eval_point_mapped(f.num, T, pt, cmap),
                       eval_point_mapped(f.den, T, pt, cmap)};
}

template <class R>
EvalPair<R> eval_rational(const RationalFn<R>& f, const std::vector<typename R::Elem>& pt) {
    return eval_rational_mapped(f, f.ring(), pt,
                                [](const typename R::Elem& c) { return c; });
}

// log of the largest absolute coefficient (nats); the numerator/denominator form
// takes the max over both parts. Undefined for the zero polynomial.
inline mpz_class coeff_max(const RationalFn<ZZRing>& f) {
    mpz_class a = max_abs_coeff(f.num), b = max_abs_coeff(f.den);
    return a > b ? a : b;
}

inline double height_nat(const MultiPoly<ZZRing>& p) { return log_mpz(max_abs_coeff(p)); }

inline double height_nat(const RationalFn<ZZRing>& f) { return log_mpz(coeff_max(f)); }

} // namespace tridyn
