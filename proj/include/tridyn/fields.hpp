#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tridyn/util.hpp"

namespace tridyn {

// Arithmetic context for F_p, p a 64-bit prime (p < 2^63 so sums never wrap).
// Elements are canonical representatives in [0, p).
class PrimeFieldCtx {
public:
    using Elem = uint64_t;

    explicit PrimeFieldCtx(uint64_t p) : p_(p) {
        if (p >= (1ull << 63) || !is_prime_u64(p))
            throw std::invalid_argument("PrimeFieldCtx: modulus must be prime and < 2^63");
    }

    uint64_t modulus() const { return p_; }
    uint64_t characteristic() const { return p_; }
    mpz_class cardinality() const { return mpz_class(static_cast<unsigned long>(p_)); }
    bool cardinality_fits_u64() const { return true; }
    uint64_t cardinality_u64() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p_; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    bool less(Elem a, Elem b) const { return a < b; }

    Elem from_int(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        return static_cast<Elem>(r);
    }
    Elem from_mpz(const mpz_class& v) const {
        mpz_class r = v % mpz_class(static_cast<unsigned long>(p_));
        if (r < 0) r += static_cast<unsigned long>(p_);
        return r.get_ui();
    }
    Elem from_fp(uint64_t v) const { return v % p_; }

    Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p_ ? s - p_ : s; }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const { return mulmod_u64(a, b, p_); }

    Elem pow(Elem a, uint64_t e) const { return powmod_u64(a, e, p_); }
    Elem pow(Elem a, const mpz_class& e) const {
        if (e < 0) return pow(inv(a), mpz_class(-e));
        Elem r = one(), b = a;
        size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        if (e == 0) return one();
        for (size_t i = 0; i < bits; ++i) {
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, b);
            b = mul(b, b);
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p_ - 2);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    // Frobenius inverse: unique b with b^p = a. Identity on the prime field.
    Elem pth_root(Elem a) const { return a; }

    Elem elem_at(uint64_t idx) const { return idx % p_; }
    Elem random_elem(Rng& rng) const {
        std::uniform_int_distribution<uint64_t> d(0, p_ - 1);
        return d(rng);
    }

    std::string fmt(Elem a) const { return std::to_string(a); }

    bool operator==(const PrimeFieldCtx& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeFieldCtx& o) const { return p_ != o.p_; }

private:
    uint64_t p_;
};

} // namespace tridyn
