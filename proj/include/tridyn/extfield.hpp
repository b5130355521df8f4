#pragma once

// Extension field built on top of another field context by a monic irreducible
// modulus. Elements are fixed-width coefficient vectors over the base field,
// index = power of the adjoined root. Towers nest: ExtFieldCtx<ExtFieldCtx<...>>.

#include <cstdint>
#include <sstream>
#include <vector>

#include "tridyn/unipoly.hpp"

namespace tridyn {

template <class Base>
class ExtFieldCtx {
public:
    using BaseElem = typename Base::Elem;
    using Elem = std::vector<BaseElem>;

    ExtFieldCtx(Base base, std::vector<BaseElem> modulus)
        : base_(std::move(base)), mod_(std::move(modulus)) {
        if (mod_.size() < 2) throw std::invalid_argument("extension modulus must have degree >= 1");
        if (!base_.eq(mod_.back(), base_.one()))
            throw std::invalid_argument("extension modulus must be monic");
        m_ = mod_.size() - 1;
    }

    const Base& base() const { return base_; }
    const std::vector<BaseElem>& modulus_poly() const { return mod_; }
    size_t extension_degree() const { return m_; }

    uint64_t characteristic() const { return base_.characteristic(); }

    mpz_class cardinality() const {
        mpz_class c;
        mpz_pow_ui(c.get_mpz_t(), base_.cardinality().get_mpz_t(),
                   static_cast<unsigned long>(m_));
        return c;
    }
    bool cardinality_fits_u64() const {
        return mpz_sizeinbase(cardinality().get_mpz_t(), 2) <= 63;
    }
    uint64_t cardinality_u64() const {
        if (!cardinality_fits_u64()) throw std::domain_error("cardinality exceeds 64 bits");
        return static_cast<uint64_t>(cardinality().get_ui());
    }

    Elem zero() const { return Elem(m_, base_.zero()); }
    Elem one() const {
        Elem e(m_, base_.zero());
        e[0] = base_.one();
        return e;
    }

    bool is_zero(const Elem& a) const {
        for (const auto& c : a)
            if (!base_.is_zero(c)) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const {
        for (size_t i = 0; i < m_; ++i)
            if (!base_.eq(a[i], b[i])) return false;
        return true;
    }
    // canonical order: lexicographic on (c_{m-1}, ..., c_0)
    bool less(const Elem& a, const Elem& b) const {
        for (size_t i = m_; i-- > 0;) {
            if (!base_.eq(a[i], b[i])) return base_.less(a[i], b[i]);
            if (i == 0) break;
        }
        return false;
    }

    Elem from_int(long v) const {
        Elem e = zero();
        e[0] = base_.from_int(v);
        return e;
    }
    Elem from_mpz(const mpz_class& v) const {
        Elem e = zero();
        e[0] = base_.from_mpz(v);
        return e;
    }
    // embed a residue of the prime subfield
    Elem from_fp(uint64_t v) const {
        Elem e = zero();
        e[0] = base_.from_fp(v);
        return e;
    }
    // lift a base-field element
    Elem from_base(const BaseElem& v) const {
        Elem e = zero();
        e[0] = v;
        return e;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(m_, base_.zero());
        for (size_t i = 0; i < m_; ++i) r[i] = base_.add(a[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(m_, base_.zero());
        for (size_t i = 0; i < m_; ++i) r[i] = base_.sub(a[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(m_, base_.zero());
        for (size_t i = 0; i < m_; ++i) r[i] = base_.neg(a[i]);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<BaseElem> prod(2 * m_ - 1, base_.zero());
        for (size_t i = 0; i < m_; ++i) {
            if (base_.is_zero(a[i])) continue;
            for (size_t j = 0; j < m_; ++j)
                prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
        }
        // reduce mod the monic modulus
        for (size_t i = prod.size(); i-- > m_;) {
            BaseElem c = prod[i];
            if (base_.is_zero(c)) continue;
            for (size_t j = 0; j < m_; ++j)
                prod[i - m_ + j] = base_.sub(prod[i - m_ + j], base_.mul(c, mod_[j]));
            prod[i] = base_.zero();
        }
        prod.resize(m_);
        return prod;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("inverse of zero");
        up::UPoly<Base> ap(a.begin(), a.end());
        up::trim(base_, ap);
        auto r = up::inv_mod(base_, std::move(ap), mod_);
        r.resize(m_, base_.zero());
        return r;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }
    Elem pow(const Elem& a, const mpz_class& e) const {
        if (e < 0) return inv(pow(a, mpz_class(-e)));
        Elem r = one();
        Elem b = a;
        size_t bits = (e == 0) ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
        for (size_t i = 0; i < bits; ++i) {
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, b);
            if (i + 1 < bits) b = mul(b, b);
        }
        return r;
    }

    // p-th root: x -> x^(q/p), inverse of Frobenius
    Elem pth_root(const Elem& a) const {
        mpz_class e = cardinality() / characteristic();
        return pow(a, e);
    }

    // index decomposed base |base field|, digit j = coefficient of root^j,
    // consistent with less(): ascending index gives ascending elements
    Elem elem_at(uint64_t idx) const {
        uint64_t bc = base_.cardinality_u64();
        Elem e(m_, base_.zero());
        for (size_t j = 0; j < m_; ++j) {
            e[j] = base_.elem_at(idx % bc);
            idx /= bc;
        }
        if (idx != 0) throw std::out_of_range("elem_at: index beyond field size");
        return e;
    }

    Elem random_elem(Rng& rng) const {
        Elem e(m_, base_.zero());
        for (auto& c : e) c = base_.random_elem(rng);
        return e;
    }

    std::string fmt(const Elem& a) const {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < m_; ++i) {
            if (i) os << ',';
            os << base_.fmt(a[i]);
        }
        os << ']';
        return os.str();
    }

    bool operator==(const ExtFieldCtx& o) const {
        if (!(base_ == o.base_) || mod_.size() != o.mod_.size()) return false;
        for (size_t i = 0; i < mod_.size(); ++i)
            if (!base_.eq(mod_[i], o.mod_[i])) return false;
        return true;
    }
    bool operator!=(const ExtFieldCtx& o) const { return !(*this == o); }

private:
    Base base_;
    std::vector<BaseElem> mod_;
    size_t m_ = 0;
};

} // namespace tridyn
