#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridyn/extfield.hpp"

using namespace tridyn;

TEST_CASE("prime field arithmetic") {
    PrimeFieldCtx F(101);
    CHECK(F.modulus() == 101);
    CHECK(F.add(100, 3) == 2);
    CHECK(F.sub(2, 5) == 98);
    CHECK(F.neg(0) == 0);
    CHECK(F.neg(40) == 61);
    CHECK(F.mul(50, 50) == (50 * 50) % 101);
    CHECK(F.from_int(-1) == 100);
    // 10^2 = -1 mod 101, so 10^22 = (-1)^11 = -1
    CHECK(F.from_mpz(mpz_class("10000000000000000000000")) == 100);
}

TEST_CASE("prime field inverse and power") {
    PrimeFieldCtx F(101);
    for (uint64_t a = 1; a < 101; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
    CHECK(F.pow(3, 100) == 1); // Fermat
    CHECK(F.pow(3, mpz_class(100)) == 1);
    CHECK(F.pow(2, mpz_class(-1)) == F.inv(2));
    CHECK_THROWS_AS(F.inv(0), std::domain_error);
    CHECK_THROWS_AS(PrimeFieldCtx(100), std::invalid_argument);
}

TEST_CASE("unipoly divmod gcd and eval") {
    PrimeFieldCtx F(7);
    // f = X^3 + 2X + 1, g = X + 3
    up::UPoly<PrimeFieldCtx> f{1, 2, 0, 1}, g{3, 1};
    auto [q, r] = up::divmod(F, f, g);
    // f = q*g + r
    auto back = up::add(F, up::mul(F, q, g), r);
    CHECK(up::eq(F, back, f));
    CHECK(up::deg(r) <= 0);
    CHECK(up::eval(F, f, 2) == (8 + 4 + 1) % 7);
    // gcd((X-1)(X-2), (X-1)(X-3)) = X-1 monic
    up::UPoly<PrimeFieldCtx> a = up::mul(F, {6, 1}, {5, 1});
    up::UPoly<PrimeFieldCtx> b = up::mul(F, {6, 1}, {4, 1});
    auto d = up::gcd(F, a, b);
    CHECK(up::eq(F, d, {6, 1}));
}

TEST_CASE("roots and factorization over a small prime field") {
    PrimeFieldCtx F(13);
    // (X-2)(X-5)^2 = X^3 - 12X^2 + 45X - 50
    up::UPoly<PrimeFieldCtx> f{F.from_int(-50), F.from_int(45), F.from_int(-12), 1};
    auto rs = up::roots(F, f);
    REQUIRE(rs.size() == 2);
    CHECK(rs[0] == 2);
    CHECK(rs[1] == 5);
    auto fac = up::factor(F, f, 0x5eed);
    CHECK(fac.lead == 1);
    REQUIRE(fac.factors.size() == 2);
    // sorted by degree then lex: both linear
    unsigned total = 0;
    for (auto& [p, m] : fac.factors) {
        CHECK(up::deg(p) == 1);
        total += m;
    }
    CHECK(total == 3);
}

TEST_CASE("irreducibility and canonical irreducible search") {
    PrimeFieldCtx F(3);
    // X^2 + 1 is irreducible over F_3
    CHECK(up::irreducible(F, up::UPoly<PrimeFieldCtx>{1, 0, 1}));
    // X^2 - 1 = (X-1)(X+1) is not
    CHECK(!up::irreducible(F, up::UPoly<PrimeFieldCtx>{2, 0, 1}));
    auto m2 = up::find_irreducible(F, 2);
    REQUIRE(m2.size() == 3);
    CHECK(up::irreducible(F, m2));
    // least candidate by (c1, c0): X^2 + 1
    CHECK(m2[0] == 1);
    CHECK(m2[1] == 0);
    auto m3 = up::find_irreducible(F, 3);
    CHECK(up::irreducible(F, m3));
    CHECK(up::deg(m3) == 3);
}

TEST_CASE("quadratic extension F_9") {
    PrimeFieldCtx F3(3);
    ExtFieldCtx<PrimeFieldCtx> F9(F3, up::find_irreducible(F3, 2));
    CHECK(F9.cardinality() == 9);
    CHECK(F9.characteristic() == 3);
    CHECK(F9.extension_degree() == 2);
    // exhaustive inverse check
    for (uint64_t i = 0; i < 9; ++i) {
        auto a = F9.elem_at(i);
        if (F9.is_zero(a)) continue;
        CHECK(F9.eq(F9.mul(a, F9.inv(a)), F9.one()));
    }
    // multiplicative order divides 8: a^8 = 1 for all nonzero a
    for (uint64_t i = 1; i < 9; ++i) {
        auto a = F9.elem_at(i);
        CHECK(F9.eq(F9.pow(a, 8), F9.one()));
    }
    // the adjoined root t satisfies t^2 = -1 (modulus X^2 + 1)
    auto t = F9.elem_at(3); // (c1,c0) order: index 3 -> t
    CHECK(F9.eq(F9.mul(t, t), F9.from_int(-1)));
    // Frobenius inverse really inverts x -> x^3
    for (uint64_t i = 0; i < 9; ++i) {
        auto a = F9.elem_at(i);
        CHECK(F9.eq(F9.pow(F9.pth_root(a), 3), a));
    }
}

TEST_CASE("tower F_81 over F_9") {
    PrimeFieldCtx F3(3);
    ExtFieldCtx<PrimeFieldCtx> F9(F3, up::find_irreducible(F3, 2));
    ExtFieldCtx<ExtFieldCtx<PrimeFieldCtx>> F81(F9, up::find_irreducible(F9, 2));
    CHECK(F81.cardinality() == 81);
    CHECK(F81.cardinality_fits_u64());
    auto a = F81.elem_at(17);
    CHECK(F81.eq(F81.pow(a, 81), a)); // x^q = x
    if (!F81.is_zero(a)) CHECK(F81.eq(F81.mul(a, F81.inv(a)), F81.one()));
    // roots of X^2 - x for x a nonsquare in F_9 live upstairs
    up::UPoly<ExtFieldCtx<ExtFieldCtx<PrimeFieldCtx>>> sq{
        F81.neg(F81.from_fp(2)), F81.zero(), F81.one()};
    auto rs = up::roots(F81, sq);
    CHECK(rs.size() == 2);
}
