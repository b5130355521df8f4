#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridyn/rational.hpp"
#include "tridyn/zzgcd.hpp"

using namespace tridyn;

static const ZZRing ZZ{};

static ZPoly c2(long v) { return ZPoly::constant(ZZ, 2, v); }
static ZPoly x1() { return ZPoly::variable(ZZ, 2, 0); }
static ZPoly x2() { return ZPoly::variable(ZZ, 2, 1); }

TEST_CASE("term map keeps descending lex order and merges duplicates") {
    ZPoly f(ZZ, 2);
    f.add_term({0, 1}, 2);
    f.add_term({1, 2}, 5);
    f.add_term({1, 1}, 3);
    f.add_term({0, 1}, -2); // cancels the first term
    REQUIRE(f.term_count() == 2);
    auto it = f.terms().begin();
    CHECK(it->first == ExpVec{1, 2});
    ++it;
    CHECK(it->first == ExpVec{1, 1});
    CHECK(f.total_degree() == 3);
}

TEST_CASE("arithmetic and evaluation") {
    ZPoly f = x1() * x2() + c2(1);          // X1 X2 + 1
    ZPoly g = x2() * mpz_class(2) + c2(3);  // 2 X2 + 3
    ZPoly prod = mul(f, g, 1000);
    CHECK(prod.term_count() == 4);
    CHECK(eval_point(prod, {mpz_class(2), mpz_class(5)}) ==
          (2 * 5 + 1) * (2 * 5 + 3));
    ZPoly p3 = pow(g, 3, 1000);
    CHECK(p3.total_degree() == 3);
    CHECK(eval_point(p3, {mpz_class(0), mpz_class(1)}) == 125);
    CHECK(max_abs_coeff(p3) == 54);
    ZPoly z = f - f;
    CHECK(z.is_zero());
    CHECK(z.total_degree() == kNegInfDegree);
}

TEST_CASE("content and coefficient magnitudes") {
    ZPoly f = x1() * mpz_class(6) + x2() * mpz_class(-9);
    CHECK(content(f) == 3);
    CHECK(max_abs_coeff(f) == 9);
    CHECK(max_abs_coeff(ZPoly(ZZ, 2)) == 0);
}

TEST_CASE("term guard trips on oversized products") {
    ZPoly f(ZZ, 2);
    for (int32_t i = 0; i < 40; ++i) f.add_term({i, 0}, 1);
    ZPoly g(ZZ, 2);
    for (int32_t j = 0; j < 40; ++j) g.add_term({0, j}, 1);
    CHECK_THROWS_AS(mul(f, g, 100), TermGuardExceeded);
}

TEST_CASE("domain mismatch is rejected") {
    ZPoly f(ZZ, 2), g(ZZ, 3);
    CHECK_THROWS_AS(f + g, DomainMismatch);
}

TEST_CASE("rational arithmetic and evaluation") {
    ZRational f(x2(), x1());             // X2 / X1
    ZRational g(c2(1), x2());            // 1 / X2
    ZRational s = f + g;
    CHECK(s.num == x2() * x2() + x1());
    CHECK(s.den == mul(x1(), x2(), 100));
    auto ev = eval_rational(s, {mpz_class(2), mpz_class(3)});
    CHECK(ev.num == 11);
    CHECK(ev.den == 6);
    CHECK(coeff_max(s) == 1);
    CHECK(height_nat(s) == doctest::Approx(0.0));
}

TEST_CASE("compose_many shares one denominator") {
    // outers in 2 slot variables: L1 = Y1 + Y2, L2 = Y1 Y2
    ZPoly L1 = x1() + x2();
    ZPoly L2 = mul(x1(), x2(), 100);
    std::vector<ZRational> args{ZRational(c2(1), x1()), // 1/X1
                                ZRational(x2(), c2(1))}; // X2
    auto comp = compose_many({&L1, &L2}, args);
    REQUIRE(comp.nums.size() == 2);
    // shared den = X1; L1 -> (1 + X1 X2)/X1; L2 -> X2
    CHECK(comp.den == x1());
    CHECK(comp.nums[0] == c2(1) + mul(x1(), x2(), 100));
    CHECK(comp.nums[1] == x2());
}

TEST_CASE("exact division and gcd") {
    ZPoly f = x1() * x2() + c2(1);
    ZPoly g = x2() * mpz_class(2) + c2(3);
    ZPoly prod = mul(f, g, 1000);
    auto q = exact_divide(prod, f);
    REQUIRE(q.has_value());
    CHECK(*q == g);
    CHECK(!exact_divide(prod + c2(1), f).has_value());
    ZPoly d = gcd_mpoly(mul(prod, f, 10000), mul(prod, g, 10000));
    auto qf = exact_divide(d, prod);
    REQUIRE(qf.has_value());
    CHECK(qf->total_degree() == 0);
}

TEST_CASE("normalize_rational divides out the common factor") {
    ZPoly f = x1() * x2() + c2(1);
    ZPoly g = x2() * mpz_class(2) + c2(3);
    ZRational raw(mul(f, g, 1000) * mpz_class(2), mul(f, f, 1000) * mpz_class(4));
    ZRational n = normalize_rational(raw);
    CHECK(n.num == g);
    CHECK(n.den == f * mpz_class(2));
    // sign convention: positive denominator lead
    ZRational m = normalize_rational(ZRational(x2(), c2(-2)));
    CHECK(m.den.terms().begin()->second > 0);
}
