#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/sysgen.hpp"
#include "tridyn/iterate.hpp"

using namespace tridyn;

static const ZZRing ZZ{};

static ZPoly c2(long v) { return ZPoly::constant(ZZ, 2, v); }
static ZPoly x1() { return ZPoly::variable(ZZ, 2, 0); }
static ZPoly x2() { return ZPoly::variable(ZZ, 2, 1); }

static TriangularSystem s1() {
    return make_system(2, {SystemLevel{1, x2(), c2(1)}}, LastLevel{1, 2, 3});
}
static TriangularSystem s2() {
    return make_system(2, {SystemLevel{-1, c2(1), x2()}}, LastLevel{-1, 1, 1});
}

TEST_CASE("closed form of the last level") {
    // X -> 2X + 3 three times: 8X + 21
    auto f = closed_form_last(s1(), 3);
    CHECK(f.num == x2() * mpz_class(8) + c2(21));
    CHECK(f.den == c2(1));
    // X -> 1/X + 1 = (X+1)/X three times: (3X+2)/(2X+1)
    auto g = closed_form_last(s2(), 3);
    CHECK(equivalent_rational(
        g, ZRational(x2() * mpz_class(3) + c2(2), x2() * mpz_class(2) + c2(1))));
    // k = 0 is the identity
    auto id = closed_form_last(s1(), 0);
    CHECK(id.num == x2());
    CHECK(id.den == c2(1));
}

TEST_CASE("naive iterates of the polynomial pair") {
    auto seq = iterate_naive_seq(s1(), 2);
    REQUIRE(seq.size() == 3);
    // F1^(2) = F1(F(X)) = (X1 X2 + 1)(2X2 + 3) + 1
    ZPoly want = mul(x1() * x2() + c2(1), x2() * mpz_class(2) + c2(3), 1000) + c2(1);
    CHECK(seq[2][0].num == want);
    CHECK(seq[2][0].den == c2(1));
    CHECK(seq[2][1].num == x2() * mpz_class(4) + c2(9));
}

TEST_CASE("structured engine agrees with the naive one") {
    for (auto sys : {s1(), s2()}) {
        auto run = iterate_structured(sys, 4);
        auto seq = iterate_naive_seq(sys, 4);
        for (int64_t j = 0; j <= 4; ++j) {
            for (int i = 1; i <= 2; ++i) {
                INFO("level ", i, " step ", j);
                CHECK(equivalent_rational(run.levels[i].F[j], seq[j][i - 1]));
            }
        }
    }
}

TEST_CASE("reciprocal level continuants in scaled polynomial form") {
    auto run = iterate_structured(s2(), 2);
    const auto& L = run.levels[1];
    REQUIRE(L.A.size() == 3);
    CHECK(L.A[2] == x2() * x2() + x2() * mpz_class(2));
    CHECK(L.B[2] == x2() + c2(1));
    CHECK(L.F[2].den == mul(x2(), x1() * x2() + c2(1), 1000));
}

TEST_CASE("measured degree equals the predicted degree") {
    auto s = s1();
    auto run = iterate_structured(s, 6);
    for (int64_t k = 0; k <= 6; ++k) {
        CHECK(measured_degree(run.levels[1].F[k]) == predicted_degree(s, 1, k));
        CHECK(measured_degree(run.levels[2].F[k]) == predicted_degree(s, 2, k));
    }
    auto t = s2();
    auto run2 = iterate_structured(t, 5);
    for (int64_t k = 0; k <= 5; ++k) {
        CHECK(measured_degree(run2.levels[1].F[k]) == predicted_degree(t, 1, k));
        CHECK(measured_degree(run2.levels[2].F[k]) == predicted_degree(t, 2, k));
    }
}

TEST_CASE("canonical form and equivalence tiers") {
    ZPoly f = x1() * x2() + c2(1);
    ZRational blown(mul(f, x2(), 1000) * mpz_class(6), mul(f, f, 10000) * mpz_class(2));
    auto canon = canonical_form(blown, {&f});
    CHECK(canon.certified);
    CHECK(canon.f.num == x2() * mpz_class(3));
    CHECK(canon.f.den == f);
    CHECK(equivalent_rational(blown, ZRational(x2() * mpz_class(3), f)));
    CHECK(!equivalent_rational(blown, ZRational(x2() * mpz_class(3), f + c2(1))));
    // peel_atoms alone removes listed factors and content
    auto peeled = peel_atoms(blown, {&f});
    CHECK(peeled.num == x2() * mpz_class(3));
    CHECK(peeled.den == f);
    CHECK(certify_coprime(peeled, 1));
}

TEST_CASE("growth report is fully green on the reference pair") {
    for (auto sys : {s1(), s2()}) {
        auto rep = growth_report(sys, 5);
        CHECK(rep.n == 2);
        CHECK(rep.k_max == 5);
        CHECK(rep.heights_structural);
        REQUIRE(rep.rows.size() == 10);
        int64_t seen_k = 0;
        for (const auto& row : rep.rows) {
            INFO("level ", row.i, " step ", row.k);
            CHECK(row.ok_deg);
            CHECK(row.ok_h);
            CHECK(row.deg_measured == row.deg_predicted);
            if (row.i < rep.n) {
                CHECK(row.bound_5t.has_value());
            } else {
                CHECK(!row.bound_5t.has_value());
            }
            CHECK(row.bound_l36 > 0.0);
            seen_k += row.k;
        }
        CHECK(seen_k == 2 * (1 + 2 + 3 + 4 + 5));
    }
}

TEST_CASE("identity components") {
    auto id = identity_components(3);
    REQUIRE(id.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(id[i].num == ZPoly::variable(ZZ, 3, i));
        CHECK(id[i].den == ZPoly::constant(ZZ, 3, 1));
    }
}

TEST_CASE("engines agree on generated systems") {
    Rng rng(0x17e7a7e);
    testgen::GenOptions opt;
    opt.extra_terms = 2;
    for (int t = 0; t < 12; ++t) {
        auto sys = testgen::rand_system(rng, opt);
        auto run = iterate_structured(sys, 3);
        auto seq = iterate_naive_seq(sys, 3);
        for (int64_t j = 0; j <= 3; ++j) {
            for (int i = 1; i <= sys.n; ++i) {
                INFO("trial ", t, " level ", i, " step ", j);
                CHECK(equivalent_rational(run.levels[i].F[j], seq[j][i - 1]));
            }
        }
    }
}
