#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "tridyn/iterate.hpp"
#include "tridyn/sysio.hpp"

using namespace tridyn;

static const ZZRing ZZ{};

static const std::vector<std::string> kVars{"X1", "X2"};

static TriangularSystem s1() {
    ZPoly G = ZPoly::variable(ZZ, 2, 1);
    ZPoly H = ZPoly::constant(ZZ, 2, 1);
    return make_system(2, {SystemLevel{1, G, H}}, LastLevel{1, 2, 3});
}
static TriangularSystem s2() {
    ZPoly G = ZPoly::constant(ZZ, 2, 1);
    ZPoly H = ZPoly::variable(ZZ, 2, 1);
    return make_system(2, {SystemLevel{-1, G, H}}, LastLevel{-1, 1, 1});
}

static std::string reser(const std::string& text) {
    return serialize_polynomial(parse_polynomial(text, kVars), kVars);
}

TEST_CASE("polynomial text round trips in canonical form") {
    std::string ex = "2*X1*X2^2 + 3*X1*X2 + 2*X2 + 4";
    ZPoly p = parse_polynomial(ex, kVars);
    CHECK(p.term_count() == 4);
    CHECK(serialize_polynomial(p, kVars) == ex);

    CHECK(reser("-X2^3") == "-X2^3");
    CHECK(reser("0") == "0");
    CHECK(reser("  7 ") == "7");
    CHECK(reser("X1*X1*X1") == "X1^3");
    CHECK(reser("2*3*X2") == "6*X2");
    CHECK(reser("X2 + X1") == "X1 + X2");
    CHECK(reser("X1 - X1 + 2*X2") == "2*X2");
    CHECK(reser("+X1") == "X1");
    // U+2212 minus sign
    CHECK(reser("5 \xe2\x88\x92 3*X1") == "-3*X1 + 5");
}

TEST_CASE("parse errors carry location and expectation") {
    try {
        parse_polynomial("X1^", kVars);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.offset == 3);
        CHECK(e.line == 1);
        CHECK(e.col == 4);
        CHECK(e.expected.find("exponent") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_polynomial("X1 + ", kVars), ParseError);
    CHECK_THROWS_AS(parse_polynomial("X1^0", kVars), ParseError);
    try {
        parse_polynomial("X3 + 1", kVars);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.offset == 0);
        CHECK(e.expected.find("X3") != std::string::npos);
    }
    try {
        parse_polynomial("2 3", kVars);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    try {
        parse_polynomial("X1 +\n  X9", kVars);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 3);
    }
}

TEST_CASE("system documents round trip byte for byte") {
    TriangularSystem A = s1();
    std::string ja = serialize_system(A);
    TriangularSystem A2 = parse_system(ja);
    CHECK(A2.n == 2);
    CHECK(A2.last.g == 2);
    CHECK(A2.last.h == 3);
    CHECK(A2.levels[0].e == 1);
    CHECK(A2.levels[0].G == A.levels[0].G);
    CHECK(A2.levels[0].H == A.levels[0].H);
    CHECK(serialize_system(A2) == ja);

    TriangularSystem B = s2();
    std::string jb = serialize_system(B);
    TriangularSystem B2 = parse_system(jb);
    CHECK(B2.last.e == -1);
    CHECK(B2.levels[0].e == -1);
    CHECK(serialize_system(B2) == jb);

    // hand-written doc gets default variable names
    TriangularSystem C = parse_system(
        R"({"n": 2, "levels": [{"e": 1, "G": "X2", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})");
    CHECK(C.vars == kVars);
    CHECK(C.levels[0].G == A.levels[0].G);

    // wide last-level coefficient survives as a decimal string
    TriangularSystem D = parse_system(
        R"({"n": 1, "levels": [{"e": 1, "g": "123456789012345678901234567890", "h": 0}]})");
    CHECK(D.last.g == mpz_class("123456789012345678901234567890"));
    CHECK(parse_system(serialize_system(D)).last.g == D.last.g);
}

static bool schema_message(const std::string& doc, const char* frag) {
    try {
        parse_system(doc);
    } catch (const SchemaError& e) {
        return std::string(e.what()).find(frag) != std::string::npos;
    }
    return false;
}

TEST_CASE("schema violations carry pointed messages") {
    CHECK(schema_message(R"({"n": 2})", "levels"));
    CHECK(schema_message(
        R"({"n": 2, "levels": [{"e": 2, "G": "X2", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})",
        "\"e\" must be 1 or -1"));
    CHECK(schema_message(
        R"({"n": 2, "levels": [{"e": 1, "G": "X2", "H": "1"}, {"e": 1, "g": 0, "h": 3}]})",
        "nonzero"));
    CHECK(schema_message(
        R"({"n": 2, "levels": [{"e": 1, "G": "Y", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})",
        "level 1 \"G\""));
    CHECK(schema_message(
        R"({"n": 3, "levels": [{"e": 1, "G": "X2", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})",
        "one entry per level"));
    CHECK(schema_message(
        R"({"n": 2, "bogus": 1, "levels": [{"e": 1, "G": "X2", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})",
        "unknown key"));
    CHECK(schema_message(
        R"({"n": 2, "levels": [{"e": 1, "G": "X1", "H": "1"}, {"e": 1, "g": 2, "h": 3}]})",
        "index not above the level"));
    try {
        parse_system("{\"n\": 2,");
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.expected == "valid JSON");
    }
}

TEST_CASE("variety documents") {
    Variety V = parse_variety(R"({"polys": ["X1 - X2"]})", kVars);
    CHECK(V.s() == 1);
    CHECK(V.D == 1);
    CHECK(V.H_exact == 1);
    CHECK(serialize_variety(V, kVars) == "{\n  \"polys\": [\n    \"X1 - X2\"\n  ]\n}\n");
    CHECK_THROWS_AS(parse_variety(R"({"polys": []})", kVars), SchemaError);
}

TEST_CASE("config documents merge defaults") {
    ExperimentConfig cfg = parse_config(R"({"primes": [5, 31], "epsilon": 0.25, "seed": 42})");
    CHECK(cfg.prime_lo == 5);
    CHECK(cfg.prime_hi == 31);
    CHECK(cfg.seed == 42);
    CHECK(cfg.ell == 64);
    CHECK(cfg.k_lo == 1);
    ExperimentConfig cfg2 = parse_config(serialize_config(cfg));
    CHECK(serialize_config(cfg2) == serialize_config(cfg));
    try {
        parse_config(R"({"epsilom": 0.1})");
        FAIL("no throw");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("epsilom") != std::string::npos);
    }
}

TEST_CASE("growth rendering") {
    GrowthReport rep = growth_report(s1(), 3);
    std::string csv = render_growth(rep, ReportFormat::Csv);
    CHECK(csv.rfind("i,k,deg_measured,deg_predicted,h_measured,bound_5t,bound_l36,ok_deg,"
                    "ok_h,t_naive_ns,t_struct_ns\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(rep.rows.size()));
    std::string gjson = render_growth(rep, ReportFormat::Json);
    CHECK(gjson.find("\"heights_structural\": true") != std::string::npos);
}

TEST_CASE("periodic rendering with stabilization block") {
    auto rows = periodic_count_table(s1(), {2, 3, 5, 7}, 1);
    auto stab = stabilize(rows);
    std::string pcsv = render_periodic(rows, &stab, ReportFormat::Csv);
    CHECK(pcsv.rfind("p,k,count_fp,count_closure,bezout,flags\n", 0) == 0);
    CHECK(pcsv.find("degenerate") != std::string::npos); // the p = 2 row
    std::string pjson = render_periodic(rows, &stab, ReportFormat::Json);
    CHECK(pjson.find("\"stabilization\"") != std::string::npos);
}

TEST_CASE("orbit rendering") {
    auto A = s1();
    ReducedSystem rs = reduce_system(A, 7);
    PrimeFieldCtx F7(7);
    auto rec = orbit(rs, F7, {2, 4}, 64);
    std::string ocsv = render_orbit(rec, 7, A.vars, ReportFormat::Csv);
    CHECK(ocsv.rfind("m,X1,X2\n", 0) == 0);
    CHECK(ocsv.find("0,2,4\n") != std::string::npos);
    std::string ojsn = render_orbit(rec, 7, A.vars, ReportFormat::Json);
    CHECK(ojsn.find("\"entered_cycle\"") != std::string::npos);
}

TEST_CASE("hit table rendering") {
    auto A = s1();
    Variety V = parse_variety(R"({"polys": ["X1 - X2"]})", kVars);
    auto hrows = hit_frequency_table(A, V, {5}, 8);
    std::string hcsv = render_hits(hrows, 0.25, ReportFormat::Csv);
    CHECK(hcsv.rfind("p,w,ell,hits,eps_ell,exceeds,s_sufficient\n", 0) == 0);
    CHECK(hcsv.find("5,0;0,8,") != std::string::npos);
}

TEST_CASE("bounds rendering") {
    auto nb = nullstellensatz_bound(1, 2, 1.0, 1);
    std::vector<TheoremFragment> frags = {
        theorem_thresholds("T1", TheoremParams{}),
        theorem_thresholds("T3", TheoremParams{2, 1, 1, 1, 0.5, 2}),
    };
    std::string bcsv = render_bounds(nb, frags, ReportFormat::Csv);
    CHECK(bcsv.rfind("which,quantity,value\n", 0) == 0);
    CHECK(bcsv.find("nullstellensatz,h_coeff,240\n") != std::string::npos);
    CHECK(bcsv.find("T3,beta,9\n") != std::string::npos);
    std::string bjson = render_bounds(nb, frags, ReportFormat::Json);
    CHECK(bjson.find("\"beta\": 9") != std::string::npos);
}

TEST_CASE("gap rendering is exact") {
    GapResult gr = gap_structure({0, 3, 5, 8, 10, 13}, 13);
    CHECK(render_gap(gr, ReportFormat::Csv) ==
          "r,count,r_max,count_min\n3,3,5.2,0.480769230769231\n");
}

TEST_CASE("text file io") {
    std::string ja = serialize_system(s1());
    write_text_file("/tmp/tridyn_test_io.json", ja);
    CHECK(read_text_file("/tmp/tridyn_test_io.json") == ja);
    CHECK_THROWS_AS(write_text_file("/tmp/no_such_dir_tridyn/x.json", "x"),
                    std::runtime_error);
    CHECK_THROWS_AS(read_text_file("/tmp/no_such_dir_tridyn/x.json"),
                    std::runtime_error);
}
