#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the command line binary against golden outputs.
// TRIDYN_BIN, TRIDYN_DATA, and TRIDYN_GOLDEN come from the test environment.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

std::string env(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, "missing environment variable ", name);
    return v;
}

RunResult run(const std::string& args, const std::string& envprefix = "") {
    std::string cmd = envprefix + "'" + env("TRIDYN_BIN") + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return env("TRIDYN_DATA") + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_golden(const std::string& name, const std::string& got) {
    std::string want = read_file(env("TRIDYN_GOLDEN") + "/" + name);
    CHECK_MESSAGE(got == want, "golden mismatch for ", name, "\n--- got ---\n", got,
                  "\n--- want ---\n", want);
}

} // namespace

TEST_CASE("validate: valid system, csv golden") {
    auto r = run("validate " + data("s1.json") + " --format csv");
    CHECK(r.code == 0);
    check_golden("validate_s1.csv", r.out);
}

TEST_CASE("validate: three-level system passes") {
    auto r = run("validate " + data("s3.json"));
    CHECK(r.code == 0);
    CHECK(r.out.empty()); // human summary goes to stderr only
}

TEST_CASE("validate: dominance violation exits 1 with a structured row") {
    std::string bad = "/tmp/tridyn_cli_bad.json";
    {
        std::ofstream f(bad);
        f << R"({"n": 2, "levels": [{"e": 1, "G": "X2", "H": "X2"}, {"e": 1, "g": 2, "h": 3}]})";
    }
    auto r = run("validate " + bad + " --format csv");
    CHECK(r.code == 1);
    check_golden("validate_bad.csv", r.out);
}

TEST_CASE("validate: missing file exits 2") {
    auto r = run("validate /tmp/definitely_not_here.json");
    CHECK(r.code == 2);
}

TEST_CASE("iterate: csv and json goldens") {
    auto r = run("iterate " + data("s1.json") + " --k 2 --format csv");
    CHECK(r.code == 0);
    check_golden("iterate_s1_k2.csv", r.out);

    auto rj = run("iterate " + data("s2.json") + " --k 3 --format json");
    CHECK(rj.code == 0);
    check_golden("iterate_s2_k3.json", rj.out);
}

TEST_CASE("iterate: single engine, no machine output requested") {
    auto r = run("iterate " + data("s1.json") + " --k 2 --engine structured");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("growth: default timing columns are zeroed and deterministic") {
    auto a = run("growth " + data("s1.json") + " --k 4 --format csv");
    CHECK(a.code == 0);
    check_golden("growth_s1_k4.csv", a.out);
    auto b = run("growth " + data("s1.json") + " --k 4 --format csv");
    CHECK(a.out == b.out);

    auto j = run("growth " + data("s3.json") + " --k 3 --format json");
    CHECK(j.code == 0);
    check_golden("growth_s3_k3.json", j.out);
}

TEST_CASE("periodic: range of primes with brute-force cross-check") {
    auto r = run("periodic " + data("s1.json") + " --p 2:13 --k 2 --format csv");
    CHECK(r.code == 0);
    check_golden("periodic_s1_k2.csv", r.out);

    auto j = run("periodic " + data("s1.json") + " --p 7 --k 1 --format json");
    CHECK(j.code == 0);
    check_golden("periodic_s1_p7.json", j.out);
}

TEST_CASE("periodic: composite prime token exits 2") {
    auto r = run("periodic " + data("s1.json") + " --p 6 --k 1");
    CHECK(r.code == 2);
}

TEST_CASE("orbit: fixed point csv and pole json") {
    auto r = run("orbit " + data("s1.json") + " --p 7 --w 2,4 --format csv");
    CHECK(r.code == 0);
    check_golden("orbit_s1_fixed.csv", r.out);

    auto j = run("orbit " + data("s2.json") + " --p 5 --w 1,0 --format json");
    CHECK(j.code == 0); // a pole is a finding, not a failure
    check_golden("orbit_s2_pole.json", j.out);
}

TEST_CASE("orbit: wrong arity exits 2") {
    auto r = run("orbit " + data("s1.json") + " --p 7 --w 1,2,3");
    CHECK(r.code == 2);
}

TEST_CASE("variety: hit frequency table golden") {
    auto r = run("variety " + data("s1.json") + " --variety " + data("v_diag.json") +
                 " --p 5:7 --ell 8 --format csv");
    CHECK(r.code == 0);
    check_golden("variety_s1_diag.csv", r.out);
}

TEST_CASE("bounds: formula values golden") {
    auto r = run("bounds --n 1 --d 2 --height 1.0 --s 1 --format csv");
    CHECK(r.code == 0);
    check_golden("bounds_small.csv", r.out);
}

TEST_CASE("gap: exact golden") {
    auto r = run("gap --seq 0,3,5,8,10,13 --N 13 --format csv");
    CHECK(r.code == 0);
    check_golden("gap_small.csv", r.out);
}

TEST_CASE("machine output redirects to --out leaving stdout empty") {
    std::string tmp = "/tmp/tridyn_cli_out.csv";
    std::remove(tmp.c_str());
    auto r = run("gap --seq 0,3,5,8,10,13 --N 13 --format csv --out " + tmp);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    check_golden("gap_small.csv", read_file(tmp));
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2); // a subcommand is required
    CHECK(run("gap --seq 3,2,1").code == 2); // not strictly increasing
    CHECK(run("iterate " + data("s1.json") + " --k 0").code == 2);
}

TEST_CASE("invalid TRIDYN_SEED exits 2, valid one is accepted") {
    CHECK(run("iterate " + data("s1.json") + " --k 1", "TRIDYN_SEED=bogus ").code == 2);
    CHECK(run("iterate " + data("s1.json") + " --k 1", "TRIDYN_SEED=99 ").code == 0);
}

TEST_CASE("config file presets the prime range") {
    auto r = run("periodic " + data("s1.json") + " --config " + data("config_default.json") +
                 " --k 1 --format csv");
    CHECK(r.code == 0);
    // config range is [3, 31]: first row is p=3, no degenerate p=2 row
    CHECK(r.out.find("\n3,1,") != std::string::npos);
    CHECK(r.out.find("\n2,1,") == std::string::npos);
}
