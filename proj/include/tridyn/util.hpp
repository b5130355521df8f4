#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tridyn {

using Rng = std::mt19937_64;

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline uint64_t next_prime_u64(uint64_t n) {
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

// log of an arbitrary-precision integer magnitude, in nats.
inline double log_mpz(const mpz_class& v) {
    if (v == 0) throw std::domain_error("log of zero");
    signed long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    if (d < 0) d = -d;
    return std::log(d) + static_cast<double>(exp2) * 0.6931471805599453;
}

inline void hash_combine(uint64_t& h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

struct TermGuardExceeded : std::runtime_error {
    size_t count;
    size_t limit;
    TermGuardExceeded(size_t c, size_t l)
        : std::runtime_error("term guard exceeded: " + std::to_string(c) + " > " + std::to_string(l)),
          count(c), limit(l) {}
};

inline constexpr size_t kDefaultTermGuard = 10'000'000;

struct DomainMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace tridyn
