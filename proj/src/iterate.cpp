#include "tridyn/iterate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "tridyn/bounds.hpp"
#include "tridyn/fields.hpp"
#include "tridyn/unipoly.hpp"

namespace tridyn {

namespace {

const ZZRing kZZ{};

int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

ZPoly zconst(int n, const mpz_class& c) { return ZPoly::constant(kZZ, n, c); }

ZPoly zvar(int n, int idx0) { return ZPoly::variable(kZZ, n, idx0); }

mpz_class clamp1(mpz_class v) { return v < 1 ? mpz_class(1) : v; }

} // namespace

std::vector<ZRational> identity_components(int n) {
    if (n < 1) throw std::invalid_argument("identity_components: n >= 1");
    std::vector<ZRational> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(ZRational::variable(kZZ, n, i));
    return out;
}

ZRational closed_form_last(const TriangularSystem& sys, int64_t k) {
    if (k < 0) throw std::invalid_argument("negative iterate count");
    const int n = sys.n;
    ZPoly xn = zvar(n, n - 1);
    ZPoly one = zconst(n, 1);
    if (k == 0) return ZRational(std::move(xn), std::move(one));
    const mpz_class& g = sys.last.g;
    const mpz_class& h = sys.last.h;
    if (sys.last.e == 1) {
        // g^k X + (g^{k-1} + ... + g + 1) h
        mpz_class gk;
        mpz_pow_ui(gk.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(k));
        mpz_class geo = g == 1 ? mpz_class(k) : mpz_class((gk - 1) / (g - 1));
        return ZRational(xn * gk + zconst(n, geo * h), std::move(one));
    }
    // ((h g),(1 0))^k by repeated squaring; F = (m11 X + m12)/(m21 X + m22)
    using Mat = std::array<mpz_class, 4>;
    auto matmul = [](const Mat& a, const Mat& b) {
        return Mat{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                   a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    };
    Mat m{1, 0, 0, 1}, base{h, g, 1, 0};
    uint64_t e = static_cast<uint64_t>(k);
    while (e) {
        if (e & 1) m = matmul(m, base);
        e >>= 1;
        if (e) base = matmul(base, base);
    }
    return ZRational(xn * m[0] + zconst(n, m[1]), xn * m[2] + zconst(n, m[3]));
}

namespace {

// Iterates the last level and every middle level down to `floor`.
StructuredRun structured_core(const TriangularSystem& sys, int64_t k, int floor, size_t guard) {
    if (k < 0) throw std::invalid_argument("negative iterate count");
    if (floor < 1 || floor > sys.n) throw std::out_of_range("level index");
    const int n = sys.n;
    StructuredRun run;
    run.n = n;
    run.k = k;
    run.levels.assign(n + 1, LevelIterates{});

    {
        auto& L = run.levels[n];
        L.e = sys.last.e;
        L.F.reserve(k + 1);
        L.F.push_back(ZRational::variable(kZZ, n, n - 1));
        for (int64_t j = 1; j <= k; ++j) {
            int64_t t0 = now_ns();
            L.F.push_back(closed_form_last(sys, j));
            L.step_ns.push_back(now_ns() - t0);
        }
    }

    for (int i = n - 1; i >= floor; --i) {
        auto& L = run.levels[i];
        const auto& lv = sys.levels[i - 1];
        L.e = lv.e;
        ZPoly xi = zvar(n, i - 1);
        L.F.push_back(ZRational::variable(kZZ, n, i - 1));
        if (lv.e == -1) {
            L.A.push_back(zconst(n, 1));
            L.B.push_back(ZPoly(kZZ, n));
        }
        for (int64_t j = 1; j <= k; ++j) {
            int64_t t0 = now_ns();
            std::vector<ZRational> args;
            args.reserve(n);
            for (int m = 1; m <= n; ++m) {
                if (m <= i) args.push_back(ZRational::variable(kZZ, n, m - 1));
                else args.push_back(run.levels[m].F[j - 1]);
            }
            auto comp = compose_many<ZZRing>({&lv.G, &lv.H}, args, guard);
            L.gn.push_back(std::move(comp.nums[0]));
            L.hn.push_back(std::move(comp.nums[1]));
            L.cd.push_back(std::move(comp.den));
            const ZPoly& gnj = L.gn.back();
            const ZPoly& hnj = L.hn.back();
            const ZPoly& cdj = L.cd.back();
            if (lv.e == 1) {
                if (j == 1) {
                    L.P.push_back(gnj);
                    L.Q.push_back(hnj);
                    L.E.push_back(cdj);
                } else {
                    L.P.push_back(mul(L.P[j - 2], gnj, guard));
                    L.Q.push_back(mul(L.Q[j - 2], gnj, guard) + mul(hnj, L.E[j - 2], guard));
                    L.E.push_back(mul(L.E[j - 2], cdj, guard));
                }
                L.F.push_back(ZRational(mul(xi, L.P[j - 1], guard) + L.Q[j - 1], L.E[j - 1]));
            } else {
                if (j == 1) {
                    L.A.push_back(hnj);
                    L.B.push_back(gnj);
                } else {
                    ZPoly carry = mul(gnj, L.cd[j - 2], guard);
                    L.A.push_back(mul(hnj, L.A[j - 1], guard) + mul(carry, L.A[j - 2], guard));
                    L.B.push_back(mul(hnj, L.B[j - 1], guard) + mul(carry, L.B[j - 2], guard));
                }
                ZPoly num = mul(xi, L.A[j], guard) + L.B[j];
                ZPoly den = mul(cdj, mul(xi, L.A[j - 1], guard) + L.B[j - 1], guard);
                L.F.push_back(ZRational(std::move(num), std::move(den)));
            }
            L.step_ns.push_back(now_ns() - t0);
        }
    }
    return run;
}

} // namespace

StructuredRun iterate_structured(const TriangularSystem& sys, int64_t k, size_t guard) {
    return structured_core(sys, k, 1, guard);
}

LevelIterates iterate_structured_plus(const TriangularSystem& sys, int i, int64_t k,
                                      size_t guard) {
    if (i < 1 || i >= sys.n) throw std::out_of_range("level index");
    if (sys.levels[i - 1].e != 1)
        throw std::invalid_argument("iterate_structured_plus on a level with exponent -1");
    auto run = structured_core(sys, k, i, guard);
    return std::move(run.levels[i]);
}

LevelIterates iterate_structured_minus(const TriangularSystem& sys, int i, int64_t k,
                                       size_t guard) {
    if (i < 1 || i >= sys.n) throw std::out_of_range("level index");
    if (sys.levels[i - 1].e != -1)
        throw std::invalid_argument("iterate_structured_minus on a level with exponent +1");
    auto run = structured_core(sys, k, i, guard);
    return std::move(run.levels[i]);
}

std::vector<std::vector<ZRational>> iterate_naive_seq(const TriangularSystem& sys, int64_t k,
                                                      size_t guard,
                                                      std::vector<std::vector<int64_t>>* step_ns) {
    if (k < 0) throw std::invalid_argument("negative iterate count");
    const int n = sys.n;
    std::vector<std::vector<ZRational>> out;
    out.reserve(k + 1);
    out.push_back(identity_components(n));
    if (step_ns) step_ns->clear();
    auto comps = sys.components();
    for (int64_t j = 1; j <= k; ++j) {
        std::vector<ZRational> cur;
        cur.reserve(n);
        std::vector<int64_t> times;
        times.reserve(n);
        for (int i = 0; i < n; ++i) {
            int64_t t0 = now_ns();
            auto comp = compose_many<ZZRing>({&comps[i].num, &comps[i].den}, out[j - 1], guard);
            cur.emplace_back(std::move(comp.nums[0]), std::move(comp.nums[1]));
            times.push_back(now_ns() - t0);
        }
        out.push_back(std::move(cur));
        if (step_ns) step_ns->push_back(std::move(times));
    }
    return out;
}

std::vector<ZRational> iterate_naive(const TriangularSystem& sys, int64_t k, size_t guard) {
    return iterate_naive_seq(sys, k, guard).back();
}

namespace {

ZPoly divide_scalar(const ZPoly& p, const mpz_class& g) {
    return map_poly(p, kZZ, [&](const mpz_class& c) { return mpz_class(c / g); });
}

} // namespace

ZRational peel_atoms(const ZRational& f, const std::vector<const ZPoly*>& atoms) {
    ZPoly num = f.num, den = f.den;
    auto profile_fits = [](const ZPoly& a, const ZPoly& p) {
        if (p.is_zero()) return false;
        auto pa = a.degree_profile();
        auto pp = p.degree_profile();
        for (size_t j = 0; j < pa.size(); ++j)
            if (pa[j] > pp[j]) return false;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const ZPoly* a : atoms) {
            if (a == nullptr || a->is_zero() || a->is_constant()) continue;
            while (profile_fits(*a, num) && profile_fits(*a, den)) {
                auto qn = exact_divide(num, *a);
                if (!qn) break;
                auto qd = exact_divide(den, *a);
                if (!qd) break;
                num = std::move(*qn);
                den = std::move(*qd);
                changed = true;
            }
        }
    }
    mpz_class g;
    mpz_class cn = content(num), cd = content(den);
    mpz_gcd(g.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (g > 1) {
        num = divide_scalar(num, g);
        den = divide_scalar(den, g);
    }
    if (den.lead().second < 0) {
        num = -num;
        den = -den;
    }
    return ZRational(std::move(num), std::move(den));
}

bool certify_coprime(const ZRational& f, uint64_t seed, int attempts) {
    const ZPoly& num = f.num;
    const ZPoly& den = f.den;
    if (den.is_constant()) return true;
    if (num.is_zero()) return false; // positive-degree denominator divides zero
    if (num.is_constant()) return true;

    static constexpr uint64_t kP = 2305843009213693951ULL; // 2^61 - 1
    const PrimeFieldCtx F(kP);
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const int nv = num.nvars();
    const int64_t dn = num.total_degree(), dd = den.total_degree();

    // Restriction to the affine line X_m = a_m t + b_m. A common factor of
    // positive degree survives as a positive-degree common divisor of the two
    // univariate images whenever both top-degree forms stay nonzero, so a
    // constant gcd together with preserved degrees proves coprimality. The
    // line must not pass through a fixed point shared by both polynomials,
    // hence the random offset b.
    auto pn = num.degree_profile();
    auto pd = den.degree_profile();
    std::vector<int64_t> emax(nv);
    for (int m = 0; m < nv; ++m) emax[m] = std::max(pn[m], pd[m]);

    auto restrict_line =
        [&](const ZPoly& p,
            const std::vector<std::vector<up::UPoly<PrimeFieldCtx>>>& tab,
            int64_t dtot) {
            up::UPoly<PrimeFieldCtx> co(dtot + 1, F.zero());
            for (const auto& [e, c] : p.terms()) {
                up::UPoly<PrimeFieldCtx> t{F.from_mpz(c)};
                for (int m = 0; m < nv; ++m)
                    if (e[m] > 0) t = up::mul(F, t, tab[m][e[m]]);
                for (size_t i = 0; i < t.size(); ++i) co[i] = F.add(co[i], t[i]);
            }
            up::trim(F, co);
            return co;
        };

    for (int at = 0; at < attempts; ++at) {
        std::vector<std::vector<up::UPoly<PrimeFieldCtx>>> tab(nv);
        for (int m = 0; m < nv; ++m) {
            uint64_t am = 1 + rng() % (kP - 1), bm = rng() % kP;
            tab[m].resize(emax[m] + 1);
            tab[m][0] = {F.one()};
            if (emax[m] > 0) tab[m][1] = {bm, am};
            for (int64_t j = 2; j <= emax[m]; ++j)
                tab[m][j] = up::mul(F, tab[m][j - 1], tab[m][1]);
        }
        auto un = restrict_line(num, tab, dn);
        auto ud = restrict_line(den, tab, dd);
        if (up::deg(un) != dn || up::deg(ud) != dd) continue;
        auto g = up::gcd(F, un, ud);
        if (up::deg(g) == 0) return true;
    }
    return false;
}

CanonicalResult canonical_form(const ZRational& f, const std::vector<const ZPoly*>& atoms,
                               uint64_t seed, bool allow_full_gcd) {
    if (f.num.is_zero())
        return CanonicalResult{ZRational(ZPoly(kZZ, f.nvars()), zconst(f.nvars(), 1)), true};
    ZRational g = peel_atoms(f, atoms);
    if (certify_coprime(g, seed)) return CanonicalResult{std::move(g), true};
    if (allow_full_gcd) return CanonicalResult{normalize_rational(g), true};
    return CanonicalResult{std::move(g), false};
}

int64_t measured_degree(const ZRational& f, const std::vector<const ZPoly*>& atoms,
                        uint64_t seed) {
    auto c = canonical_form(f, atoms, seed, true);
    int64_t d = c.f.den.total_degree();
    if (!c.f.num.is_zero()) d = std::max(d, c.f.num.total_degree());
    return d;
}

bool equivalent_rational(const ZRational& a, const ZRational& b,
                         const std::vector<const ZPoly*>& atoms, uint64_t seed) {
    check_compat(a, b);
    if (a.num == b.num && a.den == b.den) return true;
    if (a.num.is_zero() || b.num.is_zero()) return a.num.is_zero() && b.num.is_zero();
    if (auto q1 = exact_divide(a.num, b.num)) {
        auto q2 = exact_divide(a.den, b.den);
        if (q2 && *q1 == *q2) return true;
    }
    if (auto q1 = exact_divide(b.num, a.num)) {
        auto q2 = exact_divide(b.den, a.den);
        if (q2 && *q1 == *q2) return true;
    }
    auto ca = canonical_form(a, atoms, seed, true);
    auto cb = canonical_form(b, atoms, seed ^ 0x5b1ce11eULL, true);
    return ca.f.num == cb.f.num && ca.f.den == cb.f.den;
}

GrowthReport growth_report(const TriangularSystem& sys, int64_t k_max, size_t guard,
                           bool measure_naive) {
    if (k_max < 1) throw std::invalid_argument("growth_report: k_max >= 1");
    validate_or_throw(sys);
    const int n = sys.n;
    GrowthReport rep;
    rep.n = n;
    rep.k_max = k_max;

    auto met = system_metrics(sys);
    auto run = iterate_structured(sys, k_max, guard);
    std::vector<std::vector<int64_t>> naive_ns;
    if (measure_naive) iterate_naive_seq(sys, k_max, guard, &naive_ns);

    // Shared pool of denominator building blocks across all levels. A level's
    // uncancelled common factors are products of blocks from the levels below
    // it (composition pushes lower denominators into both parts), so trial
    // division against the whole pool reaches the canonical form without
    // falling back to a multivariate gcd. Entries are content-stripped and
    // sign-normalized so integer content never masks divisibility.
    std::vector<ZPoly> pool;
    auto add_atom = [&](ZPoly a) {
        if (a.is_zero() || a.is_constant()) return;
        mpz_class c = content(a);
        if (c > 1) a = divide_scalar(a, c);
        if (a.lead().second < 0) a = -a;
        for (const auto& b : pool)
            if (b == a) return;
        pool.push_back(std::move(a));
    };
    for (int m = 1; m <= n; ++m) {
        const auto& Lm = run.levels[m];
        for (const auto& c : Lm.cd) add_atom(c);
        if (m < n && Lm.e == -1) {
            ZPoly xm = zvar(n, m - 1);
            for (size_t j = 0; j + 1 < Lm.A.size(); ++j)
                add_atom(mul(xm, Lm.A[j], guard) + Lm.B[j]);
        }
        for (const auto& f : Lm.F) add_atom(f.den);
    }
    for (int m = 0; m < n; ++m) add_atom(zvar(n, m));
    std::sort(pool.begin(), pool.end(), [](const ZPoly& x, const ZPoly& y) {
        return x.total_degree() > y.total_degree();
    });
    std::vector<const ZPoly*> atoms;
    atoms.reserve(pool.size());
    for (const auto& a : pool) atoms.push_back(&a);

    const double log2c = std::log(2.0);
    const double lognp1 = std::log(static_cast<double>(n + 1));

    for (int i = 1; i <= n; ++i) {
        auto pld = predicted_level_degrees(sys, i, k_max);
        const auto& L = run.levels[i];

        int64_t cum_struct = 0, cum_naive = 0;
        double sum_log_parts = 0.0;
        for (int64_t k = 1; k <= k_max; ++k) {
            cum_struct += L.step_ns[k - 1];
            if (measure_naive) cum_naive += naive_ns[k - 1][i - 1];

            GrowthRow row;
            row.i = i;
            row.k = k;
            const ZRational& Fk = L.F[k];
            row.deg_predicted = pld.degF[k];
            row.deg_measured =
                measured_degree(Fk, atoms, 0x1db7u + static_cast<uint64_t>(i) * 131 + k);
            mpz_class MF = clamp1(coeff_max(Fk));
            row.h_measured = log_mpz(MF);
            row.ok_deg = row.deg_measured == row.deg_predicted;
            row.t_struct_ns = cum_struct;
            row.t_naive_ns = cum_naive;

            if (i < n) {
                // G_i^{(k)} as a function (canonical form): the raw pair carries
                // uncancelled denominator content, e.g. a constant G_i composes
                // to cd_k/cd_k
                auto gk_canon = canonical_form(ZRational(L.gn[k - 1], L.cd[k - 1]), atoms,
                                               0x5eedu + static_cast<uint64_t>(i) * 97 + k);
                mpz_class MGk = clamp1(coeff_max(gk_canon.f));
                mpz_class part = L.e == 1
                                     ? clamp1(std::max(max_abs_coeff(L.gn[k - 1]),
                                                       max_abs_coeff(L.cd[k - 1])))
                                     : clamp1(std::max(max_abs_coeff(L.hn[k - 1]),
                                                       max_abs_coeff(L.cd[k - 1])));
                sum_log_parts += log_mpz(part);

                bool ok5 = true;
                int64_t sum_degG = 0;
                bool degG_defined = true;
                for (int64_t j = 1; j < k; ++j) {
                    if (pld.degG[j - 1] == kNegInfDegree) { degG_defined = false; break; }
                    sum_degG += pld.degG[j - 1];
                }
                if (degG_defined) {
                    mpz_class np1d;
                    mpz_pow_ui(np1d.get_mpz_t(), mpz_class(n + 1).get_mpz_t(),
                               static_cast<unsigned long>(met.d));
                    mpz_class amp = mpz_class(n - i) * np1d;
                    auto c5 = check_5t(MGk, met.h_exact, amp, sum_degG);
                    ok5 = c5.holds;
                    row.bound_5t = static_cast<double>(sum_degG) * log_mpz(amp) +
                                   static_cast<double>(sum_degG + 1) * log_mpz(met.h_exact);
                }

                std::vector<mpz_class> parts_k;
                parts_k.reserve(k);
                for (int64_t j = 1; j <= k; ++j) {
                    const ZPoly& top = L.e == 1 ? L.gn[j - 1] : L.hn[j - 1];
                    parts_k.push_back(
                        clamp1(std::max(max_abs_coeff(top), max_abs_coeff(L.cd[j - 1]))));
                }
                auto c36 = check_l36(MF, n, k, pld.degF[k], parts_k, L.e == -1);
                row.bound_l36 = (L.e == -1 ? (k + 1) * log2c : log2c) +
                                static_cast<double>((k + 1) * pld.degF[k]) * lognp1 +
                                sum_log_parts;
                row.ok_h = ok5 && c36.holds;
            } else {
                auto cl = check_last_level(MF, sys.last.g, sys.last.h, k, n);
                mpz_class hg = abs(sys.last.g), hh = abs(sys.last.h);
                mpz_class H = clamp1(hg > hh ? hg : hh);
                row.bound_l36 = static_cast<double>(k) * log_mpz(H) +
                                std::log(static_cast<double>(n + 1) * static_cast<double>(k + 1));
                row.ok_h = cl.holds;
            }
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

} // namespace tridyn
