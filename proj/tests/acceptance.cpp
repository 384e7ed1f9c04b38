// Acceptance gate. Each criterion prints one [PASS]/[FAIL] line plus
// indented details; the exit status is the number of failed criteria.
// Reference values that the implementation cannot reproduce are reported as
// failures together with the measured numbers, so a discrepancy stays
// visible instead of being absorbed into a looser tolerance.
//
// Usage: acceptance [N]   runs criterion N (1..7); no argument runs all.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "cfmac/channel.hpp"
#include "cfmac/comp_rate.hpp"
#include "cfmac/dirty_mac.hpp"
#include "cfmac/k_user.hpp"
#include "cfmac/two_user.hpp"

namespace {

using namespace cfmac;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[768];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Criterion {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        details.push_back((ok ? "ok: " : "FAIL: ") + what);
        if (!ok) pass = false;
    }
    void note(const std::string& what) { details.push_back(what); }
};

// 1. The strength parameter A(P) = P / sqrt(1 + 2P) of the unit-gain
//    two-user channel crosses 3/4 at P = 1.5 and 1 at P = 1 + sqrt(2);
//    bisection must pin both within 1e-6 in under a second.
Criterion criterion_1() {
    Criterion c;
    const auto t0 = Clock::now();
    auto strength = [](double P) { return strength_parameter(ChannelConfig({1.0, 1.0}, P)); };
    auto bisect = [&](double target) {
        double lo = 0.05, hi = 50.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (strength(mid) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double p_a = bisect(0.75);
    const double p_b = bisect(1.0);
    const double want_b = 1.0 + std::sqrt(2.0);
    c.check(std::fabs(p_a - 1.5) <= 1e-6,
            fmt("first boundary at P = %.9f (expected 1.5)", p_a));
    c.check(std::fabs(p_b - want_b) <= 1e-6,
            fmt("second boundary at P = %.9f (expected %.9f)", p_b, want_b));
    c.check(classify(ChannelConfig({1.0, 1.0}, 1.5 * (1.0 - 1e-3))).label == TwoUserCase::I &&
                classify(ChannelConfig({1.0, 1.0}, 1.5)).label == TwoUserCase::II,
            "classification flips to case II exactly at the first boundary");
    c.check(classify(ChannelConfig({1.0, 1.0}, p_b * (1.0 - 1e-3))).label == TwoUserCase::II &&
                classify(ChannelConfig({1.0, 1.0}, p_b * (1.0 + 1e-3))).label == TwoUserCase::III,
            "classification flips to case III across the second boundary");
    const double dt = seconds_since(t0);
    c.check(dt < 1.0, fmt("runtime %.3f s < 1 s", dt));
    return c;
}

// 2. Equal-rate scalings on the ones channel at P = 15, compared per entry
//    against the tabulated reference values with tolerance 5e-4.
Criterion criterion_2() {
    Criterion c;
    const auto t0 = Clock::now();
    const std::vector<std::vector<double>> refs = {
        {1.1438},
        {1.5853, 1.2582},
        {1.6609, 1.3933, 1.1690},
        {1.6909, 1.4626, 1.2796, 1.1034},
        {1.6947, 1.4958, 1.3361, 1.1980, 1.0445}};
    auto rate_spread = [](std::size_t K, const std::vector<double>& tail) {
        const std::vector<double> d = symmetric_ltilde_diag(K, 15.0, tail);
        double lo = 1e300, hi = -1e300;
        for (double v : d) {
            const double r = -std::log2(v);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return hi - lo;
    };
    for (std::size_t K = 2; K <= 6; ++K) {
        const EqualizeResult r = sym_equalize_betas(K, 15.0);
        c.check(r.found, fmt("K=%zu solver converged", K));
        if (!r.found) continue;
        const std::vector<double>& want = refs[K - 2];
        for (std::size_t i = 0; i < want.size(); ++i) {
            const double got = r.beta_tail[i];
            c.check(std::fabs(got - want[i]) <= 5e-4,
                    fmt("K=%zu beta_%zu computed %.6f vs tabulated %.4f", K, i + 2, got,
                        want[i]));
        }
        if (K == 2) {
            // the per-user rate spread measures which scaling actually
            // equalizes the rates
            c.note(fmt("K=2 rate spread: %.2e at the computed scaling, %.2e at the "
                       "tabulated one",
                       rate_spread(2, r.beta_tail), rate_spread(2, {1.1438})));
        }
    }
    const double dt = seconds_since(t0);
    c.check(dt < 30.0, fmt("runtime %.3f s < 30 s", dt));
    return c;
}

// 3. Power thresholds of the equal-rate scalings, bracketed to 0.01 and
//    compared against the tabulated intervals.
Criterion criterion_3() {
    Criterion c;
    const auto t0 = Clock::now();

    const PStarBracket two = p_star(2, 0.01);
    c.check(two.hi - two.lo <= 0.01 + 1e-12 && two.lo <= 1.5 + 1e-9 && two.hi >= 1.5 - 1e-9,
            fmt("K=2 bracket [%.5f, %.5f] pins 1.5", two.lo, two.hi));

    struct Row {
        std::size_t K;
        double lo, hi;
    };
    for (const Row& row : {Row{3, 2.23, 2.24}, Row{4, 3.74, 3.75}, Row{5, 7.07, 7.08}}) {
        const PStarBracket b = p_star(row.K, 0.01);
        const bool inside = b.lo >= row.lo - 1e-9 && b.hi <= row.hi + 1e-9;
        c.check(inside && b.hi - b.lo <= 0.01 + 1e-12,
                fmt("K=%zu bracket [%.5f, %.5f] inside tabulated [%.2f, %.2f]", row.K, b.lo,
                    b.hi, row.lo, row.hi));
    }
    const double dt = seconds_since(t0);
    c.check(dt < 300.0, fmt("runtime %.3f s < 5 min", dt));
    return c;
}

// 4. Identity suites on 10^4 random instances each, residual bound 1e-9:
//    the two-sum pre-clamp rate sums, the K-user diagonal telescoping, and
//    the corner-containment equivalence with the strength parameter.
Criterion criterion_4() {
    Criterion c;
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> ug(0.3, 2.0), up(0.3, 12.0), ub(0.3, 2.5);
    std::uniform_int_distribution<int> coeff(-3, 3), sgn(0, 1);
    auto signed_draw = [&](std::uniform_real_distribution<double>& d) {
        return (sgn(rng) ? 1.0 : -1.0) * d(rng);
    };

    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            double h1 = signed_draw(ug), h2 = signed_draw(ug);
            const ChannelConfig cfg({h1, h2}, up(rng));
            int a1, a2, b1, b2;
            do {
                a1 = coeff(rng); a2 = coeff(rng); b1 = coeff(rng); b2 = coeff(rng);
            } while ((a1 == 0 && a2 == 0) || (b1 == 0 && b2 == 0) || a2 * b1 - a1 * b2 == 0);
            const TwoSumChoice choice({a1, a2}, {b1, b2});
            const double beta2 = signed_draw(ub);
            const auto first = rates_first_sum(cfg, choice.a, beta2);
            const auto second = rates_second_sum(cfg, choice, beta2);
            const double target =
                sum_capacity(cfg) - std::log2(std::fabs(static_cast<double>(choice.det())));
            const double res =
                std::max(std::fabs(first[0].pre + second[1].pre - target),
                         std::fabs(first[1].pre + second[0].pre - target));
            worst = std::max(worst, res);
            if (!(res < 1e-9)) ++fails;
        }
        c.check(fails == 0,
                fmt("two-sum rate sums: %d violations, max residual %.2e", fails, worst));
    }

    {
        std::uniform_int_distribution<int> small(-2, 2), nk(2, 4);
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const std::size_t K = nk(rng);
            std::vector<double> h(K), beta(K);
            for (auto& v : h) v = signed_draw(ug);
            for (auto& v : beta) v = signed_draw(ub);
            std::vector<int> e(K * K);
            long long det = 0;
            while (det == 0) {
                for (auto& v : e) v = small(rng);
                det = integer_det(K, e);
            }
            const double res = std::fabs(sum_rate_identity_residual(
                ChannelConfig(h, up(rng)), CoefficientMatrix(K, e), ScalingVector(beta)));
            worst = std::max(worst, res);
            if (!(res < 1e-9)) ++fails;
        }
        c.check(fails == 0,
                fmt("diagonal telescoping: %d violations, max residual %.2e", fails, worst));
    }

    {
        std::uniform_real_distribution<double> upw(0.2, 20.0);
        int kept = 0, skipped = 0, mismatches = 0;
        while (kept < 10000) {
            const ChannelConfig cfg({signed_draw(ug), signed_draw(ug)}, upw(rng));
            const double A = strength_parameter(cfg);
            if (std::fabs(A - 1.0) <= 1e-9) {
                ++skipped;
                continue;
            }
            ++kept;
            if (interval_contains_corners(cfg).both_inside != (A >= 1.0)) ++mismatches;
        }
        c.check(mismatches == 0,
                fmt("corner containment <=> A >= 1: %d mismatches in 10000 instances "
                    "(%d boundary draws skipped)",
                    mismatches, skipped));
    }
    return c;
}

// 5. Closed-form optimizers against dense-grid oracles. The grids refine
//    around the closed-form point and demand an interior argmin at every
//    stage; the objectives are convex quadratics, so an interior local
//    minimum certifies the global one.
Criterion criterion_5() {
    Criterion c;
    std::mt19937_64 rng(501);
    std::uniform_real_distribution<double> ug(0.3, 1.5), up(0.5, 8.0), ub(0.5, 1.5);
    std::uniform_int_distribution<int> coeff(-3, 3), nk(1, 4), sgn(0, 1);
    auto signed_draw = [&](std::uniform_real_distribution<double>& d) {
        return (sgn(rng) ? 1.0 : -1.0) * d(rng);
    };

    {
        double worst = 0.0;
        int fails = 0;
        for (int i = 0; i < 1000; ++i) {
            const std::size_t K = nk(rng);
            std::vector<double> h(K), beta(K);
            for (auto& v : h) v = signed_draw(ug);
            for (auto& v : beta) v = signed_draw(ub);
            std::vector<int> av(K);
            bool nonzero = false;
            for (auto& v : av) {
                v = coeff(rng);
                nonzero = nonzero || v != 0;
            }
            if (!nonzero) av[0] = 1;
            const ChannelConfig cfg(h, up(rng));
            const SumCoefficients a(av);
            const ScalingVector bv(beta);
            const RateTuple closed = computation_rate_tuple(cfg, a, bv);
            const RateTuple grid = oracle_rate_grid(cfg, a, bv, default_oracle_grid(cfg, a, bv));
            for (std::size_t k = 0; k < K; ++k) {
                if (av[k] == 0) continue;
                const double d = std::fabs(closed.rates[k] - grid.rates[k]);
                worst = std::max(worst, d);
                if (!(d <= 1e-6)) ++fails;
            }
        }
        c.check(fails == 0,
                fmt("clean scaling oracle: %d violations, max gap %.2e bits", fails, worst));
    }

    {
        std::uniform_real_distribution<double> uq(0.0, 8.0), ugam(-1.5, 1.5);
        double worst1 = 0.0, worst2 = 0.0;
        int fails = 0, redraws = 0, edge_hits = 0;

        // one refinement pass of a centered grid: updates the center to the
        // argmin, reports whether it stayed interior, shrinks the window
        // the center is evaluated first and only a strict improvement moves
        // the argmin, so a direction that is numerically flat stays put
        auto refine2 = [&](const DirtyConfig& cfg, const std::array<int, 2>& a,
                           const std::array<int, 2>& b, const DirtyParams& p, double& ca,
                           double& cl, double w, bool& interior) {
            const int n = 20;
            const double step = w / n;
            double best = second_sum_noise(cfg, a, b, p, ca, cl);
            int bi = 0, bj = 0;
            for (int i = -n; i <= n; ++i)
                for (int j = -n; j <= n; ++j) {
                    if (i == 0 && j == 0) continue;
                    const double v = second_sum_noise(cfg, a, b, p, ca + i * step, cl + j * step);
                    if (v < best) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (std::abs(bi) == n || std::abs(bj) == n) interior = false;
            ca += bi * step;
            cl += bj * step;
            return best;
        };

        for (int i = 0; i < 1000; ++i) {
            DirtyConfig cfg({1.0, 1.0}, {0.0, 0.0});
            DirtyParams p({0.0, 0.0}, {1.0, 1.0});
            std::array<int, 2> a{1, 0}, b{0, 1};
            FirstSumMin m1{0.0, 0.0};
            SecondSumMin m2{0.0, 0.0, 0.0, false};
            for (;;) {
                do {
                    a = {coeff(rng), coeff(rng)};
                    b = {coeff(rng), coeff(rng)};
                } while ((a[0] == 0 && a[1] == 0) || (b[0] == 0 && b[1] == 0) ||
                         a[1] * b[0] - a[0] * b[1] == 0);
                cfg = DirtyConfig({up(rng), up(rng)}, {uq(rng), uq(rng)});
                p = DirtyParams({ugam(rng), ugam(rng)}, {signed_draw(ub), signed_draw(ub)});
                m1 = minimize_first_sum_noise(cfg, a, p);
                m2 = minimize_second_sum_noise(cfg, a, b, p);
                // keep the noise away from zero so the bit metric is stable
                if (m1.value >= 1e-4 && m2.value >= 1e-4 && !m2.degenerate_fallback) break;
                ++redraws;
            }

            // first sum: one-dimensional zoom around the closed form. Three
            // stages stop at step 5e-7, where the quadratic still clears the
            // rounding noise of the objective; finer grids would only race
            // noise against a numerically flat window.
            {
                double center = m1.alpha1, w = 1.0, best = 1e300;
                bool interior = true;
                for (int stage = 0; stage < 3; ++stage) {
                    const int n = 200;
                    const double step = w / n;
                    int bi = 0;
                    best = first_sum_noise(cfg, a, p, center);
                    for (int k = -n; k <= n; ++k) {
                        if (k == 0) continue;
                        const double v = first_sum_noise(cfg, a, p, center + k * step);
                        if (v < best) {
                            best = v;
                            bi = k;
                        }
                    }
                    if (std::abs(bi) == n) interior = false;
                    center += bi * step;
                    w = 2.0 * step;
                }
                if (!interior) ++edge_hits;
                const double gap = 0.5 * std::fabs(std::log2(best / m1.value));
                worst1 = std::max(worst1, gap);
                if (!(gap <= 1e-5)) ++fails;
            }

            // second sum: six two-dimensional zoom stages, window 1 -> 1e-5
            {
                double ca = m2.alpha2, cl = m2.lambda, w = 1.0, best = 1e300;
                bool interior = true;
                for (int stage = 0; stage < 6; ++stage) {
                    best = refine2(cfg, a, b, p, ca, cl, w, interior);
                    w /= 10.0;
                }
                if (!interior) ++edge_hits;
                const double gap = 0.5 * std::fabs(std::log2(best / m2.value));
                worst2 = std::max(worst2, gap);
                if (!(gap <= 1e-5)) ++fails;
            }
        }
        c.check(fails == 0 && edge_hits == 0,
                fmt("dirty noise oracles: %d violations, %d edge hits, max gaps %.2e / %.2e "
                    "bits (%d redraws)",
                    fails, edge_hits, worst1, worst2, redraws));
    }
    return c;
}

// 6. Face sweeps at fixed parameters: corner endpoints, the unreachable
//    case, the skewed coefficient family, and the three-user symmetric point.
Criterion criterion_6() {
    Criterion c;

    // (a) h = (1, sqrt(2)), P = 4: sweep endpoints are the two corners
    {
        const ChannelConfig cfg({1.0, std::sqrt(2.0)}, 4.0);
        const FaceSweep sweep = dominant_face_sweep_detail(cfg, 512);
        c.check(sweep.label.label == TwoUserCase::III,
                fmt("reference channel is case III (A = %.6f)", sweep.label.A_value));
        const double cs = sum_capacity(cfg);
        const double c1 = user_capacity(cfg, 0), c2 = user_capacity(cfg, 1);
        if (!sweep.points.empty()) {
            const auto& front = sweep.points.front().rates;
            const auto& back = sweep.points.back().rates;
            c.check(std::fabs(front[0] - c1) <= 1e-9 && std::fabs(front[1] - (cs - c1)) <= 1e-9,
                    fmt("sweep starts at the first corner (%.9f, %.9f)", front[0], front[1]));
            c.check(std::fabs(back[0] - (cs - c2)) <= 1e-9 && std::fabs(back[1] - c2) <= 1e-9,
                    fmt("sweep ends at the second corner (%.9f, %.9f)", back[0], back[1]));
            double dev = 0.0;
            for (const FacePoint& p : sweep.points)
                dev = std::max(dev, std::fabs(p.rates[0] + p.rates[1] - cs));
            c.check(dev <= 1e-9, fmt("every sweep point sits on the face, max |sum - C| %.2e", dev));
        } else {
            c.check(false, "sweep produced no points");
        }
    }

    // (b) unit gains at P = 1: case I, nothing on the face
    {
        const FaceSweep sweep = dominant_face_sweep_detail(ChannelConfig({1.0, 1.0}, 1.0), 64);
        c.check(sweep.label.label == TwoUserCase::I && sweep.points.empty(),
                fmt("P = 1 is case I with an empty sweep (A = %.6f)", sweep.label.A_value));
    }

    // (c) skewed sums (1,2) and (2,1): nothing at P = 4, face points at
    //     P = 10, and neither choice can reach both corners
    {
        const ChannelConfig at4({1.0, std::sqrt(2.0)}, 4.0);
        const ChannelConfig at10({1.0, std::sqrt(2.0)}, 10.0);
        const double cs = sum_capacity(at10);
        const double c1 = user_capacity(at10, 0), c2 = user_capacity(at10, 1);
        const std::pair<double, double> cb = corner_betas(at10);

        struct Skew {
            std::array<int, 2> a, b;
            int grazed;  // corner index this family can touch
        };
        for (const Skew& s : {Skew{{1, 2}, {0, 1}, 0}, Skew{{2, 1}, {1, 0}, 1}}) {
            const CoefficientFeasibility f4 = coefficient_feasibility(at4, s.a);
            const bool roots4 = beta_roots(at4, s.a).has_value();
            c.check(!roots4 && !f4.face_reachable,
                    fmt("(%d,%d) at P=4: no face contact (A %.4f < threshold %.4f)", s.a[0],
                        s.a[1], f4.A_value, f4.face_threshold));
            c.check(face_scan(at4, s.a, s.b, 257).points.empty(),
                    fmt("(%d,%d) at P=4: scan is empty", s.a[0], s.a[1]));

            const CoefficientFeasibility f10 = coefficient_feasibility(at10, s.a);
            const FaceScan scan = face_scan(at10, s.a, s.b, 257);
            c.check(scan.has_roots && f10.face_reachable && !scan.points.empty(),
                    fmt("(%d,%d) at P=10: %zu face points (A %.4f >= threshold %.4f)", s.a[0],
                        s.a[1], scan.points.size(), f10.A_value, f10.face_threshold));

            int corner_hits = 0;
            double other_best = -1e300;
            for (const FacePoint& p : scan.points) {
                const bool at_first =
                    std::fabs(p.rates[0] - c1) <= 1e-9 && std::fabs(p.rates[1] - (cs - c1)) <= 1e-9;
                const bool at_second =
                    std::fabs(p.rates[0] - (cs - c2)) <= 1e-9 && std::fabs(p.rates[1] - c2) <= 1e-9;
                if (at_first || at_second) ++corner_hits;
                other_best = std::max(other_best, s.grazed == 0 ? p.rates[1] : p.rates[0]);
            }
            c.check(corner_hits == 0,
                    fmt("(%d,%d) at P=10: the uniform scan hits no corner", s.a[0], s.a[1]));
            // the doubled coefficient costs that user exactly one bit, so the
            // opposite corner stays a full bit out of reach
            const double cap = (s.grazed == 0 ? c2 : c1) - 1.0;
            c.check(other_best <= cap + 1e-9,
                    fmt("(%d,%d) at P=10: opposite-corner coordinate tops out at %.6f <= %.6f",
                        s.a[0], s.a[1], other_best, cap));

            // one corner is grazed at an isolated scaling
            const double graze_beta = s.grazed == 0 ? cb.first / 2.0 : cb.second * 2.0;
            const TwoSumRates graze =
                message_rates_two_sums(at10, TwoSumChoice(s.a, s.b), graze_beta);
            const double want0 = s.grazed == 0 ? c1 : cs - c2;
            const double want1 = s.grazed == 0 ? cs - c1 : c2;
            c.check(graze.feasible && std::fabs(graze.tuple.rates[0] - want0) <= 1e-9 &&
                        std::fabs(graze.tuple.rates[1] - want1) <= 1e-9,
                    fmt("(%d,%d) grazes corner %d exactly at beta2 = %.6f", s.a[0], s.a[1],
                        s.grazed + 1, graze_beta));
        }
    }

    // (d) three users: the symmetric point is reached at P = 8, not at P = 2
    {
        const double cs8 = symmetric_capacity(3, 8.0);
        const EqualizeResult eq = sym_equalize_betas(3, 8.0);
        c.check(eq.found, "equalizer converges at P = 8");
        if (eq.found) {
            const ChannelConfig cfg(std::vector<double>(3, 1.0), 8.0);
            const CoefficientMatrix A(3, {1, 1, 1, 0, 1, 0, 0, 0, 1});
            const RateTuple t = message_rates_k(
                cfg, A, ScalingVector({1.0, eq.beta_tail[0], eq.beta_tail[1]}));
            double dev = 0.0;
            for (double r : t.rates) dev = std::max(dev, std::fabs(r - cs8));
            c.check(dev <= 1e-8,
                    fmt("equalized rates sit at the symmetric value, max deviation %.2e", dev));

            std::vector<std::array<double, 2>> grid;
            for (int i = 0; i <= 40; ++i)
                for (int j = 0; j <= 40; ++j)
                    grid.push_back({1.0 + 0.02 * i, 1.0 + 0.02 * j});
            // the max-min optimum sits at a kink between grid points, so the
            // equalized pair joins the sweep as one extra sample
            std::vector<std::array<double, 2>> rich_grid = grid;
            rich_grid.push_back({eq.beta_tail[0], eq.beta_tail[1]});
            double best = 0.0;
            for (const auto& pnt : three_user_family_sweep(cfg, rich_grid).points)
                best = std::max(best, std::min({pnt[0], pnt[1], pnt[2]}));
            c.check(best >= cs8 - 1e-8,
                    fmt("family sweep reaches min rate %.9f vs symmetric %.9f", best, cs8));

            const double cs2 = symmetric_capacity(3, 2.0);
            const ChannelConfig poor(std::vector<double>(3, 1.0), 2.0);
            double best2 = 0.0;
            for (const auto& pnt : three_user_family_sweep(poor, grid).points)
                best2 = std::max(best2, std::min({pnt[0], pnt[1], pnt[2]}));
            c.check(!sym_equalize_betas(3, 2.0).found && best2 < cs2 - 1e-3,
                    fmt("P = 2 equalizer fails and the sweep stays at %.6f < %.6f", best2, cs2));
        }
    }
    return c;
}

// 7. Known-interference checks: the exact single-sum value, branch
//    continuity, symmetric-rate dominance of the two-sum scheme at ten
//    interference ratios, and the collapse under overwhelming interference.
Criterion criterion_7() {
    Criterion c;
    const auto t0 = Clock::now();

    c.check(single_sum_rate(10.0, 2.0) == 0.5 * std::log2(3.0),
            fmt("single_sum_rate(10, 2) = %.12f equals (1/2) log2 3 bit for bit",
                single_sum_rate(10.0, 2.0)));

    double worst_jump = 0.0, worst_edge = 0.0;
    for (double p2 : {0.5, 1.0, 2.0, 5.0}) {
        const double edge = (p2 + 1.0) * (p2 + 1.0) / p2;
        const double want = 0.5 * std::log2(1.0 + p2);
        worst_jump = std::max(worst_jump,
                              std::fabs(single_sum_rate(edge * (1.0 + 1e-9), p2) -
                                        single_sum_rate(edge * (1.0 - 1e-9), p2)));
        worst_jump = std::max(worst_jump,
                              std::fabs(single_sum_rate(p2, edge * (1.0 + 1e-9)) -
                                        single_sum_rate(p2, edge * (1.0 - 1e-9))));
        worst_edge = std::max(worst_edge, std::fabs(single_sum_rate(edge, p2) - want));
        worst_edge = std::max(worst_edge, std::fabs(single_sum_rate(p2, edge) - want));
    }
    c.check(worst_jump <= 1e-9 && worst_edge <= 1e-12,
            fmt("branch continuity: max jump %.2e, max edge deviation %.2e", worst_jump,
                worst_edge));

    // symmetric-rate dominance at P = 1 over ten interference ratios
    {
        std::vector<double> alphas;
        for (int i = 0; i <= 9; ++i) alphas.push_back(0.5 * i);
        const auto rows = dirty_symmetric_sweep(1.0, alphas, 2500);
        for (const SymmetricComparisonPoint& r : rows) {
            const double slack = r.two_sum - r.single_sum;
            c.check(slack >= -1e-6,
                    fmt("alpha %.1f: two-sum %.6f vs single-sum %.6f (slack %+.6f)", r.alpha,
                        r.two_sum, r.single_sum, slack));
        }
    }

    // overwhelming interference: the best two-sum operating point collapses
    {
        const DirtyConfig cfg({1.0, 1.0}, {1e8, 1e8});
        GammaOpt best;
        best.value = -1e300;
        for (const std::array<int, 2>& b : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 1}}) {
            for (int i = 0; i <= 12; ++i) {
                const double beta2 = 0.5 * std::exp2(2.0 * i / 12.0);
                const GammaOpt g =
                    optimize_gamma(cfg, TwoSumChoice({1, 1}, b), {1.0, beta2}, {}, 2500);
                if (g.feasible && g.value > best.value) best = g;
            }
        }
        const double r1 = best.feasible ? best.rates[0] : 0.0;
        const double r2 = best.feasible ? best.rates[1] : 0.0;
        c.check(r1 < 1e-3 && r2 < 1e-3,
                fmt("Q = 1e8: best rates (%.2e, %.2e)%s", r1, r2,
                    best.feasible ? "" : " (no feasible scalings found)"));
    }

    const double dt = seconds_since(t0);
    c.check(dt < 120.0, fmt("runtime %.3f s < 2 min", dt));
    return c;
}

const char* kTitles[7] = {
    "case boundaries located by bisection",
    "equal-rate scalings at P = 15 match the tabulated values",
    "equal-rate power thresholds match the tabulated brackets",
    "rate identities hold on random instances",
    "closed-form optimizers agree with dense-grid oracles",
    "face sweeps reach exactly the predicted boundary points",
    "known-interference reference values, dominance and collapse",
};

Criterion run_criterion(int n) {
    switch (n) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        default: return criterion_7();
    }
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 7) {
            std::fprintf(stderr, "usage: %s [criterion 1..7]\n", argv[0]);
            return 64;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= 7; ++n) which.push_back(n);
    }

    int failures = 0;
    for (int n : which) {
        const Criterion c = run_criterion(n);
        std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", n, kTitles[n - 1]);
        for (const std::string& d : c.details) std::printf("  - %s\n", d.c_str());
        if (!c.pass) ++failures;
    }
    return failures;
}
