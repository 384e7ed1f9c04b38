#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "two_user.hpp"

// Two-user doubly dirty MAC with unit gains: y = x1 + x2 + s1 + s2 + z where
// s_k is an interference sequence of variance Q_k known only to user k.
// Lattice scheme: user k transmits a dithered lattice point of its message
// scaled by beta_k minus gamma_k times its interference.

namespace cfmac {

struct DirtyConfig {
    std::array<double, 2> P;  // transmit powers, positive
    std::array<double, 2> Q;  // interference variances, nonnegative

    DirtyConfig(std::array<double, 2> powers, std::array<double, 2> interference)
        : P(powers), Q(interference) {
        for (double p : P)
            if (!std::isfinite(p) || p <= 0.0)
                throw domain_error("DirtyConfig: powers must be positive and finite");
        for (double q : Q)
            if (!std::isfinite(q) || q < 0.0)
                throw domain_error("DirtyConfig: interference variances must be nonnegative");
    }
};

struct DirtyParams {
    std::array<double, 2> gamma;
    std::array<double, 2> beta;

    DirtyParams(std::array<double, 2> g, std::array<double, 2> b) : gamma(g), beta(b) {
        for (double v : gamma)
            if (!std::isfinite(v))
                throw domain_error("DirtyParams: gamma must be finite");
        for (double v : beta)
            if (!std::isfinite(v) || v == 0.0)
                throw domain_error("DirtyParams: beta must be nonzero and finite");
    }
};

// a2*b1 - a1*b2 for integer pairs.
inline int pair_det(const std::array<int, 2>& a, const std::array<int, 2>& b) {
    return a[1] * b[0] - a[0] * b[1];
}

// Noise power after scaling the receive signal by alpha1 and decoding the
// first sum: alpha1^2 + sum_k [(alpha1 - a_k beta_k)^2 P_k +
// (alpha1 - a_k gamma_k)^2 Q_k].
inline double first_sum_noise(const DirtyConfig& cfg, const std::array<int, 2>& a,
                              const DirtyParams& p, double alpha1) {
    double n = alpha1 * alpha1;
    for (int k = 0; k < 2; ++k) {
        const double dp = alpha1 - a[k] * p.beta[k];
        const double dq = alpha1 - a[k] * p.gamma[k];
        n += dp * dp * cfg.P[k] + dq * dq * cfg.Q[k];
    }
    return n;
}

struct FirstSumMin {
    double value;
    double alpha1;
};

// Scalar least squares in alpha1.
inline FirstSumMin minimize_first_sum_noise(const DirtyConfig& cfg, const std::array<int, 2>& a,
                                            const DirtyParams& p) {
    double c2 = 1.0, c1 = 0.0, c0 = 0.0;
    for (int k = 0; k < 2; ++k) {
        c2 += cfg.P[k] + cfg.Q[k];
        c1 += a[k] * (p.beta[k] * cfg.P[k] + p.gamma[k] * cfg.Q[k]);
        c0 += a[k] * a[k] * (p.beta[k] * p.beta[k] * cfg.P[k] + p.gamma[k] * p.gamma[k] * cfg.Q[k]);
    }
    const double alpha1 = c1 / c2;
    return {c0 - c1 * c1 / c2, alpha1};
}

// Noise power of the second sum after removing lambda times the first:
// alpha2^2 + sum_k [(alpha2 - lambda a_k gamma_k - b_k gamma_k)^2 Q_k +
// (alpha2 - lambda a_k beta_k - b_k beta_k)^2 P_k].
inline double second_sum_noise(const DirtyConfig& cfg, const std::array<int, 2>& a,
                               const std::array<int, 2>& b, const DirtyParams& p,
                               double alpha2, double lambda) {
    double n = alpha2 * alpha2;
    for (int k = 0; k < 2; ++k) {
        const double dq = alpha2 - lambda * a[k] * p.gamma[k] - b[k] * p.gamma[k];
        const double dp = alpha2 - lambda * a[k] * p.beta[k] - b[k] * p.beta[k];
        n += dq * dq * cfg.Q[k] + dp * dp * cfg.P[k];
    }
    return n;
}

struct SecondSumMin {
    double value;
    double alpha2;
    double lambda;
    bool degenerate_fallback;  // 2x2 system was singular, lambda pinned to 0
};

// Joint least squares over (alpha2, lambda). Each summand is
// w (alpha2 - m lambda - c)^2; the plain alpha2^2 term enters with m = c = 0,
// so the normal equations are singular only for degenerate coefficient
// patterns that the argument checks already exclude.
inline SecondSumMin minimize_second_sum_noise(const DirtyConfig& cfg, const std::array<int, 2>& a,
                                              const std::array<int, 2>& b, const DirtyParams& p) {
    double sw = 1.0, swm = 0.0, swm2 = 0.0, swc = 0.0, swmc = 0.0;
    auto add = [&](double w, double m, double c) {
        sw += w;
        swm += w * m;
        swm2 += w * m * m;
        swc += w * c;
        swmc += w * m * c;
    };
    for (int k = 0; k < 2; ++k) {
        add(cfg.Q[k], a[k] * p.gamma[k], b[k] * p.gamma[k]);
        add(cfg.P[k], a[k] * p.beta[k], b[k] * p.beta[k]);
    }
    const double det = swm * swm - sw * swm2;
    SecondSumMin out{0.0, 0.0, 0.0, false};
    if (std::fabs(det) <= 1e-14 * (std::fabs(sw * swm2) + swm * swm)) {
        out.degenerate_fallback = true;
        out.lambda = 0.0;
        out.alpha2 = swc / sw;
    } else {
        // [sw, -swm; swm, -swm2] [alpha2; lambda] = [swc; swmc]
        out.alpha2 = (-swm2 * swc + swm * swmc) / det;
        out.lambda = (sw * swmc - swm * swc) / det;
    }
    out.value = second_sum_noise(cfg, a, b, p, out.alpha2, out.lambda);
    return out;
}

// Unclamped/clamped rate pairs 1/2 log2(beta_k^2 P_k / N*) for each sum.
inline std::array<PrePost, 2> rates_first_sum_dirty(const DirtyConfig& cfg,
                                                    const std::array<int, 2>& a,
                                                    const DirtyParams& p) {
    const double n = minimize_first_sum_noise(cfg, a, p).value;
    std::array<PrePost, 2> r;
    for (int k = 0; k < 2; ++k) {
        const double pre = half_log2(p.beta[k] * p.beta[k] * cfg.P[k] / n);
        r[k] = {pre, pre > 0.0 ? pre : 0.0};
    }
    return r;
}

inline std::array<PrePost, 2> rates_second_sum_dirty(const DirtyConfig& cfg,
                                                     const std::array<int, 2>& a,
                                                     const std::array<int, 2>& b,
                                                     const DirtyParams& p) {
    const double n = minimize_second_sum_noise(cfg, a, b, p).value;
    std::array<PrePost, 2> r;
    for (int k = 0; k < 2; ++k) {
        const double pre = half_log2(p.beta[k] * p.beta[k] * cfg.P[k] / n);
        r[k] = {pre, pre > 0.0 ? pre : 0.0};
    }
    return r;
}

// Combines both decoded sums into message rates. Constrained users need a
// strictly positive unclamped rate; a violation reports infeasible.
inline TwoSumRates message_rates_dirty(const DirtyConfig& cfg, const TwoSumChoice& choice,
                                       const DirtyParams& p) {
    TwoSumRates out;
    out.first = rates_first_sum_dirty(cfg, choice.a, p);
    out.second = rates_second_sum_dirty(cfg, choice.a, choice.b, p);
    out.tuple.rates.resize(2);
    out.tuple.binding.resize(2);
    for (int k = 0; k < 2; ++k) {
        const bool in_a = choice.a[k] != 0;
        const bool in_b = choice.b[k] != 0;
        if (in_a && !(out.first[k].pre > 0.0)) {
            out.reason = "user " + std::to_string(k + 1) + " first-sum rate not positive";
            return out;
        }
        if (in_b && !(out.second[k].pre > 0.0)) {
            out.reason = "user " + std::to_string(k + 1) + " second-sum rate not positive";
            return out;
        }
        if (!in_a) {
            out.tuple.rates[k] = out.second[k].pre;
            out.tuple.binding[k] = "b|a";
        } else if (!in_b) {
            out.tuple.rates[k] = out.first[k].pre;
            out.tuple.binding[k] = "a";
        } else {
            const double ra = out.first[k].pre, rb = out.second[k].pre;
            out.tuple.rates[k] = std::min(ra, rb);
            out.tuple.binding[k] = std::fabs(ra - rb) <= kRootTol ? "tie" : (ra < rb ? "a" : "b|a");
        }
    }
    out.feasible = true;
    return out;
}

// Scalarizations for the gamma search. A zero weight deactivates that user:
// it sends nothing, so its positivity requirement is waived and its rate is 0.
struct GammaObjective {
    enum class Kind { MinRate, WeightedSum };
    Kind kind = Kind::MinRate;
    std::array<double, 2> w{1.0, 1.0};
};

struct GammaOpt {
    std::array<double, 2> gamma{0.0, 0.0};
    bool feasible = false;
    std::array<double, 2> rates{0.0, 0.0};
    double value = 0.0;
    std::uint64_t evals = 0;
};

namespace detail {
struct GammaEval {
    bool feasible;
    std::array<double, 2> rates;
    double value;
};

inline GammaEval evaluate_gamma(const DirtyConfig& cfg, const TwoSumChoice& choice,
                                const std::array<double, 2>& beta,
                                const std::array<double, 2>& gamma,
                                const GammaObjective& obj) {
    constexpr double kInfeasible = -1e100;
    for (double g : gamma)
        if (!std::isfinite(g)) return {false, {0.0, 0.0}, kInfeasible};
    const DirtyParams p(gamma, beta);
    const std::array<PrePost, 2> ra = rates_first_sum_dirty(cfg, choice.a, p);
    const std::array<PrePost, 2> rb = rates_second_sum_dirty(cfg, choice.a, choice.b, p);
    std::array<double, 2> rates{0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        const bool active = obj.kind == GammaObjective::Kind::MinRate || obj.w[k] > 0.0;
        if (!active) continue;
        const bool in_a = choice.a[k] != 0;
        const bool in_b = choice.b[k] != 0;
        if (in_a && !(ra[k].pre > 0.0)) return {false, {0.0, 0.0}, kInfeasible};
        if (in_b && !(rb[k].pre > 0.0)) return {false, {0.0, 0.0}, kInfeasible};
        if (!in_a) rates[k] = rb[k].pre;
        else if (!in_b) rates[k] = ra[k].pre;
        else rates[k] = std::min(ra[k].pre, rb[k].pre);
    }
    double value;
    if (obj.kind == GammaObjective::Kind::MinRate)
        value = std::min(rates[0], rates[1]);
    else
        value = obj.w[0] * rates[0] + obj.w[1] * rates[1];
    return {true, rates, value};
}
} // namespace cfmac::detail

// Deterministic search for the interference scalings: a 41x41 grid over
// [-2A, 2A]^2 with A = max(|alpha1* at gamma=beta|, 0.1), refined by
// Nelder-Mead from the best cell until the budget runs out.
inline GammaOpt optimize_gamma(const DirtyConfig& cfg, const TwoSumChoice& choice,
                               const std::array<double, 2>& beta,
                               const GammaObjective& obj = {},
                               std::uint64_t budget = 2500) {
    if (budget == 0)
        throw domain_error("optimize_gamma: budget must be positive");
    double center = 0.0;
    for (int k = 0; k < 2; ++k) center += choice.a[k] * beta[k] * cfg.P[k];
    center /= 1.0 + cfg.P[0] + cfg.P[1];
    const double A = std::max(std::fabs(center), 0.1);

    GammaOpt best;
    best.value = -1e100;
    std::uint64_t evals = 0;
    auto probe = [&](const std::array<double, 2>& g) {
        const detail::GammaEval e = detail::evaluate_gamma(cfg, choice, beta, g, obj);
        ++evals;
        if (e.value > best.value) {
            best.value = e.value;
            best.gamma = g;
            best.feasible = e.feasible;
            best.rates = e.rates;
        }
        return e.value;
    };

    int grid_n = 41;
    if (budget < 41ull * 41ull)
        grid_n = std::max(3, static_cast<int>(std::sqrt(static_cast<double>(budget))));
    const double step = 4.0 * A / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
            probe({-2.0 * A + i * step, -2.0 * A + j * step});

    // Nelder-Mead seeded at the grid optimum, one grid cell as initial step.
    std::array<std::array<double, 2>, 3> simplex{
        best.gamma,
        {best.gamma[0] + step, best.gamma[1]},
        {best.gamma[0], best.gamma[1] + step}};
    std::array<double, 3> fv{-1e300, -1e300, -1e300};
    for (int i = 0; i < 3 && evals < budget; ++i) fv[i] = probe(simplex[i]);

    while (evals + 2 <= budget) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int x, int y) { return fv[x] > fv[y]; });
        const auto& xb = simplex[ord[0]];
        const auto& xs = simplex[ord[1]];
        auto& xw = simplex[ord[2]];
        const double diam = std::max(
            std::max(std::fabs(xb[0] - xw[0]), std::fabs(xb[1] - xw[1])),
            std::max(std::fabs(xs[0] - xw[0]), std::fabs(xs[1] - xw[1])));
        if (diam < 1e-10) break;
        const std::array<double, 2> cen{(xb[0] + xs[0]) / 2.0, (xb[1] + xs[1]) / 2.0};
        const std::array<double, 2> refl{2.0 * cen[0] - xw[0], 2.0 * cen[1] - xw[1]};
        const double fr = probe(refl);
        if (fr > fv[ord[0]]) {
            const std::array<double, 2> expanded{3.0 * cen[0] - 2.0 * xw[0], 3.0 * cen[1] - 2.0 * xw[1]};
            const double fe = probe(expanded);
            if (fe > fr) {
                xw = expanded;
                fv[ord[2]] = fe;
            } else {
                xw = refl;
                fv[ord[2]] = fr;
            }
        } else if (fr > fv[ord[1]]) {
            xw = refl;
            fv[ord[2]] = fr;
        } else {
            const std::array<double, 2> con{0.5 * (cen[0] + xw[0]), 0.5 * (cen[1] + xw[1])};
            const double fc = probe(con);
            if (fc > fv[ord[2]]) {
                xw = con;
                fv[ord[2]] = fc;
            } else {
                for (int i : {ord[1], ord[2]}) {
                    simplex[i] = {0.5 * (simplex[i][0] + xb[0]), 0.5 * (simplex[i][1] + xb[1])};
                    if (evals < budget) fv[i] = probe(simplex[i]);
                }
            }
        }
    }
    best.evals = evals;
    return best;
}

// Rate of the second user when a single sum with a1 beta1 = a2 beta2 r is
// decoded and the first message is known; r = beta1/beta2.
inline double single_sum_scaled_rate(double P1, double P2, double r) {
    if (!(P1 > 0.0) || !(P2 > 0.0) || !(r > 0.0))
        throw domain_error("single_sum_scaled_rate: arguments must be positive");
    return half_log2(P2 * (1.0 + P1 + P2) /
                     (r * r * P1 + P2 + P1 * P2 * (r - 1.0) * (r - 1.0)));
}

// Best single-sum rate of the second user in the strong-interference limit,
// maximized over admissible scalings. Three regimes, continuous at both
// boundaries; the first user is silent.
inline double single_sum_rate(double P1, double P2) {
    if (!(P1 > 0.0) || !(P2 > 0.0) || !std::isfinite(P1) || !std::isfinite(P2))
        throw domain_error("single_sum_rate: powers must be positive and finite");
    if (P1 >= (P2 + 1.0) * (P2 + 1.0) / P2)
        return 0.5 * std::log2(1.0 + P2);
    if (P2 >= (P1 + 1.0) * (P1 + 1.0) / P1)
        return 0.5 * std::log2(1.0 + P1);
    const double s = std::sqrt(P1) - std::sqrt(P2);
    return log_plus((P1 + P2 + 1.0) / (2.0 + s * s));
}

// Segment between the two one-user-silent extremes. Row orientation: first
// endpoint gives all rate to user 1.
inline RegionCurve time_shared_single_sum_region(double P1, double P2, std::size_t n = 65) {
    if (n < 2)
        throw domain_error("time_shared_single_sum_region: need at least two samples");
    const double r1 = single_sum_rate(P2, P1);
    const double r2 = single_sum_rate(P1, P2);
    RegionCurve rc;
    rc.label = "time-shared single-sum exchange";
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        rc.points.push_back({(1.0 - t) * r1, t * r2});
    }
    return rc;
}

enum class HighInterference { Feasible, Infeasible, OutOfScope };

// Alignment system for interference variances growing without bound: both
// sums must cancel s1 and s2 simultaneously. Rows constrain
// (gamma1, gamma2, t, u) where t, u are the per-sum interference scalings.
inline Matrix high_interference_system(const std::array<int, 2>& a, const std::array<int, 2>& b,
                                       double lambda) {
    Matrix m(4, 4);
    m(0, 0) = 1; m(0, 2) = -static_cast<double>(a[0]);
    m(1, 1) = 1; m(1, 2) = -(lambda * a[0] + b[0]);
    m(2, 0) = 1; m(2, 3) = -static_cast<double>(a[1]);
    m(3, 1) = 1; m(3, 3) = -(lambda * a[1] + b[1]);
    return m;
}

// A nontrivial solution exists, for any lambda, exactly when a2 b1 = a1 b2;
// that contradicts sum independence, so independent pairs always lose rate
// as the interference grows. Pairs with a zero first-sum entry fall outside
// the alignment argument.
inline HighInterference high_interference_feasible(const std::array<int, 2>& a,
                                                   const std::array<int, 2>& b) {
    if (a[0] == 0 || a[1] == 0) return HighInterference::OutOfScope;
    return pair_det(a, b) == 0 ? HighInterference::Feasible : HighInterference::Infeasible;
}

struct SymmetricComparisonPoint {
    double alpha;        // interference-to-power ratio Q/P
    double single_sum;   // symmetric rate of the time-shared single-sum scheme
    double two_sum;      // best equal rate of the two-sum scheme
    double upper_bound;  // clean-MAC symmetric ceiling
};

// Symmetric-rate comparison at P1 = P2 = P and Q1 = Q2 = alpha P. The
// two-sum value maximizes the min rate over the companion sum, a geometric
// scaling grid, and the gamma search.
inline std::vector<SymmetricComparisonPoint> dirty_symmetric_sweep(double P,
                                                                   const std::vector<double>& alphas,
                                                                   std::uint64_t budget = 2500) {
    if (!(P > 0.0) || !std::isfinite(P))
        throw domain_error("dirty_symmetric_sweep: P must be positive and finite");
    std::vector<SymmetricComparisonPoint> out;
    out.reserve(alphas.size());
    const double shared = 0.5 * single_sum_rate(P, P);
    const double ceiling = 0.25 * std::log2(1.0 + 2.0 * P);
    for (double alpha : alphas) {
        if (alpha < 0.0)
            throw domain_error("dirty_symmetric_sweep: alpha must be nonnegative");
        const DirtyConfig cfg({P, P}, {alpha * P, alpha * P});
        double best = 0.0;
        for (const std::array<int, 2>& b : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 1}}) {
            const TwoSumChoice choice({1, 1}, b);
            for (int i = 0; i <= 12; ++i) {
                const double beta2 = 0.5 * std::exp2(2.0 * i / 12.0);
                const GammaOpt g = optimize_gamma(cfg, choice, {1.0, beta2}, {}, budget);
                if (g.feasible) best = std::max(best, g.value);
            }
        }
        out.push_back({alpha, shared, best, ceiling});
    }
    return out;
}

struct DirtyRegionPoint {
    double r1, r2;
    std::string source;  // "two-sum" or "time-shared"
};

// Achievable-exchange upper boundary: unions two-sum points over a small
// integer coefficient family, 64 weight directions plus the min-rate
// scalarization, and a geometric beta2 grid, together with the time-shared
// segment; returns the Pareto-maximal points sorted by increasing R1.
inline std::vector<DirtyRegionPoint> dirty_region_sweep_detail(const DirtyConfig& cfg,
                                                               int max_coeff = 5,
                                                               std::uint64_t budget = 2500) {
    if (max_coeff < 1)
        throw domain_error("dirty_region_sweep: max_coeff must be at least 1");
    std::vector<TwoSumChoice> pairs;
    for (int a1 = 1; a1 <= max_coeff; ++a1)
        pairs.push_back(TwoSumChoice({a1, 1}, {1, 0}));
    for (int a2 = 2; a2 <= max_coeff; ++a2)
        pairs.push_back(TwoSumChoice({1, a2}, {1, 0}));

    std::vector<GammaObjective> objectives;
    objectives.push_back({GammaObjective::Kind::MinRate, {1.0, 1.0}});
    for (int i = 0; i < 64; ++i) {
        const double t = (i + 0.5) * (3.14159265358979323846 / 2.0) / 64.0;
        objectives.push_back({GammaObjective::Kind::WeightedSum, {std::cos(t), std::sin(t)}});
    }

    std::vector<DirtyRegionPoint> cloud;
    for (const TwoSumChoice& choice : pairs) {
        for (const GammaObjective& obj : objectives) {
            for (int i = 0; i <= 32; ++i) {
                const double beta2 = 0.25 * std::exp2(4.0 * i / 32.0);
                const GammaOpt g = optimize_gamma(cfg, choice, {1.0, beta2}, obj, budget);
                if (g.feasible && g.rates[0] >= 0.0 && g.rates[1] >= 0.0)
                    cloud.push_back({g.rates[0], g.rates[1], "two-sum"});
            }
        }
    }
    const RegionCurve seg = time_shared_single_sum_region(cfg.P[0], cfg.P[1]);
    for (const auto& p : seg.points) cloud.push_back({p[0], p[1], "time-shared"});

    std::sort(cloud.begin(), cloud.end(), [](const DirtyRegionPoint& x, const DirtyRegionPoint& y) {
        if (x.r1 != y.r1) return x.r1 > y.r1;
        return x.r2 > y.r2;
    });
    std::vector<DirtyRegionPoint> frontier;
    double best_r2 = -1.0;
    for (const DirtyRegionPoint& p : cloud) {
        if (p.r2 > best_r2) {
            frontier.push_back(p);
            best_r2 = p.r2;
        }
    }
    std::reverse(frontier.begin(), frontier.end());
    return frontier;
}

inline RegionCurve dirty_region_sweep(const DirtyConfig& cfg, int max_coeff = 5,
                                      std::uint64_t budget = 2500) {
    RegionCurve rc;
    rc.label = "dirty-pair exchange boundary";
    for (const DirtyRegionPoint& p : dirty_region_sweep_detail(cfg, max_coeff, budget))
        rc.points.push_back({p.r1, p.r2});
    return rc;
}

} // namespace cfmac
