#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "comp_rate.hpp"
#include "errors.hpp"

// Two-user decode-two-sums machinery. Throughout this header the first user's
// scaling is pinned to 1 and beta2 is the free parameter.

namespace cfmac {

namespace detail {
inline void require_two_users(const ChannelConfig& cfg, const char* who) {
    if (cfg.users() != 2)
        throw domain_error(std::string(who) + ": needs exactly two users");
}

inline void require_nonzero_gains(const ChannelConfig& cfg, const char* who) {
    if (cfg.h[0] == 0.0 || cfg.h[1] == 0.0)
        throw degenerate_channel_error(std::string(who) +
                                       ": zero gain, the two-sum analysis does not apply");
}

inline std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
} // namespace detail

// Integer coefficients of the two decoded sums. Rows must be independent.
struct TwoSumChoice {
    std::array<int, 2> a, b;

    TwoSumChoice(std::array<int, 2> first, std::array<int, 2> second)
        : a(first), b(second) {
        if (a[0] == 0 && a[1] == 0)
            throw domain_error("TwoSumChoice: first sum is zero");
        if (b[0] == 0 && b[1] == 0)
            throw domain_error("TwoSumChoice: second sum is zero");
        if (det() == 0)
            throw domain_error("TwoSumChoice: sums must be linearly independent");
    }

    // a2*b1 - a1*b2; the lattice index of the pair.
    int det() const { return a[1] * b[0] - a[0] * b[1]; }
};

enum class TwoUserCase { I, II, III, Degenerate };

struct CaseLabel {
    TwoUserCase label;
    double A_value;
};

inline const char* to_string(TwoUserCase c) {
    switch (c) {
        case TwoUserCase::I: return "I";
        case TwoUserCase::II: return "II";
        case TwoUserCase::III: return "III";
        default: return "degenerate";
    }
}

// S = sqrt(1 + (h1^2 + h2^2) P); S^2 is the sum-capacity SNR term.
inline double s_value(const ChannelConfig& cfg) {
    detail::require_two_users(cfg, "s_value");
    return std::sqrt(1.0 + cfg.P * cfg.gain_norm_sq());
}

// A = h1 h2 P / S. Sign follows h1 h2.
inline double strength_parameter(const ChannelConfig& cfg) {
    detail::require_two_users(cfg, "strength_parameter");
    return cfg.h[0] * cfg.h[1] * cfg.P / s_value(cfg);
}

// Ties within kRootTol of a threshold resolve toward the higher case.
inline CaseLabel classify(const ChannelConfig& cfg) {
    detail::require_two_users(cfg, "classify");
    const double A = strength_parameter(cfg);
    if (cfg.h[0] * cfg.h[1] == 0.0)
        return {TwoUserCase::Degenerate, A};
    if (A >= 1.0 - kRootTol) return {TwoUserCase::III, A};
    if (A >= 0.75 - kRootTol) return {TwoUserCase::II, A};
    return {TwoUserCase::I, A};
}

// K(a, beta2) = a1^2 + a2^2 beta2^2 + P (a1 h2 - a2 beta2 h1)^2, beta1 = 1.
inline double k_form(const ChannelConfig& cfg, const std::array<int, 2>& a, double beta2) {
    detail::require_two_users(cfg, "k_form");
    const double a1 = a[0], a2 = a[1];
    const double cross = a1 * cfg.h[1] - a2 * beta2 * cfg.h[0];
    return a1 * a1 + a2 * a2 * beta2 * beta2 + cfg.P * cross * cross;
}

struct PrePost {
    double pre;   // unclamped half-log rate
    double post;  // max(pre, 0)
};

namespace detail {
inline PrePost make_prepost(double ratio) {
    const double pre = half_log2(ratio);
    return {pre, pre > 0.0 ? pre : 0.0};
}
} // namespace detail

// r_k of the first decoded sum: 1/2 log2(beta_k^2 S^2 / K).
inline std::array<PrePost, 2> rates_first_sum(const ChannelConfig& cfg,
                                              const std::array<int, 2>& a, double beta2) {
    if (beta2 == 0.0 || !std::isfinite(beta2))
        throw domain_error("rates_first_sum: beta2 must be nonzero and finite");
    const double S2 = 1.0 + cfg.P * cfg.gain_norm_sq();
    const double K = k_form(cfg, a, beta2);
    return {detail::make_prepost(S2 / K),
            detail::make_prepost(beta2 * beta2 * S2 / K)};
}

// r_k of the second sum given the first:
// 1/2 log2(beta_k^2 K / (beta1^2 beta2^2 (a2 b1 - a1 b2)^2)).
inline std::array<PrePost, 2> rates_second_sum(const ChannelConfig& cfg,
                                               const TwoSumChoice& choice, double beta2) {
    if (beta2 == 0.0 || !std::isfinite(beta2))
        throw domain_error("rates_second_sum: beta2 must be nonzero and finite");
    const double K = k_form(cfg, choice.a, beta2);
    const double d = choice.det();
    const double denom = beta2 * beta2 * d * d;
    return {detail::make_prepost(K / denom),
            detail::make_prepost(beta2 * beta2 * K / denom)};
}

// Outcome of combining both sums into per-user message rates. A precondition
// violation (a constrained user with a negative unclamped rate) is reported
// as infeasible, not thrown.
struct TwoSumRates {
    bool feasible = false;
    std::string reason;
    RateTuple tuple;
    std::array<PrePost, 2> first{};
    std::array<PrePost, 2> second{};
};

inline TwoSumRates message_rates_two_sums(const ChannelConfig& cfg, const TwoSumChoice& choice,
                                          double beta2) {
    detail::require_two_users(cfg, "message_rates_two_sums");
    TwoSumRates out;
    out.first = rates_first_sum(cfg, choice.a, beta2);
    out.second = rates_second_sum(cfg, choice, beta2);
    out.tuple.rates.resize(2);
    out.tuple.binding.resize(2);
    for (int k = 0; k < 2; ++k) {
        const bool in_a = choice.a[k] != 0;
        const bool in_b = choice.b[k] != 0;
        if (in_a && out.first[k].pre < 0.0) {
            out.feasible = false;
            out.reason = "user " + std::to_string(k + 1) +
                         " has negative first-sum rate at beta2=" + detail::fmt_g(beta2);
            return out;
        }
        if (in_b && out.second[k].pre < 0.0) {
            out.feasible = false;
            out.reason = "user " + std::to_string(k + 1) +
                         " has negative second-sum rate at beta2=" + detail::fmt_g(beta2);
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
            if (std::fabs(ra - rb) <= kRootTol)
                out.tuple.binding[k] = "tie";
            else
                out.tuple.binding[k] = ra < rb ? "a" : "b|a";
        }
    }
    out.feasible = true;
    return out;
}

// Roots of K(a, beta2) = beta2 * S, the boundary of the face condition.
// Returns nothing when the discriminant is negative. Tiny negative
// discriminants (tangency up to roundoff) are clamped to zero.
inline std::optional<std::pair<double, double>> beta_roots(const ChannelConfig& cfg,
                                                           const std::array<int, 2>& a) {
    detail::require_two_users(cfg, "beta_roots");
    detail::require_nonzero_gains(cfg, "beta_roots");
    if (a[0] == 0 || a[1] == 0)
        throw domain_error("beta_roots: both coefficients must be nonzero");
    const double a1 = a[0], a2 = a[1];
    const double S = s_value(cfg);
    const double D = S * (1.0 - 4.0 * a1 * a1 * a2 * a2) + 4.0 * cfg.P * a1 * a2 * cfg.h[0] * cfg.h[1];
    double disc = S * D;
    if (disc < 0.0) {
        if (disc > -1e-9 * S * S) disc = 0.0;
        else return std::nullopt;
    }
    const double num = 2.0 * a1 * a2 * cfg.h[0] * cfg.h[1] * cfg.P + S;
    const double den = 2.0 * a2 * a2 * (1.0 + cfg.h[0] * cfg.h[0] * cfg.P);
    const double r = std::sqrt(disc);
    double lo = (num - r) / den, hi = (num + r) / den;
    if (lo > hi) std::swap(lo, hi);
    return std::make_pair(lo, hi);
}

// Scalings at which a single choice lands exactly on a capacity corner:
// beta2^(1) pairs with b=(0,1) for the corner favoring user 1, beta2^(2)
// with b=(1,0) for the corner favoring user 2.
inline std::pair<double, double> corner_betas(const ChannelConfig& cfg) {
    detail::require_two_users(cfg, "corner_betas");
    detail::require_nonzero_gains(cfg, "corner_betas");
    const double h1 = cfg.h[0], h2 = cfg.h[1], P = cfg.P;
    return {h1 * h2 * P / (1.0 + h1 * h1 * P), (1.0 + h2 * h2 * P) / (h1 * h2 * P)};
}

struct CornerContainment {
    bool both_inside = false;
    std::string reason;
};

// Both corner scalings lie in [beta2', beta2''] exactly when A >= 1. The
// a=(1,1) roots are used.
inline CornerContainment interval_contains_corners(const ChannelConfig& cfg) {
    detail::require_two_users(cfg, "interval_contains_corners");
    detail::require_nonzero_gains(cfg, "interval_contains_corners");
    const auto roots = beta_roots(cfg, {1, 1});
    if (!roots)
        return {false, "no real roots, the face condition never holds"};
    const auto [b1, b2] = corner_betas(cfg);
    const auto [lo, hi] = *roots;
    if (b1 >= lo - kRootTol && b1 <= hi + kRootTol && b2 >= lo - kRootTol && b2 <= hi + kRootTol)
        return {true, ""};
    return {false, "a corner scaling falls outside the root interval"};
}

// Reachability of the dominant face and of the corner pair for coefficients a,
// phrased through the strength parameter A.
struct CoefficientFeasibility {
    double A_value = 0.0;
    double face_threshold = 0.0;    // (4 a1^2 a2^2 - 1) / (4 a1 a2)
    double corner_threshold = 0.0;  // a1 a2
    bool face_reachable = false;
    bool corners_reachable = false;
};

inline CoefficientFeasibility coefficient_feasibility(const ChannelConfig& cfg,
                                                      const std::array<int, 2>& a) {
    detail::require_two_users(cfg, "coefficient_feasibility");
    detail::require_nonzero_gains(cfg, "coefficient_feasibility");
    if (a[0] == 0 || a[1] == 0)
        throw domain_error("coefficient_feasibility: both coefficients must be nonzero");
    const double a1 = a[0], a2 = a[1];
    CoefficientFeasibility out;
    out.A_value = strength_parameter(cfg);
    out.face_threshold = (4.0 * a1 * a1 * a2 * a2 - 1.0) / (4.0 * a1 * a2);
    out.corner_threshold = a1 * a2;
    out.face_reachable = out.A_value >= out.face_threshold - kRootTol;
    out.corners_reachable = out.A_value >= out.corner_threshold - kRootTol;
    return out;
}

struct FacePoint {
    double beta2;
    std::array<double, 2> rates;
    std::array<std::string, 2> binding;
    std::string choice;  // "A1" pairs a with b=(0,1), "A2" with b=(1,0)
};

// Feasible points of one choice whose rate pair lands on the sum-capacity
// face, swept over the root interval of K(a, .) = beta2 S.
struct FaceScan {
    bool has_roots = false;
    double lo = 0.0, hi = 0.0;
    std::vector<FacePoint> points;
};

inline FaceScan face_scan(const ChannelConfig& cfg, const std::array<int, 2>& a,
                          const std::array<int, 2>& b, std::size_t n_samples) {
    detail::require_two_users(cfg, "face_scan");
    if (n_samples < 2)
        throw domain_error("face_scan: need at least two samples");
    FaceScan scan;
    const auto roots = beta_roots(cfg, a);
    if (!roots) return scan;
    scan.has_roots = true;
    scan.lo = roots->first;
    scan.hi = roots->second;
    const TwoSumChoice choice({a[0], a[1]}, {b[0], b[1]});
    const double cs = sum_capacity(cfg);
    const std::string tag = (b[0] == 0) ? "A1" : "A2";
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
        const double beta2 = scan.lo + t * (scan.hi - scan.lo);
        if (beta2 == 0.0) continue;
        const TwoSumRates r = message_rates_two_sums(cfg, choice, beta2);
        if (!r.feasible) continue;
        if (r.tuple.rates[0] + r.tuple.rates[1] < cs - kIdentityTol) continue;
        scan.points.push_back({beta2,
                               {r.tuple.rates[0], r.tuple.rates[1]},
                               {r.tuple.binding[0], r.tuple.binding[1]},
                               tag});
    }
    return scan;
}

struct FaceSweep {
    CaseLabel label{TwoUserCase::I, 0.0};
    std::vector<FacePoint> points;  // empty for case I
};

// Sweeps a=(1,1) with both companion sums over the scaling ranges that tile
// the dominant face. Case II keeps the full root interval for both choices;
// in case III the b=(0,1) choice runs from the first corner scaling up to the
// upper root and the b=(1,0) choice from the lower root to the second corner
// scaling, so the corner points sit exactly at sweep endpoints and the union
// still covers the whole face.
inline FaceSweep dominant_face_sweep_detail(const ChannelConfig& cfg, std::size_t n_samples = 512) {
    detail::require_two_users(cfg, "dominant_face_sweep");
    detail::require_nonzero_gains(cfg, "dominant_face_sweep");
    if (n_samples < 2)
        throw domain_error("dominant_face_sweep: need at least two samples");
    FaceSweep sweep;
    sweep.label = classify(cfg);
    if (sweep.label.label == TwoUserCase::I)
        return sweep;
    const auto roots = beta_roots(cfg, {1, 1});
    if (!roots) {
        sweep.label.label = TwoUserCase::I;
        return sweep;
    }
    const auto [lo, hi] = *roots;
    double lo1 = lo, hi1 = hi;  // b=(0,1) range
    double lo2 = lo, hi2 = hi;  // b=(1,0) range
    if (sweep.label.label == TwoUserCase::III) {
        const auto [c1, c2] = corner_betas(cfg);
        lo1 = std::clamp(c1, lo, hi);
        hi2 = std::clamp(c2, lo, hi);
    }
    const double cs = sum_capacity(cfg);
    auto run = [&](const std::array<int, 2>& b, double from, double to, const char* tag) {
        const TwoSumChoice choice({1, 1}, {b[0], b[1]});
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
            const double beta2 = from + t * (to - from);
            const TwoSumRates r = message_rates_two_sums(cfg, choice, beta2);
            if (!r.feasible) continue;
            if (r.tuple.rates[0] + r.tuple.rates[1] < cs - kIdentityTol) continue;
            sweep.points.push_back({beta2,
                                    {r.tuple.rates[0], r.tuple.rates[1]},
                                    {r.tuple.binding[0], r.tuple.binding[1]},
                                    tag});
        }
    };
    run({0, 1}, lo1, hi1, "A1");
    run({1, 0}, lo2, hi2, "A2");
    return sweep;
}

inline RegionCurve dominant_face_sweep(const ChannelConfig& cfg, std::size_t n_samples = 512) {
    const FaceSweep sweep = dominant_face_sweep_detail(cfg, n_samples);
    RegionCurve rc;
    rc.label = std::string("dominant face, case ") + to_string(sweep.label.label);
    rc.points.reserve(sweep.points.size());
    for (const FacePoint& p : sweep.points)
        rc.points.push_back({p.rates[0], p.rates[1]});
    return rc;
}

} // namespace cfmac
