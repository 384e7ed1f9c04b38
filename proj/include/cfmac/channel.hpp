#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

// All rates throughout the library are in bits per real channel use, log base 2.

namespace cfmac {

// Tolerance for algebraic identities that hold exactly in real arithmetic.
inline constexpr double kIdentityTol = 1e-9;
// Tolerance for root residuals and exact geometric coincidences.
inline constexpr double kRootTol = 1e-12;

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

// Gaussian MAC y = sum_k h_k x_k + z, unit noise, common transmit power P.
// Unequal per-user powers are absorbed into the gains: h_k' = sqrt(P_k / P) h_k.
struct ChannelConfig {
    std::vector<double> h;
    double P;

    ChannelConfig(std::vector<double> gains, double power)
        : h(std::move(gains)), P(power) {
        if (h.empty())
            throw domain_error("ChannelConfig: at least one user required");
        if (!std::isfinite(P) || P <= 0.0)
            throw domain_error("ChannelConfig: P must be positive and finite");
        for (double g : h)
            if (!std::isfinite(g))
                throw domain_error("ChannelConfig: gains must be finite");
    }

    // Absorbs per-user powers into the gains, keeping `power` as the common P.
    static ChannelConfig with_user_powers(const std::vector<double>& gains,
                                          const std::vector<double>& user_powers,
                                          double power) {
        if (gains.size() != user_powers.size())
            throw domain_error("with_user_powers: size mismatch");
        std::vector<double> scaled(gains.size());
        for (std::size_t k = 0; k < gains.size(); ++k) {
            if (!(user_powers[k] > 0.0))
                throw domain_error("with_user_powers: powers must be positive");
            scaled[k] = std::sqrt(user_powers[k] / power) * gains[k];
        }
        return ChannelConfig(scaled, power);
    }

    std::size_t users() const { return h.size(); }

    double gain_norm_sq() const {
        double s = 0.0;
        for (double g : h) s += g * g;
        return s;
    }
};

// Rates per user plus a tag naming the decoded sum that constrains each user.
// Computation-rate tuples may carry +inf for users with a zero coefficient.
struct RateTuple {
    std::vector<double> rates;
    std::vector<std::string> binding;
};

// Polyline or point cloud in rate space. Points share a common dimension.
struct RegionCurve {
    std::vector<std::vector<double>> points;
    std::string label;
};

// max(0, 1/2 log2 x). Callers pass the ratio whose half-log is the rate.
inline double log_plus(double x) {
    if (!(x > 0.0))
        throw domain_error("log_plus: argument must be positive");
    double r = 0.5 * std::log2(x);
    return r > 0.0 ? r : 0.0;
}

// Unclamped companion of log_plus; identities are checked on this value.
inline double half_log2(double x) {
    if (!(x > 0.0))
        throw domain_error("half_log2: argument must be positive");
    return 0.5 * std::log2(x);
}

inline double sum_capacity(const ChannelConfig& cfg) {
    return 0.5 * std::log2(1.0 + cfg.P * cfg.gain_norm_sq());
}

// Single-user capacity of user k with the other users silent.
inline double user_capacity(const ChannelConfig& cfg, std::size_t k) {
    if (k >= cfg.users())
        throw domain_error("user_capacity: index out of range");
    return 0.5 * std::log2(1.0 + cfg.P * cfg.h[k] * cfg.h[k]);
}

// The five pentagon vertices, counterclockwise from the origin. Degenerate
// channels (a zero gain) collapse vertices; duplicates are kept so the caller
// always sees five points.
inline RegionCurve capacity_region_2user(const ChannelConfig& cfg) {
    if (cfg.users() != 2)
        throw domain_error("capacity_region_2user: needs exactly two users");
    const double c1 = user_capacity(cfg, 0);
    const double c2 = user_capacity(cfg, 1);
    const double cs = sum_capacity(cfg);
    RegionCurve rc;
    rc.label = "capacity pentagon";
    rc.points = {{0.0, 0.0},
                 {c1, 0.0},
                 {c1, cs - c1},
                 {cs - c2, c2},
                 {0.0, c2}};
    return rc;
}

} // namespace cfmac
