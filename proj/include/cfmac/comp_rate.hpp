#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"

// Computation rate of a single decoded integer sum with per-user scaling.

namespace cfmac {

// Integer coefficients of one decoded sum. At least one entry must be
// nonzero; magnitudes are capped to keep searches bounded.
struct SumCoefficients {
    std::vector<int> a;

    explicit SumCoefficients(std::vector<int> coeffs, int max_magnitude = 16)
        : a(std::move(coeffs)) {
        if (a.empty())
            throw domain_error("SumCoefficients: empty coefficient vector");
        bool any = false;
        for (int c : a) {
            if (std::abs(c) > max_magnitude)
                throw domain_error("SumCoefficients: coefficient magnitude above " +
                                   std::to_string(max_magnitude));
            any = any || c != 0;
        }
        if (!any)
            throw domain_error("SumCoefficients: all coefficients are zero");
    }

    std::size_t size() const { return a.size(); }
};

// Per-user scaling; every entry nonzero and finite.
struct ScalingVector {
    std::vector<double> beta;

    explicit ScalingVector(std::vector<double> b) : beta(std::move(b)) {
        if (beta.empty())
            throw domain_error("ScalingVector: empty");
        for (double v : beta)
            if (!std::isfinite(v) || v == 0.0)
                throw domain_error("ScalingVector: entries must be nonzero and finite");
    }

    static ScalingVector ones(std::size_t k) {
        return ScalingVector(std::vector<double>(k, 1.0));
    }

    std::size_t size() const { return beta.size(); }
};

namespace detail {
inline void require_same_users(const ChannelConfig& cfg, const SumCoefficients& a,
                               const ScalingVector& beta) {
    if (a.size() != cfg.users() || beta.size() != cfg.users())
        throw domain_error("coefficient/scaling length must match the user count");
}
} // namespace detail

// N(alpha) = P * |alpha h - a~|^2 + alpha^2 with a~_k = beta_k a_k.
inline double equivalent_noise_power(const ChannelConfig& cfg, const SumCoefficients& a,
                                     const ScalingVector& beta, double alpha) {
    detail::require_same_users(cfg, a, beta);
    double n = alpha * alpha;
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        const double d = alpha * cfg.h[k] - a.a[k] * beta.beta[k];
        n += d * d * cfg.P;
    }
    return n;
}

// alpha* = P <h, a~> / (1 + P |h|^2), the unique minimizer of N.
inline double optimal_alpha(const ChannelConfig& cfg, const SumCoefficients& a,
                            const ScalingVector& beta) {
    detail::require_same_users(cfg, a, beta);
    double dot = 0.0;
    for (std::size_t k = 0; k < cfg.users(); ++k)
        dot += cfg.h[k] * a.a[k] * beta.beta[k];
    return cfg.P * dot / (1.0 + cfg.P * cfg.gain_norm_sq());
}

namespace detail {
// M = |a~|^2 - P <h, a~>^2 / (1 + P |h|^2); positive for a~ != 0 by
// Cauchy-Schwarz, and N(alpha*) = P * M.
inline double residual_m(const ChannelConfig& cfg, const SumCoefficients& a,
                         const ScalingVector& beta) {
    double norm_sq = 0.0, dot = 0.0;
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        const double t = a.a[k] * beta.beta[k];
        norm_sq += t * t;
        dot += cfg.h[k] * t;
    }
    return norm_sq - cfg.P * dot * dot / (1.0 + cfg.P * cfg.gain_norm_sq());
}
} // namespace detail

// Computation rate of the sum for each user: R_k = [1/2 log2(beta_k^2 P / N*)]+
// where N* = N(alpha*). Users with a_k = 0 are unconstrained (+inf).
inline RateTuple computation_rate_tuple(const ChannelConfig& cfg, const SumCoefficients& a,
                                        const ScalingVector& beta) {
    detail::require_same_users(cfg, a, beta);
    const double m = detail::residual_m(cfg, a, beta);
    RateTuple t;
    t.rates.resize(cfg.users());
    t.binding.resize(cfg.users());
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        if (a.a[k] == 0) {
            t.rates[k] = kInfiniteRate;
            t.binding[k] = "unconstrained";
        } else {
            t.rates[k] = log_plus(beta.beta[k] * beta.beta[k] / m);
            t.binding[k] = "sum";
        }
    }
    return t;
}

// Unclamped rate of user k for the same sum; used by identity checks.
inline double computation_rate_preclamp(const ChannelConfig& cfg, const SumCoefficients& a,
                                        const ScalingVector& beta, std::size_t k) {
    detail::require_same_users(cfg, a, beta);
    if (k >= cfg.users() || a.a[k] == 0)
        throw domain_error("computation_rate_preclamp: user not constrained by this sum");
    return half_log2(beta.beta[k] * beta.beta[k] / detail::residual_m(cfg, a, beta));
}

struct AlphaGrid {
    double lo, hi, step;
};

inline AlphaGrid default_oracle_grid(const ChannelConfig& cfg, const SumCoefficients& a,
                                     const ScalingVector& beta) {
    const double c = optimal_alpha(cfg, a, beta);
    return AlphaGrid{c - 1.0, c + 1.0, 1e-4};
}

// Grid-search reference for the closed form: minimizes N over the grid and
// forms R_k = [1/2 log2(beta_k^2 P / N_min)]+. Slow on purpose.
inline RateTuple oracle_rate_grid(const ChannelConfig& cfg, const SumCoefficients& a,
                                  const ScalingVector& beta, const AlphaGrid& grid) {
    detail::require_same_users(cfg, a, beta);
    if (!(grid.step > 0.0) || !(grid.hi >= grid.lo))
        throw domain_error("oracle_rate_grid: bad grid");
    double nmin = kInfiniteRate;
    const long steps = static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step)) + 1;
    for (long i = 0; i < steps; ++i) {
        const double alpha = grid.lo + static_cast<double>(i) * grid.step;
        const double n = equivalent_noise_power(cfg, a, beta, alpha);
        if (n < nmin) nmin = n;
    }
    RateTuple t;
    t.rates.resize(cfg.users());
    t.binding.resize(cfg.users());
    for (std::size_t k = 0; k < cfg.users(); ++k) {
        if (a.a[k] == 0) {
            t.rates[k] = kInfiniteRate;
            t.binding[k] = "unconstrained";
        } else {
            const double bk = beta.beta[k];
            t.rates[k] = log_plus(bk * bk * cfg.P / nmin);
            t.binding[k] = "sum";
        }
    }
    return t;
}

} // namespace cfmac
