#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "comp_rate.hpp"
#include "errors.hpp"
#include "linalg.hpp"

// Successive decoding of K integer sums given by a full-rank coefficient
// matrix, plus the symmetric-rate machinery for the all-ones channel.

namespace cfmac {

struct CoefficientMatrix {
    std::size_t n = 0;
    std::vector<int> entries;  // row-major, rows are decoded sums
    long long det = 0;

    CoefficientMatrix(std::size_t size, std::vector<int> e)
        : n(size), entries(std::move(e)) {
        if (n == 0 || entries.size() != n * n)
            throw domain_error("CoefficientMatrix: entry count must be n*n");
        det = integer_det(n, entries);
        if (det == 0)
            throw singular_matrix_error("CoefficientMatrix: rows are dependent");
    }

    int operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    bool unimodular() const { return det == 1 || det == -1; }
};

namespace detail {
inline void require_k_user_args(const ChannelConfig& cfg, const CoefficientMatrix& A,
                                const ScalingVector& beta) {
    if (A.n != cfg.users() || beta.size() != cfg.users())
        throw domain_error("matrix/scaling size must match the user count");
}

// A diag(beta) as a dense matrix.
inline Matrix scaled_coefficients(const CoefficientMatrix& A, const ScalingVector& beta) {
    Matrix ab(A.n, A.n);
    for (std::size_t i = 0; i < A.n; ++i)
        for (std::size_t j = 0; j < A.n; ++j)
            ab(i, j) = A(i, j) * beta.beta[j];
    return ab;
}

// I - c h h^T with c = P / (1 + P |h|^2); the inverse of I + P h h^T.
inline Matrix whitening_inverse(const ChannelConfig& cfg) {
    const std::size_t n = cfg.users();
    const double c = cfg.P / (1.0 + cfg.P * cfg.gain_norm_sq());
    Matrix x = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            x(i, j) -= c * cfg.h[i] * cfg.h[j];
    return x;
}
} // namespace detail

// Effective-noise shape without the common power factor:
// A B (I + P h h^T)^{-1} B^T A^T. Its Cholesky diagonal drives the rates.
inline Matrix noise_covariance_p_free(const ChannelConfig& cfg, const CoefficientMatrix& A,
                                      const ScalingVector& beta) {
    detail::require_k_user_args(cfg, A, beta);
    const Matrix ab = detail::scaled_coefficients(A, beta);
    const Matrix x = detail::whitening_inverse(cfg);
    return matmul(matmul(ab, x), transpose(ab));
}

// Full effective-noise covariance, including the leading P.
inline Matrix noise_covariance(const ChannelConfig& cfg, const CoefficientMatrix& A,
                               const ScalingVector& beta) {
    Matrix m = noise_covariance_p_free(cfg, A, beta);
    for (double& v : m.a) v *= cfg.P;
    return m;
}

// R_k = min over sums l containing user k of [1/2 log2(beta_k^2 / L_ll^2)]+
// with L the Cholesky factor of the P-free noise shape.
inline RateTuple message_rates_k(const ChannelConfig& cfg, const CoefficientMatrix& A,
                                 const ScalingVector& beta) {
    detail::require_k_user_args(cfg, A, beta);
    const Matrix L = cholesky_lower(noise_covariance_p_free(cfg, A, beta));
    const std::size_t n = A.n;
    RateTuple t;
    t.rates.resize(n);
    t.binding.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double worst = -1.0;
        std::size_t arg = n;
        for (std::size_t l = 0; l < n; ++l) {
            if (A(l, k) == 0) continue;
            if (L(l, l) > worst) {
                worst = L(l, l);
                arg = l;
            }
        }
        // A full rank guarantees some sum contains user k.
        const double bk = beta.beta[k];
        t.rates[k] = log_plus(bk * bk / (worst * worst));
        t.binding[k] = "sum " + std::to_string(arg + 1);
    }
    return t;
}

// Unclamped diagonal rates telescope to C_sum - log2|det A|; returns the
// signed residual of that identity.
inline double sum_rate_identity_residual(const ChannelConfig& cfg, const CoefficientMatrix& A,
                                         const ScalingVector& beta) {
    detail::require_k_user_args(cfg, A, beta);
    const Matrix L = cholesky_lower(noise_covariance_p_free(cfg, A, beta));
    double s = 0.0;
    for (std::size_t k = 0; k < A.n; ++k) {
        const double bk = beta.beta[k];
        s += half_log2(bk * bk / (L(k, k) * L(k, k)));
    }
    const double target = sum_capacity(cfg) - std::log2(std::fabs(static_cast<double>(A.det)));
    return s - target;
}

inline double symmetric_capacity(std::size_t K, double P) {
    if (K == 0 || !(P > 0.0))
        throw domain_error("symmetric_capacity: K >= 1 and P > 0 required");
    return std::log2(1.0 + static_cast<double>(K) * P) / (2.0 * static_cast<double>(K));
}

// Cholesky diagonal of C (I - c E) C^T for the all-ones channel, where C is
// the identity with first row (1, beta_2, ..., beta_K), E all-ones and
// c = P / (1 + K P). This shape is positive definite for every beta, and the
// per-user rates of the ones-row matrix family are -log2 of these values.
inline std::vector<double> symmetric_ltilde_diag(std::size_t K, double P,
                                                 const std::vector<double>& beta_tail) {
    if (K < 2 || beta_tail.size() != K - 1)
        throw domain_error("symmetric_ltilde_diag: beta_tail must have K-1 entries");
    const double c = P / (1.0 + static_cast<double>(K) * P);
    Matrix C = Matrix::identity(K);
    for (std::size_t j = 1; j < K; ++j) C(0, j) = beta_tail[j - 1];
    Matrix X(K, K);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j)
            X(i, j) = (i == j ? 1.0 : 0.0) - c;
    const Matrix L = cholesky_lower(matmul(matmul(C, X), transpose(C)));
    std::vector<double> d(K);
    for (std::size_t k = 0; k < K; ++k) d[k] = L(k, k);
    return d;
}

struct EqualizeResult {
    bool found = false;            // the solver is a search, not a decision procedure
    std::vector<double> beta_tail; // beta_2..beta_K when found
    double spread = 0.0;           // max - min of the equalized diagonal
};

// Finds beta_2..beta_K >= 1 equalizing the diagonal above, which pins every
// user of the ones-row family at the symmetric capacity. Damped Newton with
// finite-difference Jacobian from a fixed start list; |beta_k| >= 1 - 1e-9 is
// required for acceptance because smaller scalings break the rate ordering.
inline EqualizeResult sym_equalize_betas(std::size_t K, double P) {
    if (K < 2 || K > 8)
        throw domain_error("sym_equalize_betas: K must be in [2, 8]");
    if (!(P > 0.0) || !std::isfinite(P))
        throw domain_error("sym_equalize_betas: P must be positive and finite");
    const std::size_t m = K - 1;

    auto residual = [&](const std::vector<double>& bt) {
        // extreme trial scalings can push the whitened matrix out of
        // numerical positive definiteness; report them as hopeless rather
        // than failing, so damping backs off and bad starts get discarded
        std::vector<double> g(m);
        try {
            const std::vector<double> d = symmetric_ltilde_diag(K, P, bt);
            for (std::size_t i = 0; i < m; ++i) g[i] = d[i + 1] - d[0];
        } catch (const numeric_error&) {
            std::fill(g.begin(), g.end(), 1e300);
        }
        return g;
    };
    auto norm_inf = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::fabs(x));
        return s;
    };

    std::vector<std::vector<double>> starts;
    {
        std::vector<double> ramp(m);
        for (std::size_t i = 0; i < m; ++i)
            ramp[i] = m == 1 ? 1.4 : 1.7 + (1.05 - 1.7) * static_cast<double>(i) / static_cast<double>(m - 1);
        starts.push_back(ramp);
        starts.push_back(std::vector<double>(m, 1.0001));
        starts.push_back(std::vector<double>(m, 1.3));
        std::vector<double> wide(m);
        for (std::size_t i = 0; i < m; ++i)
            wide[i] = m == 1 ? 1.8 : 2.0 + (1.0 - 2.0) * static_cast<double>(i) / static_cast<double>(m - 1);
        starts.push_back(wide);
    }

    for (const auto& start : starts) {
        std::vector<double> bt = start;
        std::vector<double> g = residual(bt);
        bool converged = norm_inf(g) < 1e-10;
        for (int iter = 0; iter < 80 && !converged; ++iter) {
            Matrix J(m, m);
            for (std::size_t j = 0; j < m; ++j) {
                const double h = 1e-7 * std::max(1.0, std::fabs(bt[j]));
                std::vector<double> bumped = bt;
                bumped[j] += h;
                const std::vector<double> gj = residual(bumped);
                for (std::size_t i = 0; i < m; ++i) J(i, j) = (gj[i] - g[i]) / h;
            }
            std::vector<double> rhs(m);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = -g[i];
            std::vector<double> step;
            try {
                step = solve_linear(J, std::move(rhs));
            } catch (const numeric_error&) {
                break;
            }
            const double g0 = norm_inf(g);
            double lambda = 1.0;
            bool improved = false;
            for (int half = 0; half < 40; ++half) {
                std::vector<double> cand(m);
                for (std::size_t i = 0; i < m; ++i) cand[i] = bt[i] + lambda * step[i];
                bool sane = true;
                for (double v : cand) sane = sane && std::isfinite(v) && v > 1e-6;
                if (sane) {
                    const std::vector<double> gc = residual(cand);
                    if (norm_inf(gc) < g0) {
                        bt = std::move(cand);
                        g = gc;
                        improved = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!improved) break;
            converged = norm_inf(g) < 1e-10;
        }
        if (!converged) continue;
        bool admissible = true;
        for (double v : bt) admissible = admissible && std::fabs(v) >= 1.0 - 1e-9;
        if (!admissible) continue;
        const std::vector<double> d = symmetric_ltilde_diag(K, P, bt);
        EqualizeResult out;
        out.found = true;
        out.beta_tail = bt;
        out.spread = *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end());
        return out;
    }
    return {};
}

struct PStarBracket {
    double lo = 0.0, hi = 0.0;  // equalization infeasible at lo, feasible at hi
};

// Smallest power at which the symmetric equalization admits an admissible
// solution, bracketed to width <= tol by doubling then bisection.
inline PStarBracket p_star(std::size_t K, double tol, double ceiling = 100.0) {
    if (K < 2 || K > 8)
        throw domain_error("p_star: K must be in [2, 8]");
    if (!(tol >= 1e-3))
        throw domain_error("p_star: tol must be at least 1e-3");
    auto feasible = [&](double P) { return sym_equalize_betas(K, P).found; };
    double lo = 0.1;
    if (feasible(lo)) return {0.0, lo};
    double hi = 0.2;
    while (!feasible(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > ceiling)
            throw numeric_error("p_star: no feasible power at or below the ceiling");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid;
        else lo = mid;
    }
    return {lo, hi};
}

// The six full-rank 3x3 matrices made of a ones row plus two distinct unit
// rows; optionally two extra unimodular shapes that decode user sums in a
// different order.
inline std::vector<CoefficientMatrix> three_user_family(bool include_extra = false) {
    std::vector<CoefficientMatrix> fam;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            std::vector<int> e(9, 0);
            e[0] = e[1] = e[2] = 1;
            e[3 + i] = 1;
            e[6 + j] = 1;
            fam.emplace_back(3, std::move(e));
        }
    }
    if (include_extra) {
        fam.emplace_back(3, std::vector<int>{0, 1, 1, 0, 1, 0, 1, 0, 0});
        fam.emplace_back(3, std::vector<int>{0, 1, 1, 0, 0, 1, 1, 0, 0});
    }
    return fam;
}

// Rate triples achieved by the family over a grid of (beta2, beta3), beta1=1.
inline RegionCurve three_user_family_sweep(const ChannelConfig& cfg,
                                           const std::vector<std::array<double, 2>>& beta_grid,
                                           bool include_extra = false) {
    if (cfg.users() != 3)
        throw domain_error("three_user_family_sweep: needs exactly three users");
    RegionCurve rc;
    rc.label = "three-user sum family";
    const std::vector<CoefficientMatrix> fam = three_user_family(include_extra);
    for (const CoefficientMatrix& A : fam) {
        for (const auto& bg : beta_grid) {
            const ScalingVector beta({1.0, bg[0], bg[1]});
            const RateTuple t = message_rates_k(cfg, A, beta);
            rc.points.push_back({t.rates[0], t.rates[1], t.rates[2]});
        }
    }
    return rc;
}

} // namespace cfmac
