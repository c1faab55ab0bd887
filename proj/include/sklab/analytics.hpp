#pragma once

// Scalar Gaussian analytics: Gauss-Hermite quadrature for the standard
// normal, the replica-symmetric overlap q2, the moments A'_q = E[U^{2q}] with
// U = 1 - tanh^2(Y), and the exact moments of the limit law.

#include <cstddef>
#include <vector>

namespace sklab {

/// Nodes and weights integrating against the standard normal density.
/// Weights are normalized so that they sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    /// E[f(z)] for z ~ N(0, 1).
    template<class F>
    double expect(F&& f) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
        return acc;
    }
};

/// n-point rule, exact for polynomials up to degree 2n-1. Requires 1 <= n <= 256.
QuadratureRule gauss_hermite_rule(int n);

inline constexpr int kDefaultQuadratureNodes = 61;

/// Solves E[tanh^2(beta z sqrt(q) + h)] = q.
///
/// Damped fixed-point iteration q <- (q + F(q)) / 2 starting at tanh^2(h).
/// For h = 0 the root q = 0 is returned directly when beta < 1; beta >= 1
/// at h = 0 throws RegimeError. Throws NumericError after 10^4 iterations
/// without reaching a residual below 1e-10.
double solve_q2(double beta, double h, const QuadratureRule& rule);

/// Parameters (beta, h) together with their solved q2.
struct AnalyticContext {
    double beta = 0.0;
    double h = 0.0;
    double q2 = 0.0;
    QuadratureRule rule;

    /// Y = beta z sqrt(q2) + h.
    double y(double z) const noexcept;
};

AnalyticContext make_context(double beta, double h, int nodes = kDefaultQuadratureNodes);

/// Fixed-point residual E[tanh^2(Y)] - q2 under the context's rule.
double q2_residual(const AnalyticContext& ctx);

/// A'_q = E[(1 - tanh^2 Y)^{2q}] = E[1 / cosh^{4q}(Y)].
double a_prime(int q, const AnalyticContext& ctx);

/// E[tanh(Y)], the t = 0 cavity magnetization averaged over z.
double mean_tanh_y(const AnalyticContext& ctx);

/// (2q)! / (q! 2^q), the 2q-th moment of a standard Gaussian.
double gaussian_even_moment(int q);

/// Limiting 2q-th moment of sqrt(N) times the symmetrized covariance:
/// (A'_q)^2 (2q)!/(q! 2^q) (4 beta^2 / (1 - beta^2 A'_1))^q.
/// Throws RegimeError when beta^2 A'_1 >= 1.
double limit_even_moment(int q, const AnalyticContext& ctx);

/// beta^2 (A'_1)^2 / (1 - beta^2 A'_1): limiting variance of sqrt(N) gamma_ij.
double sigma_sq(const AnalyticContext& ctx);

/// A'_1 / (1 - beta^2 A'_1): the limit of N nu(T_12^2).
double overlap_fluctuation_variance(const AnalyticContext& ctx);

}  // namespace sklab
