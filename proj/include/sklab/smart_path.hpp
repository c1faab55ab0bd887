#pragma once

// Derivative of t -> nu_t(f) along the smart path, assembled from the
// doublet expansion, together with finite-difference probes used to check it.

#include <functional>

#include "sklab/gibbs.hpp"
#include "sklab/replica_poly.hpp"

namespace sklab {

inline constexpr int kMaxDerivativeReplicas = 4;

/// The polynomial sum_{J in D^1(n+2)} c_J(n) f eps^J Rdot^-_J.
/// `n` is the replica count f is regarded as depending on (n >= the
/// highest replica f uses, n <= 4).
ReplicaPolynomial derivative_integrand(const ReplicaPolynomial& f, int n, int sites, double q2);

/// beta^2 nu_t(derivative_integrand(f)) by tensor quadrature (N <= 3).
double eq6_rhs(const ModelParams& params, double t, const ReplicaPolynomial& f, int n,
               const AnalyticContext& ctx, int nodes_per_dim = kDefaultNodesPerDimension);

/// nu_t(f) by tensor quadrature.
double nu_polynomial(const ModelParams& params, double t, const ReplicaPolynomial& f,
                     const AnalyticContext& ctx, int nodes_per_dim = kDefaultNodesPerDimension);

/// Central difference with one Richardson level: (4 D(step/2) - D(step)) / 3.
double central_derivative(const std::function<double(double)>& fn, double t, double step);

/// Forward difference with one Richardson level: 2 D(step/2) - D(step).
double forward_derivative(const std::function<double(double)>& fn, double t, double step);

struct Thm33Check {
    double lhs = 0.0;  ///< d/dt nu_t(s~_1^{(x)2} eps~^{(x)2}) at t = 0, finite difference
    double rhs = 0.0;  ///< beta^2 A'_1 nu_0(s~_1^{(x)2} R^-(s~^1, s~^2))
};

/// First-order check at t = 0 for the four-replica observable
/// (s_1^1 - s_1^2)(s_1^3 - s_1^4)(eps^1 - eps^2)(eps^3 - eps^4). N <= 3.
Thm33Check verify_thm33_q1(const ModelParams& params, const AnalyticContext& ctx,
                           int nodes_per_dim = kDefaultNodesPerDimension, double step = 1e-3);

}  // namespace sklab
