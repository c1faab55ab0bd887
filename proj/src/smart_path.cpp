#include "sklab/smart_path.hpp"

#include "sklab/combinatorics.hpp"
#include "sklab/error.hpp"

namespace sklab {

ReplicaPolynomial derivative_integrand(const ReplicaPolynomial& f, int n, int sites, double q2)
{
    if (n < 1 || n > kMaxDerivativeReplicas) {
        throw ParameterError("derivative formula supports 1 <= n <= 4 replicas");
    }
    if (f.replica_count() > n) throw ParameterError("f uses more than n replicas");
    if (sites < 2) throw ParameterError("derivative formula requires N >= 2");

    ReplicaPolynomial total;
    for (const auto& j : enumerate_doublets(n + 2)) {
        const long long c = c_coefficient(j, n);
        if (c == 0) continue;
        const auto eps_j = cavity_spin(j.lo, sites) * cavity_spin(j.hi, sites);
        total += static_cast<double>(c) * (f * eps_j * r_minus_dot(j.lo, j.hi, sites, q2));
    }
    return total;
}

double nu_polynomial(const ModelParams& params, double t, const ReplicaPolynomial& f,
                     const AnalyticContext& ctx, int nodes_per_dim)
{
    if (f.max_site() > params.n) throw ParameterError("polynomial uses sites beyond N");
    return nu_quadrature(
        params, t, [&](const GibbsTable& table) { return replica_expectation(table, f); }, ctx,
        nodes_per_dim);
}

double eq6_rhs(const ModelParams& params, double t, const ReplicaPolynomial& f, int n,
               const AnalyticContext& ctx, int nodes_per_dim)
{
    const auto integrand = derivative_integrand(f, n, params.n, ctx.q2);
    return params.beta * params.beta * nu_polynomial(params, t, integrand, ctx, nodes_per_dim);
}

double central_derivative(const std::function<double(double)>& fn, double t, double step)
{
    auto diff = [&](double s) { return (fn(t + s) - fn(t - s)) / (2.0 * s); };
    return (4.0 * diff(0.5 * step) - diff(step)) / 3.0;
}

double forward_derivative(const std::function<double(double)>& fn, double t, double step)
{
    const double f0 = fn(t);
    auto diff = [&](double s) { return (fn(t + s) - f0) / s; };
    return 2.0 * diff(0.5 * step) - diff(step);
}

Thm33Check verify_thm33_q1(const ModelParams& params, const AnalyticContext& ctx,
                           int nodes_per_dim, double step)
{
    const int n = params.n;
    const auto f_minus = tilde_spin(1, 1) * tilde_spin(2, 1);
    const auto eps_tilde = tilde_spin(1, n) * tilde_spin(2, n);
    const auto observable = f_minus * eps_tilde;

    Thm33Check out;
    out.lhs = forward_derivative(
        [&](double t) { return nu_polynomial(params, t, observable, ctx, nodes_per_dim); }, 0.0, step);
    const double nu0 = nu_polynomial(params, 0.0, f_minus * tilde_overlap_minus(1, 2, n), ctx,
                                     nodes_per_dim);
    out.rhs = params.beta * params.beta * a_prime(1, ctx) * nu0;
    return out;
}

}  // namespace sklab
