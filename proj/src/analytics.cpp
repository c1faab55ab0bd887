#include "sklab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sklab/error.hpp"

namespace sklab {
namespace {

// Orthonormal probabilists' Hermite polynomials p_{n-1}(x), p_n(x).
void hermite_pair(int n, double x, double& p_nm1, double& p_n)
{
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev)
                            / std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    p_nm1 = prev;
    p_n = cur;
}

void check_context(const AnalyticContext& ctx)
{
    if (!(ctx.beta >= 0.0) || !(ctx.h >= 0.0) || ctx.rule.size() == 0) {
        throw ParameterError("invalid analytic context");
    }
}

double regime_margin(const AnalyticContext& ctx)
{
    const double margin = 1.0 - ctx.beta * ctx.beta * a_prime(1, ctx);
    if (!(margin > 0.0)) {
        std::ostringstream os;
        os << "beta^2 A'_1 >= 1 at beta=" << ctx.beta << ", h=" << ctx.h
           << "; outside the high-temperature regime";
        throw RegimeError(os.str());
    }
    return margin;
}

double sech_sq(double y)
{
    const double s = 1.0 / std::cosh(y);
    return s * s;
}

}  // namespace

QuadratureRule gauss_hermite_rule(int n)
{
    if (n < 1 || n > 256) throw ParameterError("quadrature node count must be in [1, 256]");
    if (n == 1) return {{0.0}, {1.0}};

    // Golub-Welsch for the Jacobi matrix of He_k, then Newton polish.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k < n - 1; ++k) sub[k] = std::sqrt(static_cast<double>(k + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(x.begin(), x.end());
    std::vector<double> w(n);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        double p_nm1 = 0.0, p_n = 0.0;
        for (int it = 0; it < 8; ++it) {
            hermite_pair(n, x[i], p_nm1, p_n);
            const double dx = p_n / (sqrt_n * p_nm1);
            x[i] -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x[i]))) break;
        }
        hermite_pair(n, x[i], p_nm1, p_n);
        w[i] = 1.0 / (n * p_nm1 * p_nm1);
    }

    // Exact reflection symmetry keeps odd moments at zero.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double a = 0.5 * (x[j] - x[i]);
        const double b = 0.5 * (w[i] + w[j]);
        x[i] = -a;
        x[j] = a;
        w[i] = w[j] = b;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;

    double total = 0.0;
    for (double wi : w) total += wi;
    for (double& wi : w) wi /= total;
    return {std::move(x), std::move(w)};
}

double solve_q2(double beta, double h, const QuadratureRule& rule)
{
    if (!(beta >= 0.0) || !(h >= 0.0) || !std::isfinite(beta) || !std::isfinite(h)) {
        throw ParameterError("solve_q2 requires finite beta >= 0 and h >= 0");
    }
    if (rule.size() == 0) throw ParameterError("empty quadrature rule");
    if (h == 0.0) {
        if (beta < 1.0) return 0.0;
        throw RegimeError("h = 0 with beta >= 1 is outside the replica-symmetric regime");
    }

    auto fixed_map = [&](double q) {
        const double scale = beta * std::sqrt(q);
        return rule.expect([&](double z) {
            const double th = std::tanh(scale * z + h);
            return th * th;
        });
    };

    constexpr int kMaxIterations = 10000;
    constexpr double kLambda = 0.5;
    double q = std::tanh(h) * std::tanh(h);
    double residual = 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double fq = fixed_map(q);
        residual = fq - q;
        if (std::abs(residual) < 1e-14) return q;
        q = (1.0 - kLambda) * q + kLambda * fq;
    }
    if (std::abs(fixed_map(q) - q) < 1e-10) return q;
    throw NumericError("q2 fixed-point iteration did not converge", residual);
}

double AnalyticContext::y(double z) const noexcept { return beta * z * std::sqrt(q2) + h; }

AnalyticContext make_context(double beta, double h, int nodes)
{
    AnalyticContext ctx;
    ctx.beta = beta;
    ctx.h = h;
    ctx.rule = gauss_hermite_rule(nodes);
    ctx.q2 = solve_q2(beta, h, ctx.rule);
    return ctx;
}

double q2_residual(const AnalyticContext& ctx)
{
    check_context(ctx);
    return ctx.rule.expect([&](double z) {
        const double th = std::tanh(ctx.y(z));
        return th * th;
    }) - ctx.q2;
}

double a_prime(int q, const AnalyticContext& ctx)
{
    if (q < 0) throw ParameterError("a_prime requires q >= 0");
    check_context(ctx);
    if (q == 0) return 1.0;
    return ctx.rule.expect([&](double z) { return std::pow(sech_sq(ctx.y(z)), 2 * q); });
}

double mean_tanh_y(const AnalyticContext& ctx)
{
    check_context(ctx);
    return ctx.rule.expect([&](double z) { return std::tanh(ctx.y(z)); });
}

double gaussian_even_moment(int q)
{
    if (q < 0) throw ParameterError("moment order must be non-negative");
    double m = 1.0;
    for (int k = 1; k <= q; ++k) m *= static_cast<double>(2 * k - 1);
    return m;
}

double limit_even_moment(int q, const AnalyticContext& ctx)
{
    if (q < 1) throw ParameterError("limit_even_moment requires q >= 1");
    check_context(ctx);
    const double margin = regime_margin(ctx);
    const double aq = a_prime(q, ctx);
    const double scale = 4.0 * ctx.beta * ctx.beta / margin;
    return aq * aq * gaussian_even_moment(q) * std::pow(scale, q);
}

double sigma_sq(const AnalyticContext& ctx)
{
    check_context(ctx);
    const double margin = regime_margin(ctx);
    const double a1 = a_prime(1, ctx);
    return ctx.beta * ctx.beta * a1 * a1 / margin;
}

double overlap_fluctuation_variance(const AnalyticContext& ctx)
{
    check_context(ctx);
    return a_prime(1, ctx) / regime_margin(ctx);
}

}  // namespace sklab
