#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sklab/analytics.hpp"
#include "sklab/error.hpp"

using namespace sklab;

TEST_CASE("gauss-hermite rules")
{
    const auto one = gauss_hermite_rule(1);
    REQUIRE(one.size() == 1);
    CHECK(one.nodes[0] == doctest::Approx(0.0));
    CHECK(one.weights[0] == doctest::Approx(1.0));

    CHECK(gauss_hermite_rule(2).expect([](double z) { return z * z; }) == doctest::Approx(1.0).epsilon(1e-14));

    const auto r61 = gauss_hermite_rule(61);
    double total = 0.0;
    for (double w : r61.weights) total += w;
    CHECK(std::abs(total - 1.0) < 1e-14);
    CHECK(std::abs(r61.expect([](double z) { return z * z * z * z; }) - 3.0) < 1e-12);
    CHECK(std::abs(r61.expect([](double z) { return z * z * z; })) < 1e-12);

    // exact through degree 2n - 1
    const auto r5 = gauss_hermite_rule(5);
    CHECK(r5.expect([](double z) { return std::pow(z, 8); }) == doctest::Approx(105.0).epsilon(1e-12));
    CHECK(r5.expect([](double z) { return std::pow(z, 9); }) == doctest::Approx(0.0));

    for (int n : {2, 10, 40, 61, 121}) {
        const auto r = gauss_hermite_rule(n);
        for (int k = 0; k < n; ++k) CHECK(r.nodes[k] == doctest::Approx(-r.nodes[n - 1 - k]));
        CHECK(std::abs(r.expect([](double z) { return z * z; }) - 1.0) < 1e-12);
    }

    CHECK_THROWS_AS(gauss_hermite_rule(0), ParameterError);
    CHECK_THROWS_AS(gauss_hermite_rule(257), ParameterError);
}

TEST_CASE("solve_q2 special points")
{
    const auto rule = gauss_hermite_rule(kDefaultQuadratureNodes);
    CHECK(solve_q2(0.5, 0.0, rule) == 0.0);
    CHECK(solve_q2(0.0, 0.5, rule) == doctest::Approx(std::pow(std::tanh(0.5), 2)).epsilon(1e-14));
    CHECK_THROWS_AS(solve_q2(1.0, 0.0, rule), RegimeError);
    CHECK_THROWS_AS(solve_q2(1.3, 0.0, rule), RegimeError);
    CHECK_THROWS_AS(make_context(-0.1, 0.5), ParameterError);
}

TEST_CASE("solve_q2 agrees with bisection on Simpson integrals")
{
    const auto rule = gauss_hermite_rule(kDefaultQuadratureNodes);
    for (auto [beta, h] : {std::pair{0.3, 0.5}, {0.1, 0.25}, {0.5, 1.0}, {0.2, 0.05}}) {
        CAPTURE(beta);
        CAPTURE(h);
        const double q = solve_q2(beta, h, rule);
        CHECK(std::abs(q - oracle::q2_bisection(beta, h)) < 1e-10);
    }
}

TEST_CASE("fixed-point residual over the parameter grid")
{
    for (double beta : {0.0, 0.1, 0.2, 0.3}) {
        for (double h : {0.0, 0.25, 0.5, 1.0}) {
            const auto ctx = make_context(beta, h);
            CAPTURE(beta);
            CAPTURE(h);
            CHECK(std::abs(q2_residual(ctx)) < 1e-10);
        }
    }
}

TEST_CASE("node doubling leaves the analytics unchanged")
{
    for (auto [beta, h] : {std::pair{0.3, 0.5}, {0.2, 1.0}, {0.5, 0.25}}) {
        const auto a = make_context(beta, h, 61);
        const auto b = make_context(beta, h, 121);
        CHECK(std::abs(a.q2 - b.q2) <= 1e-11 * b.q2);
        for (int q = 1; q <= 3; ++q) {
            CHECK(std::abs(a_prime(q, a) - a_prime(q, b)) <= 1e-11 * a_prime(q, b));
            CHECK(std::abs(limit_even_moment(q, a) - limit_even_moment(q, b)) <=
                  1e-11 * limit_even_moment(q, b));
        }
    }
}

TEST_CASE("A' values")
{
    const auto flat = make_context(0.4, 0.0);
    for (int q = 0; q <= 4; ++q) CHECK(a_prime(q, flat) == doctest::Approx(1.0));

    const auto ctx = make_context(0.3, 0.5);
    CHECK(a_prime(0, ctx) == doctest::Approx(1.0));
    double prev = 1.0;
    for (int q = 1; q <= 5; ++q) {
        const double a = a_prime(q, ctx);
        CHECK(a > 0.0);
        CHECK(a <= prev);
        prev = a;
        CHECK(std::abs(a - oracle::a_prime(q, 0.3, 0.5, ctx.q2)) < 1e-10);
    }

    const auto frozen = make_context(0.0, 0.5);
    CHECK(a_prime(1, frozen) == doctest::Approx(std::pow(std::cosh(0.5), -4)).epsilon(1e-13));
    CHECK(a_prime(1, frozen) == doctest::Approx(0.6185).epsilon(1e-3));
    CHECK(mean_tanh_y(frozen) == doctest::Approx(std::tanh(0.5)));
}

TEST_CASE("limit moments")
{
    CHECK(gaussian_even_moment(0) == 1.0);
    CHECK(gaussian_even_moment(1) == 1.0);
    CHECK(gaussian_even_moment(2) == 3.0);
    CHECK(gaussian_even_moment(3) == 15.0);
    CHECK(gaussian_even_moment(6) == 10395.0);

    const auto gauss = make_context(0.5, 0.0);
    CHECK(limit_even_moment(1, gauss) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    const double var = 4 * 0.25 / 0.75;
    CHECK(limit_even_moment(2, gauss) == doctest::Approx(3 * var * var).epsilon(1e-14));
    CHECK(limit_even_moment(3, gauss) == doctest::Approx(15 * var * var * var).epsilon(1e-14));
    CHECK(sigma_sq(gauss) == doctest::Approx(0.25 / 0.75));

    const auto zero = make_context(0.0, 0.7);
    for (int q = 1; q <= 3; ++q) CHECK(limit_even_moment(q, zero) == 0.0);
    CHECK(sigma_sq(zero) == 0.0);

    for (auto [beta, h] : {std::pair{0.3, 0.5}, {0.2, 0.1}, {0.6, 1.0}}) {
        const auto ctx = make_context(beta, h);
        CHECK(limit_even_moment(1, ctx) == doctest::Approx(4.0 * sigma_sq(ctx)).epsilon(1e-15));
        const double a1 = oracle::a_prime(1, beta, h, ctx.q2);
        CHECK(overlap_fluctuation_variance(ctx) == doctest::Approx(a1 / (1 - beta * beta * a1)).epsilon(1e-9));
    }

    AnalyticContext hot;
    hot.beta = 1.5;
    hot.rule = gauss_hermite_rule(11);
    CHECK_THROWS_AS(limit_even_moment(1, hot), RegimeError);
    CHECK_THROWS_AS(sigma_sq(hot), RegimeError);
}
