#include "doctest.h"

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sklab/error.hpp"
#include "sklab/gibbs.hpp"

using namespace sklab;

TEST_CASE("tables match direct summation")
{
    for (int n : {2, 3, 5, 8, 11, 13}) {
        for (auto [beta, h] : {std::pair{0.3, 0.5}, {1.5, 0.1}, {0.7, 0.0}}) {
            const ModelParams p{n, beta, h};
            const auto d = DisorderSample::generate(n, 77, n);
            const auto table = build_table(p, d);
            const auto prob = oracle::gibbs(p, d);
            const auto m = oracle::moments(p, prob);
            CAPTURE(n);
            CAPTURE(beta);

            double total = 0.0;
            double worst = 0.0;
            for (std::uint64_t c = 0; c < prob.size(); ++c) {
                total += table.probability(c);
                worst = std::max(worst, std::abs(table.probability(c) - prob[c]));
                CHECK(std::abs(table.log_weights[c] - oracle::energy(c, p, d)) < 1e-12);
            }
            CHECK(std::abs(total - 1.0) < 1e-12);
            CHECK(worst < 1e-13);
            for (int i = 1; i <= n; ++i) {
                CHECK(std::abs(table.mean(i) - m.mean[i - 1]) < 1e-12);
                CHECK(table.corr(i, i) == 1.0);
                for (int j = 1; j <= n; ++j) {
                    CHECK(std::abs(table.corr(i, j) - m.corr[(i - 1) * n + j - 1]) < 1e-12);
                    CHECK(table.corr(i, j) == table.corr(j, i));
                    CHECK(std::abs(table.corr(i, j)) <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("spin moments are the Gibbs averages of spin products")
{
    const ModelParams p{7, 0.6, 0.3};
    const auto d = DisorderSample::generate(7, 4, 4);
    const auto table = build_table(p, d);
    const auto prob = oracle::gibbs(p, d);
    const auto mom = table.spin_moments();
    REQUIRE(mom.size() == 128);
    CHECK(mom[0] == doctest::Approx(1.0));
    for (std::uint64_t mask = 0; mask < 128; ++mask) {
        double direct = 0.0;
        for (std::uint64_t c = 0; c < 128; ++c) {
            int sign = 1;
            for (int i = 1; i <= 7; ++i) {
                if (mask >> (i - 1) & 1) sign *= oracle::spin(c, i);
            }
            direct += sign * prob[c];
        }
        CHECK(std::abs(mom[mask] - direct) < 1e-12);
    }
}

TEST_CASE("tables in closed-form cases")
{
    SUBCASE("uniform measure")
    {
        const auto t = build_table({9, 0.0, 0.0}, DisorderSample::generate(9, 1, 0));
        CHECK(t.log_z == doctest::Approx(9 * std::log(2.0)).epsilon(1e-14));
        for (int i = 1; i <= 9; ++i) {
            CHECK(t.mean(i) == doctest::Approx(0.0));
            for (int j = i + 1; j <= 9; ++j) CHECK(t.corr(i, j) == doctest::Approx(0.0));
        }
    }
    SUBCASE("independent spins in a field")
    {
        const auto t = build_table({6, 0.0, 0.8}, DisorderSample::generate(6, 1, 0));
        for (int i = 1; i <= 6; ++i) CHECK(t.mean(i) == doctest::Approx(std::tanh(0.8)).epsilon(1e-14));
        CHECK(covariance(t, 1, 6) == doctest::Approx(0.0));
        CHECK(t12_moment2(t) == doctest::Approx(std::pow(1 - std::pow(std::tanh(0.8), 2), 2) / 6));
    }
    SUBCASE("two spins")
    {
        DisorderSample d(2);
        d.set_coupling(1, 2, -0.73);
        const ModelParams p{2, 0.9, 0.0};
        const auto t = build_table(p, d);
        const double expected = std::tanh(0.9 * -0.73 / std::sqrt(2.0));
        CHECK(t.corr(1, 2) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(t.mean(1) == doctest::Approx(0.0));
        CHECK(covariance(t, 1, 2) == doctest::Approx(expected));
        CHECK(symmetrized_covariance(t, 1, 2) == doctest::Approx(2 * expected));
    }
    SUBCASE("zero couplings with a field")
    {
        const auto t = build_table({5, 1.2, 0.4}, DisorderSample(5));
        for (int j = 2; j <= 5; ++j) CHECK(std::abs(covariance(t, 1, j)) < 1e-15);
    }
    CHECK_THROWS_AS(covariance(build_table({3, 0.2, 0.1}, DisorderSample(3)), 2, 2), ParameterError);
    CHECK_THROWS_AS(build_table({25, 0.2, 0.1}, DisorderSample(25)), CapacityError);
}

TEST_CASE("two-replica moments match the double enumeration")
{
    for (auto [n, beta, h] : {std::tuple{8, 0.3, 0.5}, {8, 1.1, 0.2}, {6, 0.5, 0.0}}) {
        const ModelParams p{n, beta, h};
        for (std::uint64_t k = 0; k < 3; ++k) {
            const auto d = DisorderSample::generate(n, 303, k);
            const auto t = build_table(p, d);
            for (double c : {0.0, 0.21927}) {
                const auto ref = oracle::two_replica(p, d, c);
                CHECK(std::abs(overlap_moment2(t, c) - ref.overlap_dev2) < 1e-12);
                CHECK(std::abs(t12_moment2(t) - ref.t12_sq) < 1e-12);
            }
        }
    }
    const auto flat = build_table({7, 0.0, 0.0}, DisorderSample(7));
    CHECK(overlap_moment2(flat, 0.0) == doctest::Approx(1.0 / 7));
    CHECK(t12_moment2(flat) == doctest::Approx(1.0 / 7));

    // a single frozen configuration: all correlations are one
    GibbsTable frozen = build_table({4, 0.0, 0.0}, DisorderSample(4));
    std::fill(frozen.pair_corr.begin(), frozen.pair_corr.end(), 1.0);
    std::fill(frozen.means.begin(), frozen.means.end(), 1.0);
    CHECK(overlap_moment2(frozen, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("t = 0 tables factorize")
{
    const auto ctx = make_context(0.3, 0.5);
    for (int n : {3, 6, 10}) {
        const ModelParams p{n, 0.3, 0.5};
        for (std::uint64_t k = 0; k < 10; ++k) {
            const auto d = DisorderSample::generate(n, 9, k);
            const auto t = build_table(p, d, 0.0, ctx);
            CHECK(std::abs(t.mean(n) - std::tanh(ctx.y(d.cavity_z()))) < 1e-12);
            for (int i = 1; i < n; ++i) CHECK(std::abs(t.corr(i, n) - t.mean(i) * t.mean(n)) < 1e-12);
        }
    }
    const auto t1 = build_table({5, 0.3, 0.5}, DisorderSample::generate(5, 2, 2), 1.0, ctx);
    const auto t1b = build_table({5, 0.3, 0.5}, DisorderSample::generate(5, 2, 2));
    CHECK(t1.log_z == doctest::Approx(t1b.log_z));
    CHECK_THROWS_AS(build_table({5, 0.4, 0.5}, DisorderSample(5), 0.5, ctx), ParameterError);
}

TEST_CASE("moment estimates")
{
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const auto e = MomentEstimate::from_samples(xs);
    CHECK(e.mean == doctest::Approx(2.5));
    CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(e.n_samples == 4);
    CHECK_THROWS_AS(MomentEstimate::from_samples(std::vector<double>{}), ParameterError);
}

TEST_CASE("disorder averages")
{
    const auto ctx = make_context(0.3, 0.5);
    const ModelParams p{6, 0.3, 0.5};

    const auto one = nu_estimate(p, 1.0, [](const GibbsTable&) { return 1.0; }, 50, 1, ctx);
    CHECK(one.mean == 1.0);
    CHECK(one.std_error == 0.0);
    CHECK(one.n_samples == 50);
    CHECK_THROWS_AS(nu_estimate(p, 1.0, [](const GibbsTable&) { return 1.0; }, 0, 1, ctx), ParameterError);

    const auto flat = make_context(0.3, 0.0);
    const auto m1 = nu_estimate({6, 0.3, 0.0}, 1.0, [](const GibbsTable& t) { return t.mean(1); }, 400, 5, flat);
    CHECK(std::abs(m1.mean) < 3 * m1.std_error + 1e-15);

    const auto cavity = nu_estimate(p, 0.0, [](const GibbsTable& t) { return t.mean(6); }, 4000, 6, ctx);
    CHECK(std::abs(cavity.mean - mean_tanh_y(ctx)) < 3 * cavity.std_error);

    // identical bits for any worker count
    const TableObservable obs = [](const GibbsTable& t) { return t12_moment2(t); };
    const auto a = nu_estimate({10, 0.3, 0.5}, 1.0, obs, 64, 42, ctx, 1);
    const auto b = nu_estimate({10, 0.3, 0.5}, 1.0, obs, 64, 42, ctx, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("quadrature oracle")
{
    const auto ctx = make_context(0.3, 0.5);
    const TableObservable one = [](const GibbsTable&) { return 1.0; };
    CHECK(nu_quadrature({3, 0.3, 0.5}, 0.5, one, ctx) == doctest::Approx(1.0).epsilon(1e-13));

    const auto zero = make_context(0.0, 0.5);
    const TableObservable m1 = [](const GibbsTable& t) { return t.mean(1); };
    const double free_value = build_table({3, 0.0, 0.5}, DisorderSample(3)).mean(1);
    CHECK(nu_quadrature({3, 0.0, 0.5}, 0.4, m1, zero) == doctest::Approx(free_value).epsilon(1e-14));

    const double beta = 0.8;
    const auto flat = make_context(beta, 0.0);
    const double quad = nu_quadrature({2, beta, 0.0}, 1.0, [](const GibbsTable& t) { return t.corr(1, 2); }, flat, 40);
    const double simpson = oracle::gauss_expect([&](double g) { return std::tanh(beta * g / std::sqrt(2.0)); });
    const double even = oracle::gauss_expect([&](double g) { return g * std::tanh(beta * g / std::sqrt(2.0)); });
    CHECK(std::abs(quad - simpson) < 1e-12);  // odd integrand
    const double quad_even = nu_quadrature({2, beta, 0.0}, 1.0, [](const GibbsTable& t) { return t.disorder.coupling(1, 2) * t.corr(1, 2); }, flat, 40);
    CHECK(std::abs(quad_even - even) < 1e-10);

    CHECK_THROWS(nu_quadrature({4, 0.3, 0.5}, 0.5, one, ctx));
    CHECK_THROWS(nu_quadrature({3, 0.3, 0.5}, 0.5, one, ctx, 41));
}

TEST_CASE("quadrature and Monte Carlo agree")
{
    const auto ctx = make_context(0.3, 0.5);
    const std::vector<TableObservable> observables = {
        [](const GibbsTable& t) { return t.mean(1); },
        [](const GibbsTable& t) { return t.corr(1, t.n()); },
        [](const GibbsTable& t) { return t.n() * t12_moment2(t); },
        [](const GibbsTable& t) { return overlap_moment2(t, 0.2); },
    };
    for (int n : {2, 3}) {
        const ModelParams p{n, 0.3, 0.5};
        for (double t : {0.0, 0.5, 1.0}) {
            for (std::size_t k = 0; k < observables.size(); ++k) {
                const double quad = nu_quadrature(p, t, observables[k], ctx, 12);
                const auto mc = nu_estimate(p, t, observables[k], 4000, 1000 + k, ctx);
                CAPTURE(n);
                CAPTURE(t);
                CAPTURE(k);
                // some observables are disorder-free here, so allow round-off
                CHECK(std::abs(quad - mc.mean) < 3 * mc.std_error + 1e-12);
            }
        }
    }
}

TEST_CASE("interpolated averages stay below the comparison bound")
{
    const double beta = 0.3;
    const auto ctx = make_context(beta, 0.5);
    const ModelParams p{6, beta, 0.5};
    const std::vector<TableObservable> observables = {
        [](const GibbsTable& t) { return 0.5 * (1 + t.corr(1, 2)); },
        [](const GibbsTable& t) { return 0.5 * (1 + t.mean(t.n())); },
        [](const GibbsTable& t) { return t.n() * t12_moment2(t); },
    };
    const double factor = std::exp(4 * beta * beta);
    for (const auto& f : observables) {
        const auto nu = nu_estimate(p, 1.0, f, 2000, 8, ctx);
        for (double t : {0.0, 0.25, 0.5, 0.75}) {
            const auto nut = nu_estimate(p, t, f, 2000, 8, ctx);
            CHECK(nut.mean <= factor * nu.mean + 3 * std::hypot(nut.std_error, factor * nu.std_error));
        }
    }
}
