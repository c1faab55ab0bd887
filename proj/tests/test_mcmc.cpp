#include "doctest.h"

#include <cmath>

#include "sklab/error.hpp"
#include "sklab/gibbs.hpp"
#include "sklab/mcmc.hpp"

using namespace sklab;

TEST_CASE("independent spins")
{
    const ModelParams p{8, 0.0, 0.6};
    const auto r = mcmc_estimate(p, DisorderSample::generate(8, 1, 0), 5000, 500, 17);
    for (int i = 1; i <= 8; ++i) CHECK(std::abs(r.mean(i) - std::tanh(0.6)) < 3.5 * r.means_se[i - 1]);
}

TEST_CASE("heat bath matches exact enumeration")
{
    const ModelParams p{12, 0.3, 0.5};
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto d = DisorderSample::generate(12, 2024, k);
        const auto exact = build_table(p, d);
        const auto r = mcmc_estimate(p, d, 11000, 1000, 900 + k);
        CHECK(r.measurement_sweeps == 10000);
        for (int i = 1; i <= 12; ++i) CHECK(std::abs(r.mean(i) - exact.mean(i)) < 4 * r.means_se[i - 1]);
        const auto cov = r.covariance(1, 12);
        CHECK(std::abs(cov.value - covariance(exact, 1, 12)) < 4 * cov.std_error);
    }
}

TEST_CASE("strong coupling still samples the right measure")
{
    const ModelParams p{6, 1.5, 0.2};
    const auto d = DisorderSample::generate(6, 5, 5);
    const auto exact = build_table(p, d);
    const auto r = mcmc_estimate(p, d, 40000, 2000, 3);
    for (int i = 1; i <= 6; ++i) {
        CHECK(std::abs(r.mean(i) - exact.mean(i)) < 4 * r.means_se[i - 1]);
        for (int j = i + 1; j <= 6; ++j) {
            CHECK(std::abs(r.corr(i, j) - exact.corr(i, j)) < 4 * r.pair_corr_se[(i - 1) * 6 + j - 1] + 1e-12);
        }
    }
}

TEST_CASE("fixed seed gives identical output")
{
    const ModelParams p{10, 0.4, 0.3};
    const auto d = DisorderSample::generate(10, 3, 3);
    const auto a = mcmc_estimate(p, d, 3000, 100, 99);
    const auto b = mcmc_estimate(p, d, 3000, 100, 99);
    const auto c = mcmc_estimate(p, d, 3000, 100, 98);
    CHECK(a.means == b.means);
    CHECK(a.pair_corr == b.pair_corr);
    CHECK(a.means_se == b.means_se);
    CHECK(a.means != c.means);
}

TEST_CASE("bad arguments")
{
    const ModelParams p{4, 0.4, 0.3};
    const auto d = DisorderSample::generate(4, 3, 3);
    CHECK_THROWS_AS(mcmc_estimate(p, d, 100, 100, 1), ParameterError);
    CHECK_THROWS_AS(mcmc_estimate(p, d, 100, 90, 1), ParameterError);
    CHECK_THROWS_AS(mcmc_estimate(p, DisorderSample(5), 1000, 10, 1), ParameterError);
    const auto r = mcmc_estimate(p, d, 1000, 10, 1);
    CHECK_THROWS_AS(r.covariance(2, 2), ParameterError);
}
