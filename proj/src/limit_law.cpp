#include "sklab/limit_law.hpp"

#include <algorithm>
#include <cmath>

#include "sklab/error.hpp"
#include "sklab/parallel.hpp"
#include "sklab/rng.hpp"

namespace sklab {
namespace {

constexpr std::size_t kChunkSize = std::size_t{1} << 16;

}  // namespace

double limit_scale(const AnalyticContext& ctx, bool symmetrized)
{
    const double denom = 1.0 - ctx.beta * ctx.beta * a_prime(1, ctx);
    if (denom <= 0.0) throw RegimeError("beta^2 A'_1 >= 1: outside the high-temperature regime");
    const double c = 2.0 * ctx.beta / std::sqrt(denom);
    return symmetrized ? c : 0.5 * c;
}

LimitSampleStats sample_limit(const AnalyticContext& ctx, std::size_t n, int p_max,
                              std::uint64_t seed, bool symmetrized, int threads)
{
    if (n < 2) throw ParameterError("need at least two samples");
    if (p_max < 1 || p_max > 16) throw ParameterError("p_max must be in [1, 16]");
    const double c = limit_scale(ctx, symmetrized);
    const int k_max = 2 * p_max;
    const double root_q = std::sqrt(ctx.q2);

    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<double>> sums(chunks, std::vector<double>(k_max, 0.0));
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        RandomStream rng(seed, chunk);
        const std::size_t begin = chunk * kChunkSize;
        const std::size_t end = std::min(n, begin + kChunkSize);
        auto& acc = sums[chunk];
        for (std::size_t k = begin; k < end; ++k) {
            const double z = rng.normal();
            const double t1 = std::tanh(ctx.beta * rng.normal() * root_q + ctx.h);
            const double t2 = std::tanh(ctx.beta * rng.normal() * root_q + ctx.h);
            const double x = c * z * (1.0 - t1 * t1) * (1.0 - t2 * t2);
            double power = 1.0;
            for (int p = 0; p < k_max; ++p) {
                power *= x;
                acc[p] += power;
            }
        }
    });

    LimitSampleStats out;
    out.n = n;
    out.power_means.assign(k_max, 0.0);
    for (const auto& acc : sums) {
        for (int p = 0; p < k_max; ++p) out.power_means[p] += acc[p];
    }
    for (double& m : out.power_means) m /= static_cast<double>(n);

    out.raw_moments.resize(p_max);
    out.std_errors.resize(p_max);
    const double nn = static_cast<double>(n);
    for (int p = 1; p <= p_max; ++p) {
        const double m = out.power_means[p - 1];
        const double m_sq = out.power_means[2 * p - 1];
        const double var = std::max(0.0, (m_sq - m * m) * nn / (nn - 1.0));
        out.raw_moments[p - 1] = m;
        out.std_errors[p - 1] = std::sqrt(var / nn);
    }
    return out;
}

RatioEstimate kurtosis_ratio(const LimitSampleStats& stats)
{
    if (stats.power_means.size() < 8) throw ParameterError("kurtosis needs p_max >= 4");
    const auto& m = stats.power_means;
    const double m2 = m[1], m4 = m[3], m6 = m[5], m8 = m[7];
    const double nn = static_cast<double>(stats.n);
    const double var2 = m4 - m2 * m2;
    const double var4 = m8 - m4 * m4;
    const double cov24 = m6 - m2 * m4;
    // gradient of m4 / m2^2 with respect to (m2, m4)
    const double d2 = -2.0 * m4 / (m2 * m2 * m2);
    const double d4 = 1.0 / (m2 * m2);
    const double var = d2 * d2 * var2 + d4 * d4 * var4 + 2.0 * d2 * d4 * cov24;
    return {m4 / (m2 * m2), std::sqrt(std::max(0.0, var) / nn)};
}

bool ComparisonReport::pass() const noexcept
{
    return std::all_of(series.begin(), series.end(), [](const SeriesVerdict& s) { return s.pass; });
}

nlohmann::json ComparisonReport::to_json() const
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : series) {
        nlohmann::json entries = nlohmann::json::array();
        for (std::size_t k = 0; k < s.entries.size(); ++k) {
            const auto& [n, est] = s.entries[k];
            entries.push_back({{"N", n},
                               {"mean", est.mean},
                               {"std_error", est.std_error},
                               {"n_disorder", est.n_samples},
                               {"gap", s.gaps[k]}});
        }
        out.push_back({{"order", s.order},
                       {"theory", s.theory},
                       {"entries", entries},
                       {"tolerance", s.tolerance},
                       {"monotone", s.monotone},
                       {"verdict", s.pass ? "pass" : "fail"}});
    }
    return out;
}

ComparisonReport compare_moments(const std::vector<MomentSeries>& input,
                                 const TolerancePolicy& policy)
{
    const MomentSeries* second = nullptr;
    for (const auto& s : input) {
        if (s.order == 2) second = &s;
    }

    ComparisonReport report;
    for (const auto& s : input) {
        if (s.order < 1) throw ParameterError("moment order must be positive");
        SeriesVerdict v;
        v.order = s.order;
        v.theory = s.theory;
        v.entries = s.entries;
        std::sort(v.entries.begin(), v.entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 1; k < v.entries.size(); ++k) {
            if (v.entries[k].first == v.entries[k - 1].first) {
                throw ParameterError("duplicate N in moment series");
            }
        }
        if (v.entries.size() < 2) throw ParameterError("moment series needs at least two N values");

        for (const auto& [n, est] : v.entries) v.gaps.push_back(est.mean - s.theory);
        const auto& last = v.entries.back().second;
        const double last_gap = v.gaps.back();

        if (s.order % 2 == 0) {
            const auto rel = policy.relative.find(s.order);
            if (rel == policy.relative.end()) {
                throw ParameterError("no relative tolerance for order " + std::to_string(s.order));
            }
            v.tolerance = std::max({rel->second * std::abs(s.theory),
                                    policy.se_multiplier * last.std_error, policy.absolute_floor});
            v.within_tolerance = std::abs(last_gap) <= v.tolerance;
        } else {
            if (second == nullptr) throw ParameterError("odd orders need the order-2 series");
            const int n_last = v.entries.back().first;
            const auto it = std::find_if(second->entries.begin(), second->entries.end(),
                                         [&](const auto& e) { return e.first == n_last; });
            if (it == second->entries.end()) {
                throw ParameterError("order-2 series lacks N = " + std::to_string(n_last));
            }
            const double m2 = std::max(0.0, it->second.mean);
            v.tolerance = policy.odd_fraction * std::pow(m2, 0.5 * s.order) +
                          policy.odd_se_multiplier * last.std_error + policy.absolute_floor;
            v.within_tolerance = std::abs(last.mean) < v.tolerance;
        }

        v.monotone_required = std::find(policy.monotone_orders.begin(), policy.monotone_orders.end(),
                                        s.order) != policy.monotone_orders.end();
        for (std::size_t k = 1; k < v.entries.size(); ++k) {
            const double se_prev = v.entries[k - 1].second.std_error;
            const double se_next = v.entries[k].second.std_error;
            const double slack = std::hypot(se_prev, se_next) + policy.absolute_floor;
            if (std::abs(v.gaps[k]) > std::abs(v.gaps[k - 1]) + slack) v.monotone = false;
        }
        v.pass = v.within_tolerance && (!v.monotone_required || v.monotone);
        report.series.push_back(std::move(v));
    }
    return report;
}

}  // namespace sklab
