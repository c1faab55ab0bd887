#pragma once

// Monte Carlo sampler for the limit variable c z U_1 U_2 and the harness that
// compares finite-N moment estimates against its exact moments.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sklab/analytics.hpp"
#include "sklab/gibbs.hpp"

namespace sklab {

struct LimitSampleStats {
    std::vector<double> raw_moments;  ///< index p-1 holds the order-p moment
    std::vector<double> std_errors;
    std::size_t n = 0;
    /// Sample means of x^k for k = 1..2 p_max, used for derived statistics.
    std::vector<double> power_means;

    double moment(int p) const { return raw_moments.at(p - 1); }
    double std_error(int p) const { return std_errors.at(p - 1); }
};

/// Scale of the symmetrized limit variable, 2 beta / sqrt(1 - beta^2 A'_1).
/// The plain variable uses half of it.
double limit_scale(const AnalyticContext& ctx, bool symmetrized);

/// Draws n samples of c z U_1 U_2 with U_k = 1 - tanh^2(beta z_k sqrt(q2) + h).
/// Samples are produced in fixed chunks seeded by derive_seed(seed, chunk)
/// and reduced in chunk order, so the result does not depend on `threads`.
/// Throws RegimeError when beta^2 A'_1 >= 1.
LimitSampleStats sample_limit(const AnalyticContext& ctx, std::size_t n, int p_max,
                              std::uint64_t seed, bool symmetrized = true, int threads = 1);

struct RatioEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// m4 / m2^2 with a delta-method standard error. Needs p_max >= 4.
RatioEstimate kurtosis_ratio(const LimitSampleStats& stats);

struct MomentSeries {
    int order = 0;
    double theory = 0.0;
    std::vector<std::pair<int, MomentEstimate>> entries;  ///< (N, estimate), any order
};

struct TolerancePolicy {
    /// Relative tolerance for even orders at the largest N.
    std::map<int, double> relative = {{2, 0.15}, {4, 0.25}, {6, 0.35}};
    double se_multiplier = 3.0;
    double absolute_floor = 1e-12;
    /// Orders whose gap must be non-increasing in N up to the combined SE.
    std::vector<int> monotone_orders = {2};
    double odd_fraction = 0.2;
    double odd_se_multiplier = 4.0;
};

struct SeriesVerdict {
    int order = 0;
    double theory = 0.0;
    std::vector<std::pair<int, MomentEstimate>> entries;  ///< sorted by N
    std::vector<double> gaps;                             ///< empirical - theory
    double tolerance = 0.0;  ///< bound applied at the largest N
    bool within_tolerance = false;
    bool monotone = true;
    bool monotone_required = false;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<SeriesVerdict> series;
    bool pass() const noexcept;
    nlohmann::json to_json() const;
};

/// Even orders: |gap| at the largest N within max(rel |theory|, k SE, floor).
/// Odd orders: |moment| < odd_fraction m2^{p/2} + odd_se_multiplier SE at the
/// largest N, with m2 taken from the order-2 series (which must be present).
/// Each series needs at least two distinct N values.
ComparisonReport compare_moments(const std::vector<MomentSeries>& series,
                                 const TolerancePolicy& policy = {});

}  // namespace sklab
