#pragma once

// Exact Gibbs measures by enumeration, replica expectations, and disorder
// averages nu_t(f) = E<f>_t, estimated by Monte Carlo or, for N <= 3, by
// tensor Gauss-Hermite quadrature over every disorder coordinate.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sklab/analytics.hpp"
#include "sklab/model.hpp"

namespace sklab {

inline constexpr int kMaxEnumerationSites = 24;

/// Exact Gibbs distribution G_{N,t} for one disorder sample.
struct GibbsTable {
    ModelParams params;
    DisorderSample disorder;
    double t = 1.0;
    std::vector<double> log_weights;  ///< -H_{N,t}(sigma), indexed by configuration word
    double log_z = 0.0;
    std::vector<double> means;       ///< <s_i>, index i-1
    std::vector<double> pair_corr;   ///< <s_i s_j>, row-major N x N, unit diagonal

    int n() const noexcept { return params.n; }
    double mean(int i) const { return means.at(i - 1); }
    double corr(int i, int j) const;
    double probability(std::uint64_t config) const;

    /// <prod_{i in mask} s_i> for every mask in [0, 2^N). Requires N <= 24.
    std::vector<double> spin_moments() const;
};

/// Enumerates all 2^N configurations of -H_{N,t}. Requires N <= 24
/// (CapacityError otherwise). The context supplies q2 for t < 1 and must
/// match (beta, h).
GibbsTable build_table(const ModelParams& params, const DisorderSample& disorder, double t,
                       const AnalyticContext& ctx);

/// t = 1 table; no analytic context needed.
GibbsTable build_table(const ModelParams& params, const DisorderSample& disorder);

/// gamma_ij = <s_i s_j> - <s_i><s_j>; i != j.
double covariance(const GibbsTable& table, int i, int j);

/// gamma~_ij = <s~_i s~_j> with s~ = s^1 - s^2, equal to 2 gamma_ij.
double symmetrized_covariance(const GibbsTable& table, int i, int j);

/// <(R_12 - c)^2> over two independent replicas:
/// <R^2> - 2c<R> + c^2, <R^2> = N^-2 sum_ij <s_i s_j>^2, <R> = N^-1 sum_i <s_i>^2.
double overlap_moment2(const GibbsTable& table, double centered_at);

/// <T_12^2> = N^-2 sum_ij (<s_i s_j> - <s_i><s_j>)^2.
double t12_moment2(const GibbsTable& table);

/// Mean, standard error (sample sd / sqrt(n)), and sample count.
struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;

    static MomentEstimate from_samples(std::span<const double> samples);
};

using TableObservable = std::function<double(const GibbsTable&)>;

/// Values of every observable on n_disorder independent samples
/// DisorderSample::generate(N, master_seed, k), k = 0..n_disorder-1.
/// Result is [observable][sample], independent of the worker count.
std::vector<std::vector<double>> sample_observables(const ModelParams& params, double t,
                                                    std::span<const TableObservable> observables,
                                                    std::size_t n_disorder,
                                                    std::uint64_t master_seed,
                                                    const AnalyticContext& ctx, int threads);

/// Monte Carlo estimate of nu_t(observable).
MomentEstimate nu_estimate(const ModelParams& params, double t, const TableObservable& observable,
                           std::size_t n_disorder, std::uint64_t master_seed,
                           const AnalyticContext& ctx, int threads = 1);

inline constexpr int kMaxQuadratureSites = 3;
inline constexpr int kMaxNodesPerDimension = 40;
inline constexpr int kDefaultNodesPerDimension = 20;

/// Deterministic nu_t(observable) for N <= 3: tensor Gauss-Hermite over the
/// N(N-1)/2 couplings and the cavity z. Dimensions whose coefficient
/// vanishes (z at t = 1 or q2 = 0, g_{iN} at t = 0, all at beta = 0) are
/// collapsed to a single node.
double nu_quadrature(const ModelParams& params, double t, const TableObservable& observable,
                     const AnalyticContext& ctx, int nodes_per_dim = kDefaultNodesPerDimension);

}  // namespace sklab
