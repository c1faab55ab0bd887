#pragma once

#include <cstdint>
#include <vector>

#include "sklab/model.hpp"

namespace sklab {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Heat-bath estimates of <s_i> and <s_i s_j> with batch-means errors.
struct McmcResult {
    int n = 0;
    long measurement_sweeps = 0;
    std::vector<double> means;
    std::vector<double> means_se;
    std::vector<double> pair_corr;     ///< row-major N x N
    std::vector<double> pair_corr_se;  ///< row-major N x N

    /// Per-batch averages; batch_means[b][i-1], batch_corr[b][(i-1)N + j-1].
    std::vector<std::vector<double>> batch_means;
    std::vector<std::vector<double>> batch_corr;

    double mean(int i) const { return means.at(i - 1); }
    double corr(int i, int j) const { return pair_corr.at((i - 1) * n + (j - 1)); }

    /// gamma_ij with a delete-one-batch jackknife error.
    Estimate covariance(int i, int j) const;
};

/// Glauber single-site heat-bath dynamics for G_N (t = 1), sites updated in
/// order 1..N each sweep. The first `burn_in` of the `n_sweeps` total sweeps
/// are discarded; the rest are split into `n_batches` equal batches.
/// Bit-identical output for a fixed seed.
McmcResult mcmc_estimate(const ModelParams& params, const DisorderSample& disorder,
                         long n_sweeps, long burn_in, std::uint64_t seed, int n_batches = 50);

}  // namespace sklab
