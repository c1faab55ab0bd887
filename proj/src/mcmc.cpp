#include "sklab/mcmc.hpp"

#include <cmath>

#include "sklab/error.hpp"
#include "sklab/rng.hpp"

namespace sklab {
namespace {

// Standard error of the mean of per-batch values.
double batch_se(const std::vector<std::vector<double>>& batches, std::size_t k, double mean)
{
    const std::size_t b = batches.size();
    double ss = 0.0;
    for (const auto& row : batches) ss += (row[k] - mean) * (row[k] - mean);
    return std::sqrt(ss / (b - 1) / b);
}

}  // namespace

McmcResult mcmc_estimate(const ModelParams& params, const DisorderSample& disorder,
                         long n_sweeps, long burn_in, std::uint64_t seed, int n_batches)
{
    params.validate();
    if (disorder.n() != params.n) throw ParameterError("disorder size does not match N");
    if (burn_in < 0 || n_sweeps <= burn_in) throw ParameterError("n_sweeps must exceed burn_in");
    if (n_batches < 2) throw ParameterError("need at least two batches");
    const long measured = n_sweeps - burn_in;
    if (measured < n_batches) throw ParameterError("fewer measurement sweeps than batches");

    const int n = params.n;
    const auto sys = interpolated_system(params, disorder, 1.0, 0.0);
    RandomStream rng(seed);

    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = rng.uniform() < 0.5 ? -1 : 1;

    auto sweep = [&] {
        for (int i = 0; i < n; ++i) {
            double field = sys.fields[i];
            const double* row = sys.couplings.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) field += row[j] * s[j];
            // P(s_i = +1) = e^f / (e^f + e^-f)
            const double p_up = 1.0 / (1.0 + std::exp(-2.0 * field));
            s[i] = rng.uniform() < p_up ? 1 : -1;
        }
    };

    for (long k = 0; k < burn_in; ++k) sweep();

    McmcResult out;
    out.n = n;
    out.measurement_sweeps = measured;
    out.batch_means.assign(n_batches, std::vector<double>(n, 0.0));
    out.batch_corr.assign(n_batches, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));

    const long per_batch = measured / n_batches;
    const long used = per_batch * n_batches;
    for (long k = 0; k < used; ++k) {
        sweep();
        const auto b = static_cast<std::size_t>(k / per_batch);
        auto& bm = out.batch_means[b];
        auto& bc = out.batch_corr[b];
        for (int i = 0; i < n; ++i) {
            bm[i] += s[i];
            for (int j = 0; j < n; ++j) bc[i * n + j] += s[i] * s[j];
        }
    }
    // Leftover sweeps (measured % n_batches) are run but not recorded.
    for (long k = used; k < measured; ++k) sweep();

    for (auto& bm : out.batch_means) {
        for (double& v : bm) v /= per_batch;
    }
    for (auto& bc : out.batch_corr) {
        for (double& v : bc) v /= per_batch;
    }

    out.means.assign(n, 0.0);
    out.pair_corr.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int b = 0; b < n_batches; ++b) {
        for (int i = 0; i < n; ++i) out.means[i] += out.batch_means[b][i] / n_batches;
        for (std::size_t k = 0; k < out.pair_corr.size(); ++k) {
            out.pair_corr[k] += out.batch_corr[b][k] / n_batches;
        }
    }
    out.means_se.resize(n);
    for (int i = 0; i < n; ++i) out.means_se[i] = batch_se(out.batch_means, i, out.means[i]);
    out.pair_corr_se.resize(out.pair_corr.size());
    for (std::size_t k = 0; k < out.pair_corr.size(); ++k) {
        out.pair_corr_se[k] = batch_se(out.batch_corr, k, out.pair_corr[k]);
    }
    return out;
}

Estimate McmcResult::covariance(int i, int j) const
{
    if (i < 1 || j < 1 || i > n || j > n || i == j) throw ParameterError("bad covariance sites");
    const std::size_t b = batch_means.size();
    const std::size_t ij = static_cast<std::size_t>(i - 1) * n + (j - 1);
    double sum_i = 0.0, sum_j = 0.0, sum_ij = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
        sum_i += batch_means[k][i - 1];
        sum_j += batch_means[k][j - 1];
        sum_ij += batch_corr[k][ij];
    }
    auto gamma = [](double mi, double mj, double cij) { return cij - mi * mj; };
    const double full = gamma(sum_i / b, sum_j / b, sum_ij / b);

    std::vector<double> leave_one(b);
    double jk_mean = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
        const double d = static_cast<double>(b - 1);
        leave_one[k] = gamma((sum_i - batch_means[k][i - 1]) / d, (sum_j - batch_means[k][j - 1]) / d,
                             (sum_ij - batch_corr[k][ij]) / d);
        jk_mean += leave_one[k] / b;
    }
    double ss = 0.0;
    for (double v : leave_one) ss += (v - jk_mean) * (v - jk_mean);
    Estimate est;
    // Bias-corrected jackknife estimate.
    est.value = b * full - (b - 1) * jk_mean;
    est.std_error = std::sqrt(static_cast<double>(b - 1) / b * ss);
    return est;
}

}  // namespace sklab
