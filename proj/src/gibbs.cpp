#include "sklab/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "sklab/error.hpp"
#include "sklab/parallel.hpp"

namespace sklab {
namespace {

inline double spin_of(std::uint64_t word, int bit) noexcept
{
    return ((word >> bit) & 1u) ? 1.0 : -1.0;
}

// In-place Walsh-Hadamard transform followed by the sign fix that turns
// sum_x p(x) (-1)^{|x & m|} into sum_x p(x) prod_{i in m} s_i.
void walsh_moments(std::vector<double>& p)
{
    const std::size_t size = p.size();
    for (std::size_t len = 1; len < size; len <<= 1) {
        for (std::size_t start = 0; start < size; start += 2 * len) {
            for (std::size_t j = start; j < start + len; ++j) {
                const double a = p[j];
                const double b = p[j + len];
                p[j] = a + b;
                p[j + len] = a - b;
            }
        }
    }
    for (std::size_t m = 0; m < size; ++m) {
        if (std::popcount(m) % 2 == 1) p[m] = -p[m];
    }
}

// Exact enumeration of sum_{i<j} J_ij s_i s_j + sum_i f_i s_i.
//
// Sites split into a low block (bits 0..L-1, itself halved into a1 | a2)
// and a high block b. For fixed b the energy is
//   E_hh(b) + E_ll(a) + lin1_b(a1) + lin2_b(a2),
// so each configuration costs three additions, and the marginal sums needed
// for first and second spin moments factor the same way.
GibbsTable enumerate(const ModelParams& params, const DisorderSample& disorder, double t,
                     const SpinSystem& sys)
{
    const int n = sys.n;
    const int low = std::min(n, 12);
    const int low1 = low / 2;
    const int low2 = low - low1;
    const int high = n - low;
    const std::size_t n_low = std::size_t{1} << low;
    const std::size_t n_a1 = std::size_t{1} << low1;
    const std::size_t n_a2 = std::size_t{1} << low2;
    const std::size_t n_high = std::size_t{1} << high;

    GibbsTable table;
    table.params = params;
    table.disorder = disorder;
    table.t = t;
    table.log_weights.resize(std::size_t{1} << n);

    std::vector<double> e_ll(n_low, 0.0);
    for (std::size_t a = 0; a < n_low; ++a) {
        double e = 0.0;
        for (int i = 0; i < low; ++i) {
            const double si = spin_of(a, i);
            for (int j = i + 1; j < low; ++j) e += sys.coupling(i, j) * si * spin_of(a, j);
        }
        e_ll[a] = e;
    }

    std::vector<double> e_hh(n_high);
    std::vector<double> lin1(n_high * n_a1);
    std::vector<double> lin2(n_high * n_a2);
    std::vector<double> field(low);
    for (std::size_t b = 0; b < n_high; ++b) {
        double e = 0.0;
        for (int j = 0; j < high; ++j) {
            const double sj = spin_of(b, j);
            e += sys.fields[low + j] * sj;
            for (int k = j + 1; k < high; ++k) e += sys.coupling(low + j, low + k) * sj * spin_of(b, k);
        }
        e_hh[b] = e;
        for (int i = 0; i < low; ++i) {
            double c = sys.fields[i];
            for (int j = 0; j < high; ++j) c += sys.coupling(i, low + j) * spin_of(b, j);
            field[i] = c;
        }
        for (std::size_t a1 = 0; a1 < n_a1; ++a1) {
            double v = 0.0;
            for (int i = 0; i < low1; ++i) v += field[i] * spin_of(a1, i);
            lin1[b * n_a1 + a1] = v;
        }
        for (std::size_t a2 = 0; a2 < n_a2; ++a2) {
            double v = 0.0;
            for (int k = 0; k < low2; ++k) v += field[low1 + k] * spin_of(a2, k);
            lin2[b * n_a2 + a2] = v;
        }
    }

    double max_lw = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n_high; ++b) {
        double* out = table.log_weights.data() + (b << low);
        const double* l1 = lin1.data() + b * n_a1;
        const double* l2 = lin2.data() + b * n_a2;
        for (std::size_t a2 = 0; a2 < n_a2; ++a2) {
            const double base = e_hh[b] + l2[a2];
            const std::size_t row = a2 << low1;
            for (std::size_t a1 = 0; a1 < n_a1; ++a1) {
                const double lw = base + e_ll[row | a1] + l1[a1];
                out[row | a1] = lw;
                max_lw = std::max(max_lw, lw);
            }
        }
    }

    std::vector<double> p_low(n_low, 0.0);
    std::vector<double> p_high(n_high, 0.0);
    std::vector<double> cross(static_cast<std::size_t>(low) * high, 0.0);
    std::vector<double> col(n_a1);
    std::vector<double> row_sum(n_a2);
    std::vector<double> m_low(low);
    for (std::size_t b = 0; b < n_high; ++b) {
        const double* lw = table.log_weights.data() + (b << low);
        std::fill(col.begin(), col.end(), 0.0);
        double block = 0.0;
        for (std::size_t a2 = 0; a2 < n_a2; ++a2) {
            const std::size_t row = a2 << low1;
            double rs = 0.0;
            for (std::size_t a1 = 0; a1 < n_a1; ++a1) {
                const double p = std::exp(lw[row | a1] - max_lw);
                col[a1] += p;
                rs += p;
                p_low[row | a1] += p;
            }
            row_sum[a2] = rs;
            block += rs;
        }
        p_high[b] = block;
        if (high == 0) continue;
        for (int i = 0; i < low1; ++i) {
            double m = 0.0;
            for (std::size_t a1 = 0; a1 < n_a1; ++a1) m += spin_of(a1, i) * col[a1];
            m_low[i] = m;
        }
        for (int k = 0; k < low2; ++k) {
            double m = 0.0;
            for (std::size_t a2 = 0; a2 < n_a2; ++a2) m += spin_of(a2, k) * row_sum[a2];
            m_low[low1 + k] = m;
        }
        for (int j = 0; j < high; ++j) {
            const double sj = spin_of(b, j);
            for (int i = 0; i < low; ++i) cross[i * high + j] += sj * m_low[i];
        }
    }

    double z = 0.0;
    for (double v : p_high) z += v;
    table.log_z = max_lw + std::log(z);

    walsh_moments(p_low);
    walsh_moments(p_high);
    const double inv_z = 1.0 / z;

    table.means.resize(n);
    table.pair_corr.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        table.means[i] = (i < low) ? p_low[std::size_t{1} << i] * inv_z
                                   : p_high[std::size_t{1} << (i - low)] * inv_z;
        table.pair_corr[i * n + i] = 1.0;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v;
            if (j < low) {
                v = p_low[(std::size_t{1} << i) | (std::size_t{1} << j)];
            } else if (i >= low) {
                v = p_high[(std::size_t{1} << (i - low)) | (std::size_t{1} << (j - low))];
            } else {
                v = cross[i * high + (j - low)];
            }
            v *= inv_z;
            table.pair_corr[i * n + j] = v;
            table.pair_corr[j * n + i] = v;
        }
    }
    return table;
}

void check_context_matches(const ModelParams& params, const AnalyticContext& ctx)
{
    if (ctx.beta != params.beta || ctx.h != params.h) {
        throw ParameterError("analytic context was solved for different (beta, h)");
    }
}

}  // namespace

double GibbsTable::corr(int i, int j) const
{
    if (i < 1 || j < 1 || i > n() || j > n()) throw ParameterError("site index out of range");
    return pair_corr[static_cast<std::size_t>(i - 1) * n() + (j - 1)];
}

double GibbsTable::probability(std::uint64_t config) const
{
    if (config >= log_weights.size()) throw ParameterError("configuration out of range");
    return std::exp(log_weights[config] - log_z);
}

std::vector<double> GibbsTable::spin_moments() const
{
    std::vector<double> p(log_weights.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::exp(log_weights[k] - log_z);
    walsh_moments(p);
    return p;
}

GibbsTable build_table(const ModelParams& params, const DisorderSample& disorder, double t,
                       const AnalyticContext& ctx)
{
    params.validate();
    if (params.n > kMaxEnumerationSites) {
        throw CapacityError("exact enumeration is limited to N <= 24");
    }
    check_context_matches(params, ctx);
    return enumerate(params, disorder, t, interpolated_system(params, disorder, t, ctx.q2));
}

GibbsTable build_table(const ModelParams& params, const DisorderSample& disorder)
{
    params.validate();
    if (params.n > kMaxEnumerationSites) {
        throw CapacityError("exact enumeration is limited to N <= 24");
    }
    return enumerate(params, disorder, 1.0, interpolated_system(params, disorder, 1.0, 0.0));
}

double covariance(const GibbsTable& table, int i, int j)
{
    if (i == j) throw ParameterError("covariance requires distinct sites");
    return table.corr(i, j) - table.mean(i) * table.mean(j);
}

double symmetrized_covariance(const GibbsTable& table, int i, int j)
{
    return 2.0 * covariance(table, i, j);
}

double overlap_moment2(const GibbsTable& table, double centered_at)
{
    const int n = table.n();
    double r2 = 0.0;
    for (double c : table.pair_corr) r2 += c * c;
    double r1 = 0.0;
    for (double m : table.means) r1 += m * m;
    const double nn = static_cast<double>(n);
    r2 /= nn * nn;
    r1 /= nn;
    return r2 - 2.0 * centered_at * r1 + centered_at * centered_at;
}

double t12_moment2(const GibbsTable& table)
{
    const int n = table.n();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double g = table.pair_corr[i * n + j] - table.means[i] * table.means[j];
            acc += g * g;
        }
    }
    return acc / (static_cast<double>(n) * n);
}

MomentEstimate MomentEstimate::from_samples(std::span<const double> samples)
{
    if (samples.empty()) throw ParameterError("no samples");
    MomentEstimate est;
    est.n_samples = samples.size();
    double sum = 0.0;
    for (double x : samples) sum += x;
    est.mean = sum / samples.size();
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - est.mean) * (x - est.mean);
        const double var = ss / (samples.size() - 1);
        est.std_error = std::sqrt(var / samples.size());
    }
    return est;
}

std::vector<std::vector<double>> sample_observables(const ModelParams& params, double t,
                                                    std::span<const TableObservable> observables,
                                                    std::size_t n_disorder,
                                                    std::uint64_t master_seed,
                                                    const AnalyticContext& ctx, int threads)
{
    if (n_disorder == 0) throw ParameterError("n_disorder must be positive");
    params.validate();
    if (params.n > kMaxEnumerationSites) {
        throw CapacityError("exact enumeration is limited to N <= 24");
    }
    check_context_matches(params, ctx);
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("t must lie in [0, 1]");

    std::vector<std::vector<double>> values(observables.size(), std::vector<double>(n_disorder));
    parallel_for(n_disorder, threads, [&](std::size_t k) {
        const auto disorder = DisorderSample::generate(params.n, master_seed, k);
        const auto table = build_table(params, disorder, t, ctx);
        for (std::size_t o = 0; o < observables.size(); ++o) values[o][k] = observables[o](table);
    });
    return values;
}

MomentEstimate nu_estimate(const ModelParams& params, double t, const TableObservable& observable,
                           std::size_t n_disorder, std::uint64_t master_seed,
                           const AnalyticContext& ctx, int threads)
{
    const TableObservable obs[] = {observable};
    const auto values = sample_observables(params, t, obs, n_disorder, master_seed, ctx, threads);
    return MomentEstimate::from_samples(values.front());
}

double nu_quadrature(const ModelParams& params, double t, const TableObservable& observable,
                     const AnalyticContext& ctx, int nodes_per_dim)
{
    params.validate();
    if (params.n > kMaxQuadratureSites) {
        throw CapacityError("nu_quadrature is limited to N <= 3");
    }
    if (nodes_per_dim < 1 || nodes_per_dim > kMaxNodesPerDimension) {
        throw CapacityError("nu_quadrature allows at most 40 nodes per dimension");
    }
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("t must lie in [0, 1]");
    check_context_matches(params, ctx);

    const int n = params.n;
    const std::size_t pairs = DisorderSample::pair_count(n);
    const auto rule = gauss_hermite_rule(nodes_per_dim);

    // Dimension d < pairs is coupling d (row-major); d == pairs is cavity z.
    std::vector<bool> active(pairs + 1);
    for (int i = 1; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            active[DisorderSample::pair_index(n, i, j)] = params.beta > 0.0 && (j < n || t > 0.0);
        }
    }
    active[pairs] = params.beta > 0.0 && t < 1.0 && ctx.q2 > 0.0;

    std::vector<std::size_t> dims;
    for (std::size_t d = 0; d <= pairs; ++d) {
        if (active[d]) dims.push_back(d);
    }

    DisorderSample disorder(n);
    std::vector<std::size_t> index(dims.size(), 0);
    std::vector<double> coords(pairs + 1, 0.0);
    double total = 0.0;
    for (;;) {
        double weight = 1.0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            coords[dims[k]] = rule.nodes[index[k]];
            weight *= rule.weights[index[k]];
        }
        disorder = DisorderSample(n, std::vector<double>(coords.begin(), coords.begin() + pairs),
                                  coords[pairs]);
        total += weight * observable(build_table(params, disorder, t, ctx));

        std::size_t k = 0;
        while (k < dims.size() && ++index[k] == static_cast<std::size_t>(nodes_per_dim)) {
            index[k] = 0;
            ++k;
        }
        if (k == dims.size()) break;
    }
    return total;
}

}  // namespace sklab
