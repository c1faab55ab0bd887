#include "sklab/model.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sklab/analytics.hpp"
#include "sklab/error.hpp"
#include "sklab/rng.hpp"

namespace sklab {
namespace {

constexpr int kMaxSites = 64;

std::uint64_t site_mask(int n) noexcept
{
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void require_same_size(const SpinConfiguration& a, const SpinConfiguration& b)
{
    if (a.n() != b.n() || a.n() < 1) throw ParameterError("configurations differ in size");
}

// sum_{i in sites} s1_i s2_i over the masked sites.
int agreement(const SpinConfiguration& s1, const SpinConfiguration& s2, std::uint64_t mask)
{
    const int differ = std::popcount((s1.bits() ^ s2.bits()) & mask);
    return std::popcount(mask) - 2 * differ;
}

}  // namespace

void ModelParams::validate() const
{
    if (n < 2 || n > kMaxSites) throw ParameterError("site count must be in [2, 64]");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
    if (!(h >= 0.0) || !std::isfinite(h)) throw ParameterError("h must be finite and >= 0");
}

double ModelParams::beta_minus() const noexcept
{
    return beta * std::sqrt(static_cast<double>(n - 1) / n);
}

DisorderSample::DisorderSample(int n) : DisorderSample(n, std::vector<double>(pair_count(n)), 0.0)
{
}

DisorderSample::DisorderSample(int n, std::vector<double> couplings, double cavity_z)
    : n_(n), couplings_(std::move(couplings)), cavity_z_(cavity_z)
{
    if (n < 2 || n > kMaxSites) throw ParameterError("site count must be in [2, 64]");
    if (couplings_.size() != pair_count(n)) {
        throw ParameterError("expected N(N-1)/2 couplings");
    }
}

DisorderSample DisorderSample::generate(int n, std::uint64_t master_seed, std::uint64_t index)
{
    if (n < 2 || n > kMaxSites) throw ParameterError("site count must be in [2, 64]");
    RandomStream rng(master_seed, index);
    std::vector<double> g(pair_count(n));
    for (double& x : g) x = rng.normal();
    const double z = rng.normal();
    return DisorderSample(n, std::move(g), z);
}

double DisorderSample::coupling(int i, int j) const
{
    if (i == j || i < 1 || j < 1 || i > n_ || j > n_) throw ParameterError("bad coupling index");
    if (i > j) std::swap(i, j);
    return couplings_[pair_index(n_, i, j)];
}

void DisorderSample::set_coupling(int i, int j, double value)
{
    if (i == j || i < 1 || j < 1 || i > n_ || j > n_) throw ParameterError("bad coupling index");
    if (i > j) std::swap(i, j);
    couplings_[pair_index(n_, i, j)] = value;
}

std::string disorder_to_csv(const DisorderSample& d)
{
    std::string out = std::to_string(d.n());
    char buf[32];
    for (double g : d.couplings()) {
        std::snprintf(buf, sizeof buf, ",%.17g", g);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g", d.cavity_z());
    out += buf;
    return out;
}

DisorderSample disorder_from_csv(const std::string& line)
{
    std::istringstream is(line);
    std::string field;
    std::vector<double> values;
    int n = 0;
    bool first = true;
    while (std::getline(is, field, ',')) {
        try {
            if (first) {
                n = std::stoi(field);
                first = false;
            } else {
                values.push_back(std::stod(field));
            }
        } catch (const std::exception&) {
            throw ParameterError("malformed disorder CSV field: " + field);
        }
    }
    if (n < 2 || values.size() != DisorderSample::pair_count(n) + 1) {
        throw ParameterError("disorder CSV has the wrong number of fields");
    }
    const double z = values.back();
    values.pop_back();
    return DisorderSample(n, std::move(values), z);
}

namespace {

template<class T>
void put_le(std::ostream& os, T value)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const U bits = std::bit_cast<U>(value);
    char bytes[sizeof(U)];
    for (std::size_t k = 0; k < sizeof(U); ++k) bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
    os.write(bytes, sizeof(U));
}

template<class T>
T get_le(std::istream& is)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    unsigned char bytes[sizeof(U)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
        throw ParameterError("truncated disorder binary");
    }
    U bits = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) bits |= static_cast<U>(bytes[k]) << (8 * k);
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_disorder_binary(std::ostream& os, const DisorderSample& d)
{
    put_le<std::int32_t>(os, d.n());
    for (double g : d.couplings()) put_le<double>(os, g);
    put_le<double>(os, d.cavity_z());
}

DisorderSample read_disorder_binary(std::istream& is)
{
    const auto n = get_le<std::int32_t>(is);
    if (n < 2 || n > kMaxSites) throw ParameterError("bad site count in disorder binary");
    std::vector<double> g(DisorderSample::pair_count(n));
    for (double& x : g) x = get_le<double>(is);
    const double z = get_le<double>(is);
    return DisorderSample(n, std::move(g), z);
}

SpinConfiguration::SpinConfiguration(int n, std::uint64_t bits) : n_(n), bits_(bits)
{
    if (n < 1 || n > kMaxSites) throw ParameterError("site count must be in [1, 64]");
    if ((bits & ~site_mask(n)) != 0) throw ParameterError("configuration bits beyond N");
}

SpinConfiguration SpinConfiguration::from_spins(std::span<const int> spins)
{
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] == 1) {
            bits |= std::uint64_t{1} << i;
        } else if (spins[i] != -1) {
            throw ParameterError("spins must be +1 or -1");
        }
    }
    return SpinConfiguration(static_cast<int>(spins.size()), bits);
}

int SpinConfiguration::spin(int i) const
{
    if (i < 1 || i > n_) throw ParameterError("site index out of range");
    return ((bits_ >> (i - 1)) & 1u) ? 1 : -1;
}

SpinConfiguration SpinConfiguration::flipped() const noexcept
{
    SpinConfiguration out = *this;
    out.bits_ = ~bits_ & site_mask(n_);
    return out;
}

ReplicaTuple::ReplicaTuple(std::vector<SpinConfiguration> configs) : configs_(std::move(configs))
{
    if (configs_.empty()) throw ParameterError("replica tuple must be non-empty");
    for (const auto& c : configs_) {
        if (c.n() != configs_.front().n()) throw ParameterError("replicas differ in size");
    }
}

const SpinConfiguration& ReplicaTuple::operator[](int l) const
{
    if (l < 1 || static_cast<std::size_t>(l) > configs_.size()) {
        throw ParameterError("replica index out of range");
    }
    return configs_[l - 1];
}

SpinSystem interpolated_system(const ModelParams& params, const DisorderSample& disorder,
                               double t, double q2)
{
    params.validate();
    if (disorder.n() != params.n) throw ParameterError("disorder size does not match N");
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("t must lie in [0, 1]");

    const int n = params.n;
    SpinSystem sys;
    sys.n = n;
    sys.couplings.assign(static_cast<std::size_t>(n) * n, 0.0);
    sys.fields.assign(n, params.h);

    const double scale = params.beta / std::sqrt(static_cast<double>(n));
    const double cavity_scale = (t == 1.0) ? scale : scale * std::sqrt(t);
    for (int i = 1; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double g = disorder.couplings()[DisorderSample::pair_index(n, i, j)];
            const double value = (j == n) ? cavity_scale * g : scale * g;
            sys.couplings[(i - 1) * n + (j - 1)] = value;
            sys.couplings[(j - 1) * n + (i - 1)] = value;
        }
    }
    if (t < 1.0 && q2 > 0.0) {
        sys.fields[n - 1] += std::sqrt(1.0 - t) * params.beta * disorder.cavity_z() * std::sqrt(q2);
    }
    return sys;
}

double hamiltonian(const SpinConfiguration& sigma, const ModelParams& params,
                   const DisorderSample& disorder)
{
    params.validate();
    if (sigma.n() != params.n || disorder.n() != params.n) {
        throw ParameterError("dimension mismatch in hamiltonian");
    }
    const int n = params.n;
    double pair_sum = 0.0;
    for (int i = 1; i < n; ++i) {
        const int si = sigma.spin(i);
        for (int j = i + 1; j <= n; ++j) {
            pair_sum += disorder.couplings()[DisorderSample::pair_index(n, i, j)] * si * sigma.spin(j);
        }
    }
    const int magnetization = 2 * std::popcount(sigma.bits()) - n;
    return params.beta / std::sqrt(static_cast<double>(n)) * pair_sum + params.h * magnetization;
}

double interpolated_hamiltonian(const SpinConfiguration& sigma, double t,
                                const ModelParams& params, const DisorderSample& disorder,
                                const AnalyticContext& ctx)
{
    params.validate();
    if (sigma.n() != params.n || disorder.n() != params.n) {
        throw ParameterError("dimension mismatch in interpolated_hamiltonian");
    }
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("t must lie in [0, 1]");
    if (ctx.beta != params.beta || ctx.h != params.h) {
        throw ParameterError("analytic context was solved for different (beta, h)");
    }

    const int n = params.n;
    const double scale = params.beta / std::sqrt(static_cast<double>(n));
    const double cavity_scale = params.beta_minus() / std::sqrt(static_cast<double>(n - 1));

    // Cavity system on rho = (s_1..s_{N-1}) at beta^-.
    double rho_pairs = 0.0;
    double cavity_field = 0.0;
    int rho_magnetization = 0;
    for (int i = 1; i < n; ++i) {
        const int si = sigma.spin(i);
        rho_magnetization += si;
        for (int j = i + 1; j < n; ++j) {
            rho_pairs += disorder.couplings()[DisorderSample::pair_index(n, i, j)] * si * sigma.spin(j);
        }
        cavity_field += disorder.couplings()[DisorderSample::pair_index(n, i, n)] * si;
    }
    const double g_rho = scale * cavity_field;
    double g_t = g_rho;
    if (t < 1.0) {
        g_t = std::sqrt(t) * g_rho
              + std::sqrt(1.0 - t) * params.beta * disorder.cavity_z() * std::sqrt(ctx.q2);
    }
    const double eps = sigma.spin(n);
    return cavity_scale * rho_pairs + params.h * rho_magnetization + eps * (g_t + params.h);
}

double overlap(const SpinConfiguration& s1, const SpinConfiguration& s2)
{
    require_same_size(s1, s2);
    return static_cast<double>(agreement(s1, s2, site_mask(s1.n()))) / s1.n();
}

double overlap_minus(const SpinConfiguration& s1, const SpinConfiguration& s2)
{
    require_same_size(s1, s2);
    if (s1.n() < 2) throw ParameterError("overlap_minus requires N >= 2");
    return static_cast<double>(agreement(s1, s2, site_mask(s1.n() - 1))) / s1.n();
}

double overlap_prime(const SpinConfiguration& s1, const SpinConfiguration& s2)
{
    require_same_size(s1, s2);
    if (s1.n() < 2) throw ParameterError("overlap_prime requires N >= 2");
    return static_cast<double>(agreement(s1, s2, site_mask(s1.n() - 1))) / (s1.n() - 1);
}

double r_dot(const SpinConfiguration& s1, const SpinConfiguration& s2, double q2)
{
    return overlap(s1, s2) - q2;
}

double tilde_overlap(const ReplicaTuple& tuple, int r, int s)
{
    if (r < 1 || s < 1) throw ParameterError("replica-pair index must be >= 1");
    if (static_cast<std::size_t>(2 * std::max(r, s)) > tuple.size()) {
        throw ParameterError("tuple lacks the replicas needed for tilde_overlap");
    }
    const auto& a = tuple[2 * r - 1];
    const auto& b = tuple[2 * r];
    const auto& c = tuple[2 * s - 1];
    const auto& d = tuple[2 * s];
    const int n = tuple.n();
    long long total = 0;
    for (int i = 1; i <= n; ++i) {
        total += static_cast<long long>(a.spin(i) - b.spin(i)) * (c.spin(i) - d.spin(i));
    }
    return static_cast<double>(total) / n;
}

TDecomposition t_decomposition(const SpinConfiguration& s1, const SpinConfiguration& s2,
                               std::span<const double> b, double q2)
{
    require_same_size(s1, s2);
    const int n = s1.n();
    if (b.size() != static_cast<std::size_t>(n)) throw ParameterError("mean vector has wrong size");
    TDecomposition out;
    double bb = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double bi = b[i - 1];
        const double d1 = s1.spin(i) - bi;
        const double d2 = s2.spin(i) - bi;
        out.t12 += d1 * d2;
        out.t1 += d1 * bi;
        out.t2 += d2 * bi;
        bb += bi * bi;
    }
    out.t12 /= n;
    out.t1 /= n;
    out.t2 /= n;
    out.t = bb / n - q2;
    return out;
}

}  // namespace sklab
