#pragma once

// Sherrington-Kirkpatrick model ingredients: parameters, Gaussian disorder,
// spin configurations, the Hamiltonian and its smart-path interpolation, and
// the overlap family.
//
// Site indices are 1-based everywhere in the public API. Site i maps to bit
// i-1 of a configuration word; a set bit is spin +1.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sklab {

struct AnalyticContext;

struct ModelParams {
    int n = 2;          ///< site count N >= 2
    double beta = 0.0;  ///< inverse temperature
    double h = 0.0;     ///< external field

    void validate() const;  // throws ParameterError

    /// beta^- = beta sqrt((N-1)/N), the cavity system's inverse temperature.
    double beta_minus() const noexcept;
};

/// Couplings g_{i,j}, i < j, stored row-major in a flat triangle, plus the
/// auxiliary Gaussian z of the smart path.
class DisorderSample
{
  public:
    DisorderSample() = default;

    /// All couplings zero, cavity_z zero.
    explicit DisorderSample(int n);

    /// Takes ownership of n(n-1)/2 couplings in row-major triangle order.
    DisorderSample(int n, std::vector<double> couplings, double cavity_z);

    /// Sample drawn from substream `index` of `master_seed`: couplings in
    /// row-major order, then cavity_z.
    static DisorderSample generate(int n, std::uint64_t master_seed, std::uint64_t index);

    int n() const noexcept { return n_; }

    /// g(i, j) for i != j, symmetric.
    double coupling(int i, int j) const;
    void set_coupling(int i, int j, double value);

    std::span<const double> couplings() const noexcept { return couplings_; }
    double cavity_z() const noexcept { return cavity_z_; }
    void set_cavity_z(double z) noexcept { cavity_z_ = z; }

    static std::size_t pair_count(int n) noexcept
    {
        return static_cast<std::size_t>(n) * (n - 1) / 2;
    }

    /// Flat index of the pair (i, j), 1 <= i < j <= n.
    static std::size_t pair_index(int n, int i, int j) noexcept
    {
        return static_cast<std::size_t>(i - 1) * (2 * n - i) / 2 + (j - i - 1);
    }

    friend bool operator==(const DisorderSample&, const DisorderSample&) = default;

  private:
    int n_ = 0;
    std::vector<double> couplings_;
    double cavity_z_ = 0.0;
};

/// One CSV line: N, then the couplings row-major, then cavity_z.
std::string disorder_to_csv(const DisorderSample& d);
DisorderSample disorder_from_csv(const std::string& line);

/// Binary dump: little-endian int32 N, then the couplings and cavity_z as
/// IEEE-754 doubles.
void write_disorder_binary(std::ostream& os, const DisorderSample& d);
DisorderSample read_disorder_binary(std::istream& is);

/// Spins in {-1, +1}^N packed into a 64-bit word.
class SpinConfiguration
{
  public:
    SpinConfiguration() = default;
    SpinConfiguration(int n, std::uint64_t bits);
    static SpinConfiguration from_spins(std::span<const int> spins);

    int n() const noexcept { return n_; }
    std::uint64_t bits() const noexcept { return bits_; }

    /// +1 or -1 at 1-based site i.
    int spin(int i) const;

    /// Global flip sigma -> -sigma.
    SpinConfiguration flipped() const noexcept;

    friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

  private:
    int n_ = 0;
    std::uint64_t bits_ = 0;
};

/// Sequence of replicas sharing the same N.
class ReplicaTuple
{
  public:
    explicit ReplicaTuple(std::vector<SpinConfiguration> configs);

    std::size_t size() const noexcept { return configs_.size(); }
    int n() const noexcept { return configs_.front().n(); }

    /// 1-based replica access.
    const SpinConfiguration& operator[](int l) const;

  private:
    std::vector<SpinConfiguration> configs_;
};

/// -H_N(sigma) = beta/sqrt(N) sum_{i<j} g_ij s_i s_j + h sum_i s_i.
double hamiltonian(const SpinConfiguration& sigma, const ModelParams& params,
                   const DisorderSample& disorder);

/// Smart-path -H_{N,t}(sigma): the (N-1)-site system at beta^- plus
/// eps (sqrt(t) g(rho) + sqrt(1-t) beta z sqrt(q2) + h), eps = sigma_N.
double interpolated_hamiltonian(const SpinConfiguration& sigma, double t,
                                const ModelParams& params, const DisorderSample& disorder,
                                const AnalyticContext& ctx);

/// Quadratic form equivalent to -H_{N,t}: -H = sum_{i<j} J_ij s_i s_j + sum_i f_i s_i.
/// `couplings` is dense N x N symmetric with zero diagonal (row-major).
struct SpinSystem {
    int n = 0;
    std::vector<double> couplings;
    std::vector<double> fields;

    double coupling(int i0, int j0) const noexcept { return couplings[i0 * n + j0]; }
};

/// t = 1 gives the plain Hamiltonian; t < 1 requires q2 from the context.
SpinSystem interpolated_system(const ModelParams& params, const DisorderSample& disorder,
                               double t, double q2);

/// R_{1,2} = (1/N) sum_i s_i^1 s_i^2.
double overlap(const SpinConfiguration& s1, const SpinConfiguration& s2);

/// R^-_{1,2}: sites 1..N-1 only, still divided by N.
double overlap_minus(const SpinConfiguration& s1, const SpinConfiguration& s2);

/// R'_{1,2} = N/(N-1) R^-_{1,2}, the overlap of the first N-1 sites.
double overlap_prime(const SpinConfiguration& s1, const SpinConfiguration& s2);

/// R_{1,2} - q2.
double r_dot(const SpinConfiguration& s1, const SpinConfiguration& s2, double q2);

/// R(s~^r, s~^s) with s~^r = sigma^{2r-1} - sigma^{2r}; r, s are 1-based
/// replica-pair indices.
double tilde_overlap(const ReplicaTuple& tuple, int r, int s);

/// Components of R_{1,2} - q2 = T12 + T1 + T2 + T around a mean vector b.
struct TDecomposition {
    double t12 = 0.0;  ///< R(s1 - b, s2 - b)
    double t1 = 0.0;   ///< R(s1 - b, b)
    double t2 = 0.0;   ///< R(s2 - b, b)
    double t = 0.0;    ///< R(b, b) - q2

    double sum() const noexcept { return t12 + t1 + t2 + t; }
};

TDecomposition t_decomposition(const SpinConfiguration& s1, const SpinConfiguration& s2,
                               std::span<const double> b, double q2);

}  // namespace sklab
