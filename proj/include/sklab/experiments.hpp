#pragma once

// Experiment drivers behind the command-line tool. Every driver is a pure
// function of its configuration and seed; text and file output is produced
// from the returned structures.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sklab/analytics.hpp"
#include "sklab/gibbs.hpp"
#include "sklab/limit_law.hpp"

namespace sklab {

inline constexpr int kMaxScanOrder = 6;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct RunConfig {
    double beta = 0.3;
    double h = 0.5;
    std::vector<int> n_list = {8, 12, 16, 20};
    std::size_t n_disorder = 10000;
    int p_max = 4;
    std::uint64_t master_seed = kDefaultSeed;
    int threads = 1;
    std::filesystem::path output_dir = ".";

    /// N in [2, 24] for every entry, p_max in [2, 6], n_disorder > 0.
    void validate() const;

    /// Sets one key (beta, h, N_list, n_disorder, p_max, master_seed,
    /// threads, output_dir). N_list is comma separated.
    void set(const std::string& key, const std::string& value);

    /// Flat key=value text applied on top of `base`; blank lines and '#'
    /// comments are skipped.
    static RunConfig from_text(const std::string& text, RunConfig base);
    static RunConfig from_text(const std::string& text);
    static RunConfig load(const std::filesystem::path& path, RunConfig base);
    static RunConfig load(const std::filesystem::path& path);

    nlohmann::json to_json() const;
};

/// Estimates collected at one system size.
struct ScanPoint {
    int n = 0;
    std::vector<MomentEstimate> moments;  ///< order p at index p-1, of sqrt(N) gamma~_{1,N}
    MomentEstimate overlap_dev2;          ///< N nu[(R_12 - q2)^2]
    MomentEstimate t12_sq;                ///< N nu(T_12^2)
};

struct ScanResult {
    RunConfig config;
    double q2 = 0.0;
    double overlap_theory = 0.0;  ///< A'_1 / (1 - beta^2 A'_1)
    std::vector<double> theory;   ///< by order; zero for odd orders
    std::vector<ScanPoint> points;
    ComparisonReport report;

    /// Columns N,order,empirical,std_error,theory.
    std::string moments_csv() const;
    /// Columns observable_name,N,beta,h,t,mean,std_error,n_samples,master_seed.
    std::string observables_csv() const;
    nlohmann::json to_json() const;
};

/// Seed of the disorder stream used at size N.
std::uint64_t scan_seed(std::uint64_t master, int n);

/// Exact tables for n_disorder samples at each N, moments of sqrt(N) gamma~_{1,N}
/// up to p_max, and the overlap fluctuation observables.
ScanResult run_covariance_scan(const RunConfig& config, const TolerancePolicy& policy = {});

/// Writes covariance_scan.csv, covariance_scan.json and observables.csv.
void write_scan_outputs(const ScanResult& result, const std::filesystem::path& dir);

struct CheckRow {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string detail;
};

struct CheckTable {
    std::string title;
    std::vector<CheckRow> rows;

    bool pass() const noexcept;
    std::string format() const;
};

inline const std::vector<std::string> kVerifySuites = {"combinatorics", "smartpath", "derivative",
                                                       "expineq"};

/// Runs one named invariant suite. Unknown names throw ParameterError.
CheckTable run_verify(const std::string& suite, std::uint64_t seed = kDefaultSeed,
                      int threads = 1);

CheckTable verify_combinatorics();
CheckTable verify_smartpath(std::uint64_t seed, int n = 8, std::size_t samples = 200);
CheckTable verify_derivative(double beta = 0.3, double h = 0.5);
CheckTable verify_expineq(std::uint64_t seed, int threads, std::size_t samples = 1000);

/// q2, its residual, A'_1..A'_3, sigma^2 and the limit moments.
std::string solve_q2_report(double beta, double h);

struct LimitMomentsConfig {
    double beta = 0.3;
    double h = 0.5;
    std::size_t samples = 10000000;
    int p_max = 6;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

/// Sampler moments against the exact even moments, odd moments against 0,
/// and the kurtosis ratio against 3.
CheckTable run_limit_moments(const LimitMomentsConfig& config);

struct McmcCheckConfig {
    int n = 12;
    double beta = 0.3;
    double h = 0.5;
    std::uint64_t seed = kDefaultSeed;
    long sweeps = 11000;
    long burn_in = 1000;
    double z_bound = 4.0;
};

/// Per-site means and gamma_{1,N} from heat-bath dynamics, as z-scores
/// against exact enumeration on DisorderSample::generate(N, seed, 0).
CheckTable run_mcmc_check(const McmcCheckConfig& config);

}  // namespace sklab
