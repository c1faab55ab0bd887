// sklab: command-line front end for the SK covariance experiments.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sklab/error.hpp"
#include "sklab/experiments.hpp"
#include "sklab/parallel.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kRegime = 3, kBadInput = 4, kNumeric = 5 };

int report(const sklab::CheckTable& table)
{
    std::cout << table.format();
    return table.pass() ? kOk : kCheckFailed;
}

void print_scan(const sklab::ScanResult& r)
{
    std::printf("q2 = %.12g   N nu(T12^2) limit = %.12g\n", r.q2, r.overlap_theory);
    std::printf("%4s %6s %16s %14s %16s\n", "N", "order", "empirical", "std_error", "theory");
    for (const auto& point : r.points) {
        for (std::size_t p = 1; p <= point.moments.size(); ++p) {
            std::printf("%4d %6zu %16.8g %14.4g %16.8g\n", point.n, p, point.moments[p - 1].mean,
                        point.moments[p - 1].std_error, r.theory[p - 1]);
        }
    }
    std::printf("%4s %22s %22s\n", "N", "N nu[(R12-q2)^2]", "N nu(T12^2)");
    for (const auto& point : r.points) {
        std::printf("%4d %12.6g +- %-8.2g %12.6g +- %-8.2g\n", point.n, point.overlap_dev2.mean,
                    point.overlap_dev2.std_error, point.t12_sq.mean, point.t12_sq.std_error);
    }
    for (const auto& s : r.report.series) {
        std::printf("order %d: %s (gap at largest N %.4g, tolerance %.4g%s)\n", s.order,
                    s.pass ? "PASS" : "FAIL", s.gaps.back(), s.tolerance,
                    s.monotone_required ? (s.monotone ? ", gap non-increasing" : ", gap grows")
                                        : "");
    }
    std::printf("verdict: %s\n", r.report.pass() ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-N checks of the SK spin-covariance limit law"};
    app.require_subcommand(1);
    // "--h" is the external field, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    const int env_threads = sklab::default_thread_count();

    double beta = 0.3, h = 0.5;
    auto* solve = app.add_subcommand("solve-q2", "Solve for q2 and print the limit constants");
    solve->add_option("--beta", beta, "inverse temperature")->required();
    solve->add_option("--h", h, "external field")->required();

    std::string suite;
    std::uint64_t verify_seed = sklab::kDefaultSeed;
    int verify_threads = env_threads;
    auto* verify = app.add_subcommand("verify", "Run an invariant suite");
    verify->add_option("suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember(sklab::kVerifySuites));
    verify->add_option("--seed", verify_seed, "master seed");
    verify->add_option("--threads", verify_threads, "worker count")->check(CLI::PositiveNumber);

    std::string config_path;
    std::vector<std::string> overrides;
    int scan_threads = 0;
    bool write_files = true;
    auto* scan = app.add_subcommand("covariance-scan", "Moments of sqrt(N) gamma~ against the limit");
    scan->add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    scan->add_option("--set", overrides, "override as key=value (repeatable)");
    scan->add_option("--threads", scan_threads, "worker count")->check(CLI::PositiveNumber);
    scan->add_flag("!--no-write", write_files, "skip writing CSV/JSON files");

    sklab::LimitMomentsConfig lm;
    lm.threads = env_threads;
    auto* limit = app.add_subcommand("limit-moments", "Sample the limit variable");
    limit->add_option("--beta", lm.beta, "inverse temperature");
    limit->add_option("--h", lm.h, "external field");
    limit->add_option("--samples", lm.samples, "sample count")->check(CLI::PositiveNumber);
    limit->add_option("--p-max", lm.p_max, "highest moment order")->check(CLI::Range(1, 8));
    limit->add_option("--seed", lm.seed, "seed");
    limit->add_option("--threads", lm.threads, "worker count")->check(CLI::PositiveNumber);

    sklab::McmcCheckConfig mc;
    auto* mcmc = app.add_subcommand("mcmc-check", "Heat-bath estimates against exact enumeration");
    mcmc->add_option("--N", mc.n, "site count")->check(CLI::Range(2, 24));
    mcmc->add_option("--beta", mc.beta, "inverse temperature");
    mcmc->add_option("--h", mc.h, "external field");
    mcmc->add_option("--seed", mc.seed, "seed");
    mcmc->add_option("--sweeps", mc.sweeps, "total sweeps including burn-in");
    mcmc->add_option("--burn-in", mc.burn_in, "discarded sweeps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            std::cout << sklab::solve_q2_report(beta, h);
            return kOk;
        }
        if (*verify) return report(sklab::run_verify(suite, verify_seed, verify_threads));
        if (*limit) return report(sklab::run_limit_moments(lm));
        if (*mcmc) return report(sklab::run_mcmc_check(mc));
        if (*scan) {
            sklab::RunConfig cfg;
            cfg.threads = env_threads;
            if (!config_path.empty()) cfg = sklab::RunConfig::load(config_path, cfg);
            for (const auto& kv : overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw sklab::ParameterError("--set expects key=value");
                cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (scan_threads > 0) cfg.threads = scan_threads;
            const auto result = sklab::run_covariance_scan(cfg);
            print_scan(result);
            if (write_files) {
                sklab::write_scan_outputs(result, cfg.output_dir);
                std::cout << "wrote " << cfg.output_dir.string() << "/covariance_scan.{csv,json}\n";
            }
            return result.report.pass() ? kOk : kCheckFailed;
        }
    } catch (const sklab::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return kRegime;
    } catch (const sklab::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
