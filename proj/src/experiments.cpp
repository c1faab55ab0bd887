#include "sklab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sklab/combinatorics.hpp"
#include "sklab/error.hpp"
#include "sklab/mcmc.hpp"
#include "sklab/parallel.hpp"
#include "sklab/rng.hpp"
#include "sklab/smart_path.hpp"

namespace sklab {
namespace {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw ParameterError(key + ": not a finite number: '" + text + "'");
    }
    return v;
}

unsigned long long parse_unsigned(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!text.empty() && text.front() != '-') v = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ParameterError(key + ": not a non-negative integer: '" + text + "'");
    }
    return v;
}

CheckRow row(std::string name, double value, double bound, bool pass, std::string detail = {})
{
    return {std::move(name), value, bound, pass, std::move(detail)};
}

// |a - b| / se, or 0 when both agree exactly with no spread.
double z_score(double a, double b, double se)
{
    const double diff = std::abs(a - b);
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : INFINITY;
}

}  // namespace

void RunConfig::validate() const
{
    ModelParams{2, beta, h}.validate();
    if (n_list.empty()) throw ParameterError("N_list is empty");
    for (int n : n_list) {
        if (n < 2 || n > kMaxEnumerationSites) {
            throw ParameterError("N_list entries must lie in [2, 24], got " + std::to_string(n));
        }
    }
    if (n_disorder == 0) throw ParameterError("n_disorder must be positive");
    if (p_max < 2 || p_max > kMaxScanOrder) throw ParameterError("p_max must lie in [2, 6]");
    if (threads < 1) throw ParameterError("threads must be positive");
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "beta") {
        beta = parse_double(key, value);
    } else if (key == "h") {
        h = parse_double(key, value);
    } else if (key == "N_list") {
        std::vector<int> list;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto v = parse_unsigned(key, trim(item));
            if (v > 1000) throw ParameterError("N_list entry too large");
            list.push_back(static_cast<int>(v));
        }
        n_list = std::move(list);
    } else if (key == "n_disorder") {
        n_disorder = parse_unsigned(key, value);
    } else if (key == "p_max") {
        const auto v = parse_unsigned(key, value);
        if (v > 1000) throw ParameterError("p_max too large");
        p_max = static_cast<int>(v);
    } else if (key == "master_seed") {
        master_seed = parse_unsigned(key, value);
    } else if (key == "threads") {
        const auto v = parse_unsigned(key, value);
        if (v > 4096) throw ParameterError("threads too large");
        threads = static_cast<int>(v);
    } else if (key == "output_dir") {
        output_dir = value;
    } else {
        throw ParameterError("unknown config key '" + key + "'");
    }
}

RunConfig RunConfig::from_text(const std::string& text, RunConfig base)
{
    RunConfig cfg = std::move(base);
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), std::move(base));
}

RunConfig RunConfig::from_text(const std::string& text) { return from_text(text, RunConfig{}); }

RunConfig RunConfig::load(const std::filesystem::path& path) { return load(path, RunConfig{}); }

nlohmann::json RunConfig::to_json() const
{
    // threads and output_dir do not influence results and are left out.
    return {{"beta", beta},
            {"h", h},
            {"N_list", n_list},
            {"n_disorder", n_disorder},
            {"p_max", p_max},
            {"master_seed", master_seed}};
}

std::uint64_t scan_seed(std::uint64_t master, int n)
{
    return derive_seed(master, static_cast<std::uint64_t>(n));
}

ScanResult run_covariance_scan(const RunConfig& config, const TolerancePolicy& policy)
{
    config.validate();
    const auto ctx = make_context(config.beta, config.h);

    ScanResult out;
    out.config = config;
    out.q2 = ctx.q2;
    out.overlap_theory = overlap_fluctuation_variance(ctx);
    for (int p = 1; p <= config.p_max; ++p) {
        out.theory.push_back(p % 2 == 0 ? limit_even_moment(p / 2, ctx) : 0.0);
    }

    std::vector<int> sizes = config.n_list;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    for (int n : sizes) {
        const ModelParams params{n, config.beta, config.h};
        const double root_n = std::sqrt(static_cast<double>(n));
        const double q2 = ctx.q2;
        const std::vector<TableObservable> observables = {
            [n, root_n](const GibbsTable& t) { return root_n * symmetrized_covariance(t, 1, n); },
            [n, q2](const GibbsTable& t) { return n * overlap_moment2(t, q2); },
            [n](const GibbsTable& t) { return n * t12_moment2(t); },
        };
        const auto values = sample_observables(params, 1.0, observables, config.n_disorder,
                                               scan_seed(config.master_seed, n), ctx,
                                               config.threads);
        ScanPoint point;
        point.n = n;
        std::vector<double> powers(values[0].size());
        for (int p = 1; p <= config.p_max; ++p) {
            for (std::size_t k = 0; k < powers.size(); ++k) powers[k] = std::pow(values[0][k], p);
            point.moments.push_back(MomentEstimate::from_samples(powers));
        }
        point.overlap_dev2 = MomentEstimate::from_samples(values[1]);
        point.t12_sq = MomentEstimate::from_samples(values[2]);
        out.points.push_back(std::move(point));
    }

    std::vector<MomentSeries> series;
    for (int p = 1; p <= config.p_max; ++p) {
        MomentSeries s;
        s.order = p;
        s.theory = out.theory[p - 1];
        for (const auto& point : out.points) s.entries.emplace_back(point.n, point.moments[p - 1]);
        series.push_back(std::move(s));
    }
    out.report = compare_moments(series, policy);
    return out;
}

std::string ScanResult::moments_csv() const
{
    std::string csv = "N,order,empirical,std_error,theory\n";
    for (const auto& point : points) {
        for (std::size_t p = 1; p <= point.moments.size(); ++p) {
            const auto& m = point.moments[p - 1];
            csv += std::to_string(point.n) + "," + std::to_string(p) + "," + fmt17(m.mean) + "," +
                   fmt17(m.std_error) + "," + fmt17(theory[p - 1]) + "\n";
        }
    }
    return csv;
}

std::string ScanResult::observables_csv() const
{
    std::string csv = "observable_name,N,beta,h,t,mean,std_error,n_samples,master_seed\n";
    auto line = [&](const std::string& name, int n, const MomentEstimate& m) {
        csv += name + "," + std::to_string(n) + "," + fmt17(config.beta) + "," + fmt17(config.h) +
               ",1," + fmt17(m.mean) + "," + fmt17(m.std_error) + "," +
               std::to_string(m.n_samples) + "," + std::to_string(config.master_seed) + "\n";
    };
    for (const auto& point : points) {
        for (std::size_t p = 1; p <= point.moments.size(); ++p) {
            line("sqrtN_gamma_tilde_1N_pow" + std::to_string(p), point.n, point.moments[p - 1]);
        }
        line("N_overlap_dev2", point.n, point.overlap_dev2);
        line("N_t12_sq", point.n, point.t12_sq);
    }
    return csv;
}

nlohmann::json ScanResult::to_json() const
{
    nlohmann::json fluct = nlohmann::json::array();
    for (const auto& point : points) {
        fluct.push_back({{"N", point.n},
                         {"N_overlap_dev2", {{"mean", point.overlap_dev2.mean},
                                             {"std_error", point.overlap_dev2.std_error}}},
                         {"N_t12_sq", {{"mean", point.t12_sq.mean},
                                       {"std_error", point.t12_sq.std_error}}}});
    }
    return {{"config", config.to_json()},
            {"q2", q2},
            {"t12_theory", overlap_theory},
            {"moments", report.to_json()},
            {"fluctuations", fluct},
            {"verdict", report.pass() ? "pass" : "fail"}};
}

void write_scan_outputs(const ScanResult& result, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw ParameterError("cannot write " + (dir / name).string());
        out << text;
    };
    write("covariance_scan.csv", result.moments_csv());
    write("observables.csv", result.observables_csv());
    write("covariance_scan.json", result.to_json().dump(2) + "\n");
}

bool CheckTable::pass() const noexcept
{
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::string CheckTable::format() const
{
    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    std::string out = title + "\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "  %-*s  %13s  %13s  %s\n", static_cast<int>(width), "check",
                  "value", "bound", "result");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "  %-*s  %13.6g  %13.6g  %s", static_cast<int>(width),
                      r.name.c_str(), r.value, r.bound, r.pass ? "PASS" : "FAIL");
        out += buf;
        if (!r.detail.empty()) out += "  (" + r.detail + ")";
        out += "\n";
    }
    out += pass() ? "all checks passed\n" : "some checks FAILED\n";
    return out;
}

CheckTable verify_combinatorics()
{
    CheckTable table{"combinatorics", {}};
    const double ys[] = {-1.0, -0.3, 0.0, 0.7, 2.0};

    for (int p = 1; p <= 5; ++p) {
        double worst = 0.0;
        const std::uint64_t subsets = std::uint64_t{1} << (2 * p);
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            for (double y : ys) {
                const double scale = std::max(1.0, std::abs(f_sum_closed_form(p, mask, y)));
                worst = std::max(worst, std::abs(f_sum(p, mask, y) - f_sum_closed_form(p, mask, y)) / scale);
            }
        }
        table.rows.push_back(row("canonical sum closed form, p=" + std::to_string(p), worst, 1e-12,
                                 worst < 1e-12, "max relative deviation over all subsets"));
    }

    for (int q = 1; q <= 6; ++q) {
        const auto count = static_cast<double>(enumerate_pairings(q).size());
        const double expected = gaussian_even_moment(q);
        table.rows.push_back(row("pairing count, q=" + std::to_string(q), count, expected,
                                 count == expected, "(2q)!/(2^q q!)"));
    }

    // Swapping a_l for its partner flips the sign of F exactly when the
    // reference set contains both or neither element of doublet l.
    const double y = 0.7;
    for (int p = 1; p <= 5; ++p) {
        long violations = 0;
        const std::uint64_t subsets = std::uint64_t{1} << (2 * p);
        for (const auto& b : enumerate_canonical(p)) {
            const std::uint64_t bm = b.mask();
            for (std::uint64_t bhat = 0; bhat < subsets; ++bhat) {
                const double f = ((r_of_mask(bm) % 2) ? -1.0 : 1.0) * std::pow(y, std::popcount(bm ^ bhat));
                for (int l = 1; l <= p; ++l) {
                    const std::uint64_t pair = std::uint64_t{3} << (2 * (l - 1));
                    const std::uint64_t bl = bm ^ pair;
                    const double fl = ((r_of_mask(bl) % 2) ? -1.0 : 1.0) * std::pow(y, std::popcount(bl ^ bhat));
                    const bool same_membership = std::popcount(bhat & pair) != 1;
                    const bool flips = f == -fl;
                    if (flips != same_membership) ++violations;
                }
            }
        }
        table.rows.push_back(row("sign flip iff equal membership, p=" + std::to_string(p),
                                 static_cast<double>(violations), 0.0, violations == 0,
                                 "violations"));
    }
    return table;
}

CheckTable verify_smartpath(std::uint64_t seed, int n, std::size_t samples)
{
    const double beta = 0.3, h = 0.5;
    const auto ctx = make_context(beta, h);
    const ModelParams params{n, beta, h};
    const std::uint64_t configs = std::uint64_t{1} << n;

    double endpoint = 0.0, table_energy = 0.0, cavity = 0.0, factor = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto d = DisorderSample::generate(n, seed, k);
        const auto t1 = build_table(params, d, 1.0, ctx);
        for (std::uint64_t c = 0; c < configs; ++c) {
            const SpinConfiguration sigma(n, c);
            const double direct = hamiltonian(sigma, params, d);
            endpoint = std::max(endpoint, std::abs(interpolated_hamiltonian(sigma, 1.0, params, d, ctx) - direct));
            table_energy = std::max(table_energy, std::abs(t1.log_weights[c] - direct));
        }
        const auto t0 = build_table(params, d, 0.0, ctx);
        double total = 0.0;
        for (std::uint64_t c = 0; c < configs; ++c) total += t0.probability(c);
        norm = std::max(norm, std::abs(total - 1.0));
        cavity = std::max(cavity, std::abs(t0.mean(n) - std::tanh(ctx.y(d.cavity_z()))));
        for (int i = 1; i < n; ++i) {
            factor = std::max(factor, std::abs(t0.corr(i, n) - t0.mean(i) * t0.mean(n)));
        }
    }

    CheckTable table{"smartpath (N=" + std::to_string(n) + ", " + std::to_string(samples) +
                         " disorder samples, beta=0.3, h=0.5)",
                     {}};
    table.rows.push_back(row("t=1 interpolation equals H", endpoint, 1e-12, endpoint < 1e-12,
                             "max abs over configurations"));
    table.rows.push_back(row("t=1 table log-weights equal H", table_energy, 1e-12,
                             table_energy < 1e-12, "max abs over configurations"));
    table.rows.push_back(row("t=0 probabilities sum to 1", norm, 1e-12, norm < 1e-12));
    table.rows.push_back(row("<eps>_0 = th(Y)", cavity, 1e-12, cavity < 1e-12,
                             "max abs over samples"));
    table.rows.push_back(row("<s_i eps>_0 = <s_i>_0 <eps>_0", factor, 1e-12, factor < 1e-12,
                             "max abs over samples and sites"));
    return table;
}

CheckTable verify_derivative(double beta, double h)
{
    const int n = 3;
    const double step = 1e-3;
    const double tol = 1e-4;
    const auto ctx = make_context(beta, h);
    const ModelParams params{n, beta, h};

    struct Case {
        std::string name;
        ReplicaPolynomial f;
        int replicas;
    };
    const std::vector<Case> cases = {
        {"s_1", ReplicaPolynomial::spin(1, 1), 1},
        {"eps^1 eps^2", cavity_spin(1, n) * cavity_spin(2, n), 2},
        {"s_1^1 s_1^2", ReplicaPolynomial::spin(1, 1) * ReplicaPolynomial::spin(2, 1), 2},
    };

    CheckTable table{"derivative (N=3, beta=" + fmt6(beta) + ", h=" + fmt6(h) + ")", {}};
    for (const auto& c : cases) {
        for (double t : {0.25, 0.5, 0.75}) {
            const double fd = central_derivative(
                [&](double s) { return nu_polynomial(params, s, c.f, ctx); }, t, step);
            const double rhs = eq6_rhs(params, t, c.f, c.replicas, ctx);
            const double gap = std::abs(fd - rhs);
            table.rows.push_back(row("d/dt nu_t(" + c.name + ") at t=" + fmt6(t), gap, tol, gap < tol,
                                     "fd " + fmt6(fd) + " vs formula " + fmt6(rhs)));
        }
    }
    const auto thm = verify_thm33_q1(params, ctx);
    const double gap = std::abs(thm.lhs - thm.rhs);
    table.rows.push_back(row("first derivative at t=0, pair observable", gap, tol, gap < tol,
                             "fd " + fmt6(thm.lhs) + " vs " + fmt6(thm.rhs)));
    return table;
}

CheckTable verify_expineq(std::uint64_t seed, int threads, std::size_t samples)
{
    const double beta = 0.3, h = 0.5;
    const auto ctx = make_context(beta, h);
    CheckTable table{"expineq (beta=0.3, h=0.5, " + std::to_string(samples) + " disorder samples)",
                     {}};

    std::vector<MomentEstimate> scaled;
    const std::vector<int> sizes = {8, 12, 16, 20};
    for (int n : sizes) {
        const ModelParams params{n, beta, h};
        const double q2 = ctx.q2;
        scaled.push_back(nu_estimate(
            params, 1.0, [n, q2](const GibbsTable& t) { return n * overlap_moment2(t, q2); },
            samples, scan_seed(seed, n), ctx, threads));
    }
    const auto& first = scaled.front();
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const double bound = 1.2 * first.mean + 3.0 * std::hypot(first.std_error, scaled[k].std_error);
        table.rows.push_back(row("N nu[(R12-q2)^2], N=" + std::to_string(sizes[k]), scaled[k].mean,
                                 bound, scaled[k].mean <= bound,
                                 "se " + fmt6(scaled[k].std_error)));
    }

    // nu_t(f) <= exp(4 beta^2) nu(f) for a non-negative one-replica observable.
    const int n = 8;
    const ModelParams params{n, beta, h};
    const TableObservable f = [](const GibbsTable& t) { return 0.5 * (1.0 + t.corr(1, 2)); };
    const auto nu1 = nu_estimate(params, 1.0, f, samples, scan_seed(seed, n), ctx, threads);
    for (double t : {0.0, 0.5}) {
        const auto nut = nu_estimate(params, t, f, samples, scan_seed(seed, n), ctx, threads);
        const double bound = std::exp(4.0 * beta * beta) * nu1.mean +
                             3.0 * std::hypot(nut.std_error, std::exp(4.0 * beta * beta) * nu1.std_error);
        table.rows.push_back(row("nu_t((1+s_1 s_2)/2) comparison bound, t=" + fmt6(t), nut.mean,
                                 bound, nut.mean <= bound, "N=8"));
    }
    return table;
}

CheckTable run_verify(const std::string& suite, std::uint64_t seed, int threads)
{
    if (suite == "combinatorics") return verify_combinatorics();
    if (suite == "smartpath") return verify_smartpath(seed);
    if (suite == "derivative") return verify_derivative();
    if (suite == "expineq") return verify_expineq(seed, threads);
    throw ParameterError("unknown verify suite '" + suite + "'");
}

std::string solve_q2_report(double beta, double h)
{
    const auto ctx = make_context(beta, h);
    std::string out;
    auto line = [&](const std::string& key, double v) { out += key + " = " + fmt17(v) + "\n"; };
    line("beta", beta);
    line("h", h);
    line("q2", ctx.q2);
    line("residual", q2_residual(ctx));
    for (int q = 1; q <= 3; ++q) line("A'_" + std::to_string(q), a_prime(q, ctx));
    line("sigma_sq", sigma_sq(ctx));
    line("t12_variance", overlap_fluctuation_variance(ctx));
    for (int q = 1; q <= 3; ++q) {
        line("limit_moment_" + std::to_string(2 * q), limit_even_moment(q, ctx));
    }
    return out;
}

CheckTable run_limit_moments(const LimitMomentsConfig& config)
{
    const auto ctx = make_context(config.beta, config.h);
    const int p_max = std::max(config.p_max, 4);
    const auto stats = sample_limit(ctx, config.samples, p_max, config.seed, true, config.threads);

    CheckTable table{"limit-moments (beta=" + fmt6(config.beta) + ", h=" + fmt6(config.h) + ", " +
                         std::to_string(config.samples) + " samples)",
                     {}};
    for (int p = 1; p <= config.p_max; ++p) {
        const double theory = p % 2 == 0 ? limit_even_moment(p / 2, ctx) : 0.0;
        const double z = z_score(stats.moment(p), theory, stats.std_error(p));
        table.rows.push_back(row("moment order " + std::to_string(p), z, 3.0, z < 3.0,
                                 "z-score; empirical " + fmt6(stats.moment(p)) + ", exact " +
                                     fmt6(theory) + ", se " + fmt6(stats.std_error(p))));
    }
    const auto kurt = kurtosis_ratio(stats);
    const double excess = (kurt.value - 3.0) / kurt.std_error;
    if (config.h != 0.0) {
        table.rows.push_back(row("kurtosis excess over 3 in SE", excess, 5.0, excess > 5.0,
                                 "ratio " + fmt6(kurt.value) + " se " + fmt6(kurt.std_error)));
    } else {
        table.rows.push_back(row("kurtosis distance from 3 in SE", std::abs(excess), 3.0,
                                 std::abs(excess) < 3.0,
                                 "ratio " + fmt6(kurt.value) + " se " + fmt6(kurt.std_error)));
    }
    return table;
}

CheckTable run_mcmc_check(const McmcCheckConfig& config)
{
    const ModelParams params{config.n, config.beta, config.h};
    params.validate();
    if (config.n > kMaxEnumerationSites) throw CapacityError("mcmc-check needs N <= 24");
    const auto d = DisorderSample::generate(config.n, config.seed, 0);
    const auto exact = build_table(params, d);
    const auto mc = mcmc_estimate(params, d, config.sweeps, config.burn_in,
                                  derive_seed(config.seed, 0xC0FFEEull));

    CheckTable table{"mcmc-check (N=" + std::to_string(config.n) + ", beta=" + fmt6(config.beta) +
                         ", h=" + fmt6(config.h) + ")",
                     {}};
    for (int i = 1; i <= config.n; ++i) {
        const double z = z_score(mc.mean(i), exact.mean(i), mc.means_se[i - 1]);
        table.rows.push_back(row("<s_" + std::to_string(i) + ">", z, config.z_bound, z < config.z_bound,
                                 "mcmc " + fmt6(mc.mean(i)) + " exact " + fmt6(exact.mean(i))));
    }
    const auto cov = mc.covariance(1, config.n);
    const double exact_cov = covariance(exact, 1, config.n);
    const double z = z_score(cov.value, exact_cov, cov.std_error);
    table.rows.push_back(row("gamma_1," + std::to_string(config.n), z, config.z_bound,
                             z < config.z_bound,
                             "mcmc " + fmt6(cov.value) + " exact " + fmt6(exact_cov)));
    return table;
}

}  // namespace sklab
