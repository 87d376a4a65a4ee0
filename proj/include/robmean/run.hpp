#pragma once

// Subcommand dispatch for the command-line tool.
//
// Exit status: 0 success (or suite passed), 1 suite failed, 2 usage or
// validation error, 3 runtime fault.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "robmean/complexity.hpp"
#include "robmean/config.hpp"
#include "robmean/density.hpp"
#include "robmean/error.hpp"
#include "robmean/estimator.hpp"
#include "robmean/parallel.hpp"
#include "robmean/problems.hpp"
#include "robmean/report_io.hpp"
#include "robmean/reuse.hpp"
#include "robmean/verify.hpp"

namespace robmean {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitTestFailure = 1, kExitUsage = 2, kExitRuntime = 3 };

struct RunResult {
    int exit_code = kExitOk;
    io::Json bundle;
    std::vector<std::filesystem::path> files;
};

namespace detail {

inline io::Json bundle_head(const config::RunConfig& cfg) {
    io::Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["provenance"] = {{"tool", "robmean"}, {"version", kVersion}, {"seed", cfg.seed}};
    j["config"] = cfg.effective;
    return j;
}

inline std::string to_csv(const std::vector<LevelEstimate>& levels) {
    std::ostringstream os;
    io::write_levels_csv(os, levels);
    return os.str();
}

inline void emit(RunResult& res, const config::RunConfig& cfg, const std::string& name, const std::string& text) {
    if (cfg.output_path.empty()) return;
    const auto path = std::filesystem::path(cfg.output_path) / name;
    io::write_file(path, text);
    res.files.push_back(path);
}

inline RunResult run_estimate(const config::RunConfig& cfg, std::ostream& out) {
    RunResult res;
    auto problem = builtin_problem(cfg.problem, cfg.dim, cfg.norm, cfg.max_radius);
    std::size_t q_calls = 0;
    problem.q = [inner = problem.q, &q_calls](const double& v, std::span<const double> d) {
        ++q_calls;
        return inner(v, d);
    };
    const GridSpec grid = cfg.grid();
    Stream rng = substream(cfg.seed, 0);
    auto levels = estimate_levels(problem, grid, cfg.samples, rng);
    const std::size_t reuse_calls = q_calls;
    const BoundsReport rep = bounds(levels);

    io::Json j = bundle_head(cfg);
    j["levels"] = io::to_json(rep.levels);
    for (std::size_t l = 0; l < rep.levels.size(); ++l)
        if (auto m = builtin_mean(cfg.problem, cfg.dim, cfg.norm, rep.levels[l].radius))
            j["levels"][l]["analytic_mean"] = *m;
    j["bounds"] = io::to_json(rep);

    double exact_mean = 0.0;
    for (std::size_t l = 1; l < grid.levels(); ++l)
        exact_mean += static_cast<double>(cfg.samples) *
                      -std::expm1(log_volume_ratio(cfg.dim, grid.radii[l], grid.radii[l - 1]));
    const double lambda = poisson_ref_for_grid(cfg.samples, grid, cfg.dim).lambda;
    j["complexity"] = {{"total_fresh", rep.total_fresh},
                       {"q_evaluations", reuse_calls},
                       {"naive_evaluations", cfg.samples * grid.levels()},
                       {"lambda", lambda},
                       {"exact_mean_fresh_after_first", exact_mean}};

    std::vector<LevelEstimate> naive;
    if (cfg.naive_baseline) {
        Stream rng2 = substream(cfg.seed, 1);
        naive = estimate_naive(problem, grid, cfg.samples, rng2);
        j["naive_levels"] = io::to_json(naive);
    }

    out << "robmean estimate: problem " << cfg.problem << ", d = " << cfg.dim << ", norm " << to_string(cfg.norm)
        << ", N = " << cfg.samples << ", m = " << grid.levels() << ", seed " << cfg.seed << '\n';
    out << std::setprecision(8) << "  lower = " << rep.lower << " (se " << rep.lower_std_error << ") at rho "
        << rep.argmin_radius << '\n'
        << "  upper = " << rep.upper << " (se " << rep.upper_std_error << ") at rho " << rep.argmax_radius << '\n'
        << "  q evaluations " << reuse_calls << " vs " << cfg.samples * grid.levels() << " without reuse"
        << " (lambda = " << lambda << ")\n"
        << "  note: " << BoundsReport::kCaveat << '\n';

    if (cfg.format == config::OutputFormat::csv) {
        emit(res, cfg, "levels.csv", to_csv(rep.levels));
        if (cfg.naive_baseline) emit(res, cfg, "naive_levels.csv", to_csv(naive));
    } else {
        emit(res, cfg, "report.json", j.dump(2) + "\n");
    }
    res.bundle = std::move(j);
    return res;
}

inline RunResult run_complexity(const config::RunConfig& cfg, std::ostream& out) {
    RunResult res;
    const GridSpec grid = cfg.grid();
    const FreshCountDist dist = fresh_dist_for_grid(cfg.samples, grid, cfg.dim);
    const PoissonRef ref = poisson_ref_for_grid(cfg.samples, grid, cfg.dim);
    const double lambda = ref.lambda;

    io::Json summary = {{"lambda", lambda},
                        {"expected_fresh_upper", expected_fresh_upper(ref)},
                        {"exact_mean", dist.mean()},
                        {"exact_variance", dist.variance()},
                        {"prob_zero", dist.prob(0)},
                        {"poisson_prob_zero", std::exp(-lambda)},
                        {"total_mass", dist.total_mass()},
                        {"dropped_mass", dist.dropped_mass()},
                        {"tv_to_poisson", total_variation_to_poisson(dist, lambda)}};
    if (lambda > 0.0) {
        const double e_lambda = std::numbers::e * lambda;
        summary["tail_at_e_lambda"] = dist.sf(static_cast<long long>(std::ceil(e_lambda)) - 1);
        summary["chernoff_at_e_lambda"] = chernoff_tail(lambda, e_lambda);
    }

    if (cfg.replications > 0) {
        std::vector<std::size_t> sums(cfg.replications);
        parallel_for(cfg.replications, [&](std::size_t i) {
            Stream rng = substream(cfg.seed, i);
            auto factory = [&](std::size_t, double radius) {
                Point delta = sample_uniform_ball(BallSpec{cfg.dim, radius, cfg.norm}, rng);
                const double norm = norm_of(delta, cfg.norm);
                return ExperimentRecord<std::monostate>(std::monostate{}, std::move(delta), norm, 0.0);
            };
            sums[i] = fresh_after_first(run_chain_with<std::monostate>(grid, cfg.samples, factory));
        }, cfg.threads);
        double s = 0.0;
        for (auto x : sums) s += static_cast<double>(x);
        summary["empirical_chains"] = cfg.replications;
        summary["empirical_mean"] = s / static_cast<double>(cfg.replications);
    }

    const auto rows = io::pmf_rows(dist, lambda);
    io::Json j = bundle_head(cfg);
    j["complexity"] = summary;
    j["pmf"] = io::to_json(rows);

    out << "robmean complexity: N = " << cfg.samples << ", m = " << grid.levels() << ", d = " << cfg.dim << '\n'
        << std::setprecision(10) << "  lambda = " << lambda << ", exact mean = " << dist.mean()
        << ", exact variance = " << dist.variance() << '\n'
        << "  Pr{S = 0} = " << dist.prob(0) << " (e^-lambda = " << std::exp(-lambda) << ")\n"
        << "  TV(exact, Poisson) = " << summary["tv_to_poisson"].get<double>() << '\n';
    if (summary.contains("empirical_mean"))
        out << "  empirical mean over " << cfg.replications << " chains = " << summary["empirical_mean"].get<double>()
            << '\n';

    if (cfg.format == config::OutputFormat::csv) {
        std::ostringstream os;
        io::write_pmf_csv(os, rows);
        emit(res, cfg, "pmf.csv", os.str());
    } else {
        emit(res, cfg, "report.json", j.dump(2) + "\n");
    }
    res.bundle = std::move(j);
    return res;
}

inline RunResult run_density(const config::RunConfig& cfg, std::ostream& out) {
    RunResult res;
    const DensityProfile prof = density_empirical(cfg.density);
    io::Json j = bundle_head(cfg);
    j["density"] = io::to_json(prof);
    j["mean_total_fresh"] = prof.mean_total_fresh;
    const auto& dc = cfg.density;
    out << "robmean density: N = " << dc.n << ", d = " << dc.dim << ", kappa = " << dc.kappa << ", a = " << dc.a
        << ", m = " << dc.levels << ", replications = " << dc.replications << '\n'
        << std::setprecision(8) << "  peak of the theoretical profile at a/kappa = " << dc.a / dc.kappa << '\n'
        << "  mean total fresh = " << prof.mean_total_fresh << " (se " << prof.total_fresh_se << "; expectation bound N(1 + d ln kappa) = "
        << static_cast<double>(dc.n) * (1.0 + static_cast<double>(dc.dim) * std::log(dc.kappa)) << ")\n";
    if (cfg.format == config::OutputFormat::csv) {
        std::ostringstream os;
        io::write_density_csv(os, prof);
        emit(res, cfg, "density.csv", os.str());
    } else {
        emit(res, cfg, "report.json", j.dump(2) + "\n");
    }
    res.bundle = std::move(j);
    return res;
}

inline RunResult run_verify(const config::RunConfig& cfg, std::ostream& out) {
    RunResult res;
    const verify::TestReport rep = verify::run_suite(cfg.test);
    io::Json j = bundle_head(cfg);
    j["report"] = verify::to_json(rep);
    const std::string text = verify::to_text(rep);
    out << text;
    if (cfg.format == config::OutputFormat::csv) {
        emit(res, cfg, "report.txt", text);
    } else {
        emit(res, cfg, "report.json", j.dump(2) + "\n");
    }
    res.bundle = std::move(j);
    res.exit_code = rep.passed() ? kExitOk : kExitTestFailure;
    return res;
}

}  // namespace detail

/// Runs a validated configuration. Throws on errors; see run_subcommand.
inline RunResult execute(const config::RunConfig& cfg, std::ostream& out) {
    if (cfg.subcommand == "estimate") return detail::run_estimate(cfg, out);
    if (cfg.subcommand == "complexity") return detail::run_complexity(cfg, out);
    if (cfg.subcommand == "density") return detail::run_density(cfg, out);
    if (cfg.subcommand == "verify") return detail::run_verify(cfg, out);
    throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");
}

/// Runs and maps failures to exit codes; diagnostics go to `err`.
inline RunResult run_subcommand(const config::RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return execute(cfg, out);
    } catch (const ValidationError& e) {
        err << "robmean " << cfg.subcommand << ": " << e.what() << '\n';
        return {kExitUsage, {}, {}};
    } catch (const std::exception& e) {
        err << "robmean " << cfg.subcommand << ": " << e.what() << '\n';
        return {kExitRuntime, {}, {}};
    }
}

}  // namespace robmean
