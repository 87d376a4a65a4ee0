// robmean: bounds on a mean under norm-bounded uncertainty via nested-ball
// Monte Carlo with sample reuse, plus the complexity and verification tools.
//
//   robmean estimate   [--config FILE] [flags]
//   robmean complexity [--config FILE] [flags]
//   robmean density    [--config FILE] [flags]
//   robmean verify SUITE [--config FILE] [flags]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robmean/config.hpp"
#include "robmean/run.hpp"

namespace {

using robmean::config::Json;

struct Flags {
    std::string config_file;
    std::optional<std::string> problem, norm, scheme, output, format, suite, fault;
    std::optional<std::size_t> dim, levels, samples, replications, bins, density_levels, threads;
    std::optional<double> max_radius, min_radius, kappa, a, alpha;
    std::optional<std::string> seed;
    std::vector<double> radii;
    bool naive = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("-c,--config", f.config_file, "JSON config file");
    cmd->add_option("--problem", f.problem, "built-in problem: zero, odd-symmetric, quadratic-shift");
    cmd->add_option("--dim", f.dim, "uncertainty dimension d");
    cmd->add_option("--norm", f.norm, "euclidean, sup or one");
    cmd->add_option("--max-radius", f.max_radius, "uncertainty bound r");
    cmd->add_option("--scheme", f.scheme, "grid scheme: geometric-volume, linear-radius, explicit");
    cmd->add_option("--levels,-m", f.levels, "number of grid radii m");
    cmd->add_option("--min-radius", f.min_radius, "smallest grid radius");
    cmd->add_option("--radii", f.radii, "explicit decreasing radii");
    cmd->add_option("--samples,-N", f.samples, "samples per level N");
    cmd->add_option("--replications,-R", f.replications, "independent replications");
    cmd->add_option("--seed", f.seed, "master seed (unsigned 64-bit); default from ROBMEAN_SEED");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    cmd->add_option("-o,--output", f.output, "output directory");
    cmd->add_option("--format", f.format, "csv or json");
}

Json to_overrides(const std::string& subcommand, const Flags& f) {
    using robmean::config::set_flag;
    Json j = Json::object();
    set_flag(j, "subcommand", subcommand);
    if (f.problem) set_flag(j, "problem.id", *f.problem);
    if (f.dim) set_flag(j, "problem.dim", *f.dim);
    if (f.norm) set_flag(j, "problem.norm", *f.norm);
    if (f.max_radius) set_flag(j, "problem.max_radius", *f.max_radius);
    if (f.scheme) set_flag(j, "grid.scheme", *f.scheme);
    if (f.levels) set_flag(j, "grid.levels", *f.levels);
    if (f.min_radius) set_flag(j, "grid.min_radius", *f.min_radius);
    if (!f.radii.empty()) {
        set_flag(j, "grid.radii", f.radii);
        if (!f.scheme) set_flag(j, "grid.scheme", "explicit");
    }
    if (f.samples) set_flag(j, "samples", *f.samples);
    if (f.replications) set_flag(j, "replications", *f.replications);
    if (f.seed) set_flag(j, "seed", robmean::config::detail::parse_seed_text("--seed", *f.seed));
    if (f.threads) set_flag(j, "threads", *f.threads);
    if (f.output) set_flag(j, "output.path", *f.output);
    if (f.format) set_flag(j, "output.format", *f.format);
    if (f.naive) set_flag(j, "naive_baseline", true);
    if (f.kappa) set_flag(j, "density.kappa", *f.kappa);
    if (f.a) set_flag(j, "density.a", *f.a);
    if (f.bins) set_flag(j, "density.bins", *f.bins);
    if (f.density_levels) set_flag(j, "density.levels", *f.density_levels);
    if (f.suite) set_flag(j, "verify.suite", *f.suite);
    if (f.alpha) set_flag(j, "verify.alpha", *f.alpha);
    if (f.fault) set_flag(j, "verify.fault", *f.fault);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nested-ball Monte Carlo bounds on a mean under norm-bounded uncertainty, with sample reuse"};
    app.set_version_flag("--version", std::string("robmean ") + robmean::kVersion);
    app.require_subcommand(1);

    Flags f;
    auto* estimate = app.add_subcommand("estimate", "per-radius means and grid bounds on E[Q]");
    add_common(estimate, f);
    estimate->add_flag("--naive", f.naive, "also run the no-reuse baseline");

    auto* complexity = app.add_subcommand("complexity", "exact law of the fresh-simulation count");
    add_common(complexity, f);

    auto* density = app.add_subcommand("density", "radial density profile of fresh samples");
    add_common(density, f);
    density->add_option("--kappa", f.kappa, "ratio between the largest and smallest radius");
    density->add_option("--a", f.a, "largest radius a");
    density->add_option("--bins", f.bins, "histogram bins over (0, a]");
    density->add_option("--density-levels", f.density_levels, "grid radii between a/kappa and a");

    auto* verify = app.add_subcommand("verify", "run a statistical verification suite");
    add_common(verify, f);
    std::string suite_arg;
    verify->add_option("suite", suite_arg,
                       "reuse-uniformity, poisson-dominance, poisson-convergence, complexity-tails, density-profile");
    verify->add_option("--alpha", f.alpha, "significance level");
    verify->add_option("--fault", f.fault, "inject a fault: unfiltered-reuse, wrong-radial-exponent, fresh-off-by-one");
    verify->add_option("--kappa", f.kappa, "density-profile: kappa");
    verify->add_option("--a", f.a, "density-profile: a");
    verify->add_option("--bins", f.bins, "density-profile: bins");
    verify->add_option("--density-levels", f.density_levels, "density-profile: grid radii");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : robmean::kExitUsage;
    }

    std::string sub = app.get_subcommands().front()->get_name();
    if (!suite_arg.empty()) f.suite = suite_arg;

    robmean::config::RunConfig cfg;
    try {
        Json file = f.config_file.empty() ? Json::object() : robmean::config::load_json_file(f.config_file);
        cfg = robmean::config::resolve(file, to_overrides(sub, f), robmean::config::env_seed());
    } catch (const robmean::ValidationError& e) {
        std::cerr << "robmean " << sub << ": " << e.what() << '\n';
        return robmean::kExitUsage;
    }
    const auto res = robmean::run_subcommand(cfg, std::cout, std::cerr);
    for (const auto& p : res.files) std::cout << "  wrote " << p.string() << '\n';
    return res.exit_code;
}
