// Bounds on the mean settling error of a first-order loop whose gain is
// uncertain within +-20 % (sup-norm ball of radius 0.2) while the reference
// step V is random with a known law.

#include <cmath>
#include <iostream>
#include <span>

#include "robmean/estimator.hpp"
#include "robmean/random.hpp"

namespace {

struct Step {
    double amplitude;
    double duration;
};

}  // namespace

int main() {
    robmean::ProblemDef<Step> problem;
    problem.dim = 2;
    problem.norm = robmean::NormKind::sup;
    problem.max_radius = 0.2;
    problem.sample_v = [](robmean::Stream& rng) {
        return Step{1.0 + 0.1 * robmean::standard_normal(rng), 1.0 + robmean::uniform01(rng)};
    };
    // Residual error after `duration` for gain (1 + delta_0) and pole shift delta_1.
    problem.q = [](const Step& v, std::span<const double> delta) {
        const double rate = (1.0 + delta[0]) * (2.0 + delta[1]);
        return v.amplitude * std::exp(-rate * v.duration);
    };

    const auto grid = robmean::build_grid(problem.max_radius, 40, robmean::GridScheme::geometric_volume, 0.005);
    robmean::Stream rng = robmean::substream(7, 0);
    const auto report = robmean::bounds(robmean::estimate_levels(problem, grid, 5000, rng));

    std::cout << "E[error] in [" << report.lower << ", " << report.upper << "] (grid approximation)\n"
              << "fresh q evaluations: " << report.total_fresh << " of " << 5000 * grid.levels() << '\n';
}
