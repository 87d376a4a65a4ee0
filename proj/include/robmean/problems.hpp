#pragma once

// Built-in analytic test problems, selectable by name.
//
//   zero            q(v, delta) = 0
//   odd-symmetric   q(v, delta) = delta_1          (M(rho) = 0)
//   quadratic-shift q(v, delta) = v + ||delta||_2^2 with v ~ N(0, 1)
//
// V is a standard normal scalar for all three so call counts and stream
// consumption are the same across problems.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/problem.hpp"
#include "robmean/random.hpp"

namespace robmean {

inline constexpr std::array<std::string_view, 3> kBuiltinProblems{"zero", "odd-symmetric", "quadratic-shift"};

inline ProblemDef<double> builtin_problem(std::string_view id, std::size_t dim, NormKind norm, double max_radius) {
    ProblemDef<double> p;
    p.dim = dim;
    p.norm = norm;
    p.max_radius = max_radius;
    p.sample_v = [](Stream& rng) { return standard_normal(rng); };
    if (id == "zero") {
        p.q = [](const double&, std::span<const double>) { return 0.0; };
    } else if (id == "odd-symmetric") {
        p.q = [](const double&, std::span<const double> delta) { return delta[0]; };
    } else if (id == "quadratic-shift") {
        p.q = [](const double& v, std::span<const double> delta) {
            double s = 0.0;
            for (double x : delta) s += x * x;
            return v + s;
        };
    } else {
        throw ValidationError("unknown problem '" + std::string(id) +
                              "' (expected zero, odd-symmetric or quadratic-shift)");
    }
    validate(p);
    return p;
}

/// Closed-form M(rho) for a built-in problem, when known.
inline std::optional<double> builtin_mean(std::string_view id, std::size_t dim, NormKind norm, double rho) {
    const double d = static_cast<double>(dim);
    if (id == "zero" || id == "odd-symmetric") return 0.0;
    if (id == "quadratic-shift") {
        // E||delta||_2^2 for delta uniform in the ball.
        switch (norm) {
            case NormKind::euclidean: return d / (d + 2.0) * rho * rho;
            case NormKind::sup: return d * rho * rho / 3.0;
            case NormKind::one: return 2.0 * d * rho * rho / ((d + 1.0) * (d + 2.0));
        }
    }
    return std::nullopt;
}

}  // namespace robmean
