#pragma once

// Problem definition and radius grids.
//
// A problem is the quantity Q = q(V, Delta) with V drawn from a known
// sampler and Delta an uncertainty bounded in norm by max_radius. The
// library never evaluates a density for Delta; the estimation is only
// meaningful when the true density of Delta depends on ||Delta|| alone and
// does not increase with it. Those conditions are the caller's to ensure.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/random.hpp"

namespace robmean {

template <class V>
struct ProblemDef {
    using VSample = V;

    std::size_t dim = 1;
    NormKind norm = NormKind::euclidean;
    double max_radius = 1.0;
    /// Must be deterministic in its arguments.
    std::function<double(const V&, std::span<const double>)> q;
    std::function<V(Stream&)> sample_v;

    BallSpec ball(double radius) const { return BallSpec{dim, radius, norm}; }
};

template <class V>
void validate(const ProblemDef<V>& problem) {
    detail::require(problem.dim >= 1, "problem dimension must be >= 1");
    detail::require(std::isfinite(problem.max_radius) && problem.max_radius > 0.0,
                    "problem max_radius must be finite and > 0");
    detail::require(static_cast<bool>(problem.q), "problem has no q evaluator");
    detail::require(static_cast<bool>(problem.sample_v), "problem has no V sampler");
}

enum class GridScheme { geometric_volume, linear_radius, explicit_radii };

inline std::string_view to_string(GridScheme s) {
    switch (s) {
        case GridScheme::geometric_volume: return "geometric-volume";
        case GridScheme::linear_radius: return "linear-radius";
        case GridScheme::explicit_radii: return "explicit";
    }
    return "?";
}

inline GridScheme parse_grid_scheme(std::string_view name) {
    if (name == "geometric-volume" || name == "geometric") return GridScheme::geometric_volume;
    if (name == "linear-radius" || name == "linear") return GridScheme::linear_radius;
    if (name == "explicit") return GridScheme::explicit_radii;
    throw ValidationError("unknown grid scheme '" + std::string(name) +
                          "' (expected geometric-volume, linear-radius or explicit)");
}

/// Radii rho_1 > rho_2 > ... > rho_m > 0, largest ball first.
struct GridSpec {
    std::vector<double> radii;
    GridScheme scheme = GridScheme::explicit_radii;

    std::size_t levels() const { return radii.size(); }
};

inline void validate(const GridSpec& grid) {
    detail::require(!grid.radii.empty(), "grid must have at least one radius");
    for (std::size_t i = 0; i < grid.radii.size(); ++i) {
        detail::require(std::isfinite(grid.radii[i]) && grid.radii[i] > 0.0,
                        "grid radii must be finite and > 0");
        if (i > 0)
            detail::require(grid.radii[i] < grid.radii[i - 1], "grid radii must be strictly decreasing");
    }
}

inline GridSpec grid_from_radii(std::vector<double> radii) {
    GridSpec g{std::move(radii), GridScheme::explicit_radii};
    validate(g);
    return g;
}

/// Grid starting at r. For m >= 2 the last radius is min_radius; the
/// geometric-in-volume scheme keeps rho_{l+1}/rho_l constant, hence a
/// constant volume ratio (rho_m/r)^(d/(m-1)) per step for every dimension d.
inline GridSpec build_grid(double r, std::size_t m, GridScheme scheme, double min_radius = 0.0) {
    detail::require(m >= 1, "grid levels m must be >= 1");
    detail::require(std::isfinite(r) && r > 0.0, "grid max radius r must be finite and > 0");
    detail::require(scheme != GridScheme::explicit_radii, "explicit grids are built with grid_from_radii");
    GridSpec g;
    g.scheme = scheme;
    if (m == 1) {
        g.radii = {r};
        return g;
    }
    detail::require(std::isfinite(min_radius) && min_radius > 0.0, "grid min_radius must be > 0");
    detail::require(min_radius < r, "grid min_radius must be < r");
    g.radii.resize(m);
    const double steps = static_cast<double>(m - 1);
    for (std::size_t l = 0; l < m; ++l) {
        const double t = static_cast<double>(l) / steps;
        g.radii[l] = scheme == GridScheme::geometric_volume
                         ? r * std::exp(t * std::log(min_radius / r))
                         : r + t * (min_radius - r);
    }
    g.radii.front() = r;
    g.radii.back() = min_radius;
    validate(g);
    return g;
}

}  // namespace robmean
