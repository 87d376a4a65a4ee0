#pragma once

// Norm balls {x : ||x|| <= rho} in R^d: norms, Lebesgue volumes and exact
// uniform samplers.
//
// Supported norms are euclidean and sup; both have closed-form volumes and
// non-rejection samplers. The one-norm (cross-polytope) is an optional
// extension built the same way. Adding a norm means adding a NormKind
// variant, a case in norm_of, log_ball_volume and sample_uniform_ball.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/random.hpp"

namespace robmean {

enum class NormKind { euclidean, sup, one };

inline std::string_view to_string(NormKind kind) {
    switch (kind) {
        case NormKind::euclidean: return "euclidean";
        case NormKind::sup: return "sup";
        case NormKind::one: return "one";
    }
    return "?";
}

inline NormKind parse_norm(std::string_view name) {
    if (name == "euclidean" || name == "l2") return NormKind::euclidean;
    if (name == "sup" || name == "linf" || name == "max") return NormKind::sup;
    if (name == "one" || name == "l1") return NormKind::one;
    throw ValidationError("unknown norm '" + std::string(name) + "' (expected euclidean, sup or one)");
}

using Point = std::vector<double>;

struct BallSpec {
    std::size_t dim = 1;
    double radius = 1.0;
    NormKind norm = NormKind::euclidean;
};

inline void validate(const BallSpec& spec) {
    detail::require(spec.dim >= 1, "ball dimension must be >= 1");
    detail::require(std::isfinite(spec.radius) && spec.radius > 0.0,
                    "ball radius must be finite and > 0");
}

inline double norm_of(std::span<const double> p, NormKind kind) {
    switch (kind) {
        case NormKind::euclidean: {
            // Scaled accumulation so huge or tiny coordinates do not overflow.
            double scale = 0.0;
            for (double x : p) scale = std::max(scale, std::abs(x));
            if (scale == 0.0 || !std::isfinite(scale)) return scale;
            double sum = 0.0;
            for (double x : p) {
                const double t = x / scale;
                sum += t * t;
            }
            return scale * std::sqrt(sum);
        }
        case NormKind::sup: {
            double m = 0.0;
            for (double x : p) m = std::max(m, std::abs(x));
            return m;
        }
        case NormKind::one: {
            double s = 0.0;
            for (double x : p) s += std::abs(x);
            return s;
        }
    }
    return 0.0;
}

/// log of the unit-radius ball volume for (dim, norm).
inline double log_unit_ball_volume(std::size_t dim, NormKind norm) {
    const double d = static_cast<double>(dim);
    switch (norm) {
        case NormKind::euclidean:
            return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
        case NormKind::sup:
            return d * std::numbers::ln2;
        case NormKind::one:
            return d * std::numbers::ln2 - std::lgamma(d + 1.0);
    }
    return 0.0;
}

inline double log_ball_volume(const BallSpec& spec) {
    validate(spec);
    return log_unit_ball_volume(spec.dim, spec.norm) +
           static_cast<double>(spec.dim) * std::log(spec.radius);
}

/// Lebesgue measure of the ball. May under/overflow for large dim; prefer
/// log_ball_volume or log_volume_ratio for bookkeeping.
inline double ball_volume(const BallSpec& spec) {
    validate(spec);
    if (spec.norm == NormKind::sup) return std::pow(2.0 * spec.radius, static_cast<double>(spec.dim));
    return std::exp(log_ball_volume(spec));
}

/// ln(vol(inner)/vol(outer)) for two balls of the same dim and norm.
inline double log_volume_ratio(std::size_t dim, double inner_radius, double outer_radius) {
    detail::require(dim >= 1, "dimension must be >= 1");
    detail::require(inner_radius > 0.0 && outer_radius > 0.0, "radii must be > 0");
    return static_cast<double>(dim) * std::log(inner_radius / outer_radius);
}

/// Writes a point uniform in the ball into `out` (size dim).
template <class Rng>
void sample_uniform_ball(const BallSpec& spec, Rng& rng, std::span<double> out) {
    validate(spec);
    detail::require(out.size() == spec.dim, "output span length must equal ball dimension");
    const double d = static_cast<double>(spec.dim);
    switch (spec.norm) {
        case NormKind::euclidean: {
            // Isotropic direction from normalized gaussians, radius rho * U^(1/d).
            double len = 0.0;
            do {
                for (double& x : out) x = standard_normal(rng);
                len = norm_of(out, NormKind::euclidean);
            } while (len == 0.0);
            const double r = spec.radius * std::pow(uniform01(rng), 1.0 / d);
            for (double& x : out) x *= r / len;
            return;
        }
        case NormKind::sup:
            for (double& x : out) x = spec.radius * (2.0 * uniform01(rng) - 1.0);
            return;
        case NormKind::one: {
            // d+1 exponentials normalized give a uniform point of the simplex
            // {y >= 0, sum y <= 1} (last one is slack); random signs fill the
            // cross-polytope.
            double total = standard_exponential(rng);
            for (double& x : out) {
                x = standard_exponential(rng);
                total += x;
            }
            for (double& x : out) {
                const bool negative = (rng() >> 63) != 0;
                x = spec.radius * (negative ? -x : x) / total;
            }
            return;
        }
    }
}

template <class Rng>
Point sample_uniform_ball(const BallSpec& spec, Rng& rng) {
    Point p(spec.dim);
    sample_uniform_ball(spec, rng, p);
    return p;
}

}  // namespace robmean
