#pragma once

// The handful of goodness-of-fit statistics the verification suites use.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "robmean/error.hpp"

namespace robmean::stats {

/// Kolmogorov survival function Q(t) = Pr{K > t} = 2 sum (-1)^(j-1) exp(-2 j^2 t^2).
inline double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        // Jacobi-transformed series converges fast for small t.
        const double w = std::numbers::pi * std::numbers::pi / (8.0 * t * t);
        double s = 0.0;
        for (int j = 1; j <= 7; j += 2) s += std::exp(-static_cast<double>(j * j) * w);
        return 1.0 - std::sqrt(2.0 * std::numbers::pi) / t * s;
    }
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        s += (j % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// One-sample KS test against Uniform(0, 1). The asymptotic p-value uses
/// Stephens' finite-n correction.
inline KsResult ks_uniform(std::vector<double> u) {
    detail::require(!u.empty(), "KS test needs at least one sample");
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = std::clamp(u[i], 0.0, 1.0);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
        // Values outside [0, 1] are impossible under the null.
        if (u[i] < 0.0 || u[i] > 1.0) d = std::max(d, 1.0);
    }
    const double en = std::sqrt(n);
    return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d), u.size()};
}

/// Two-sample KS test.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    detail::require(!a.empty() && !b.empty(), "two-sample KS needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d), a.size() + b.size()};
}

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
};

/// Pearson chi-square test of observed counts against equal cell
/// probabilities.
inline ChiSquareResult chi_square_equiprobable(std::span<const std::size_t> counts) {
    detail::require(counts.size() >= 2, "chi-square needs at least two cells");
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    detail::require(total > 0.0, "chi-square needs at least one observation");
    const double expected = total / static_cast<double>(counts.size());
    double x2 = 0.0;
    for (auto c : counts) {
        const double diff = static_cast<double>(c) - expected;
        x2 += diff * diff / expected;
    }
    const std::size_t dof = counts.size() - 1;
    return {x2, boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * x2), dof};
}

/// Dvoretzky-Kiefer-Wolfowitz band half-width: with probability >= 1 - alpha
/// the empirical CDF of n samples stays within eps of the true CDF everywhere.
inline double dkw_epsilon(std::size_t n, double alpha) {
    detail::require(n >= 1, "DKW band needs n >= 1");
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

/// Half the l1 distance between two pmfs on 0, 1, 2, ... (shorter one
/// padded with zeros).
inline double total_variation(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    const std::size_t n = std::max(p.size(), q.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

}  // namespace robmean::stats
