#pragma once

// Exact and asymptotic laws of the number of fresh simulations.
//
// With N_1 <= ... <= N_m records per level and volume ratios
// p_l = v_l / v_{l-1}, the reused count at level l is Binomial(N_{l-1}, p_l)
// and the fresh counts n_l = N_l - k_l are mutually independent. Their sum is
// therefore an exact convolution of binomials. With equal N it is
// stochastically dominated by (and, as the grid gets fine, converges to) a
// Poisson variable with mean lambda = N ln(V_max / V_min).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/problem.hpp"

namespace robmean {

struct PoissonRef {
    double lambda = 0.0;
};

inline PoissonRef poisson_lambda(std::size_t n, double log_v_max, double log_v_min) {
    detail::require(std::isfinite(log_v_max) && std::isfinite(log_v_min), "log volumes must be finite");
    detail::require(log_v_max >= log_v_min, "log_v_max must be >= log_v_min");
    return {static_cast<double>(n) * (log_v_max - log_v_min)};
}

/// Upper bound on E[sum of fresh counts after level 1]; strict whenever
/// lambda > 0.
inline double expected_fresh_upper(const PoissonRef& ref) { return ref.lambda; }

/// Pr{X <= k} and Pr{X > k}, each obtained by summing the tail it names
/// when that tail is the smaller one.
struct TailPair {
    double cdf = 0.0;
    double sf = 0.0;
};

/// Robust Pr_a{X <= k} > Pr_b{X <= k}: compares upper tails when both CDFs
/// are close to one.
inline bool cdf_greater(const TailPair& a, const TailPair& b) {
    if (a.sf <= 0.5 && b.sf <= 0.5) return a.sf < b.sf;
    return a.cdf > b.cdf;
}

inline double log_poisson_pmf(double k, double lambda) {
    if (lambda == 0.0) return k == 0.0 ? 0.0 : -INFINITY;
    return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
}

inline double poisson_pmf(std::size_t k, double lambda) {
    return std::exp(log_poisson_pmf(static_cast<double>(k), lambda));
}

inline TailPair poisson_tails(double lambda, long long k) {
    detail::require(std::isfinite(lambda) && lambda >= 0.0, "Poisson mean must be finite and >= 0");
    if (k < 0) return {0.0, 1.0};
    if (lambda == 0.0) return {1.0, 0.0};
    TailPair t;
    if (static_cast<double>(k) < lambda) {
        // Terms increase up to the mode, so sum from the top index down.
        for (long long i = k; i >= 0; --i) t.cdf += poisson_pmf(static_cast<std::size_t>(i), lambda);
        t.sf = 1.0 - t.cdf;
    } else {
        for (long long i = k + 1;; ++i) {
            const double term = poisson_pmf(static_cast<std::size_t>(i), lambda);
            t.sf += term;
            if (term <= t.sf * 1e-18 || term == 0.0) break;
        }
        t.cdf = 1.0 - t.sf;
    }
    return t;
}

/// Binomial(n, p) pmf from log p and log(1 - p); exact at p in {0, 1}.
inline double binomial_pmf_log(std::size_t k, std::size_t n, double log_p, double log_q) {
    if (k > n) return 0.0;
    const double kk = static_cast<double>(k);
    const double rest = static_cast<double>(n - k);
    double lp = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(rest + 1.0);
    if (k > 0) lp += kk * log_p;
    if (n > k) lp += rest * log_q;
    return std::exp(lp);
}

inline TailPair binomial_tails(std::size_t n, double log_p, double log_q, long long k) {
    if (k < 0) return {0.0, 1.0};
    if (static_cast<std::size_t>(k) >= n) return {1.0, 0.0};
    const double mean = static_cast<double>(n) * std::exp(log_p);
    TailPair t;
    if (static_cast<double>(k) < mean) {
        for (long long i = k; i >= 0; --i) t.cdf += binomial_pmf_log(static_cast<std::size_t>(i), n, log_p, log_q);
        t.sf = 1.0 - t.cdf;
    } else {
        for (std::size_t i = n; i > static_cast<std::size_t>(k); --i) t.sf += binomial_pmf_log(i, n, log_p, log_q);
        t.cdf = 1.0 - t.sf;
    }
    return t;
}

/// L(theta, k): CDF at k of Binomial(N, 1 - 1/theta).
inline TailPair binomial_cdf_L(double theta, std::size_t n, std::size_t k) {
    detail::require(theta > 1.0 && std::isfinite(theta), "theta must be > 1");
    detail::require(k <= n, "k must be <= N");
    return binomial_tails(n, std::log1p(-1.0 / theta), -std::log(theta), static_cast<long long>(k));
}

/// L_P(theta, k): CDF at k of Poisson(N ln theta).
inline TailPair poisson_cdf_LP(double theta, std::size_t n, std::size_t k) {
    detail::require(theta > 1.0 && std::isfinite(theta), "theta must be > 1");
    detail::require(k <= n, "k must be <= N");
    return poisson_tails(static_cast<double>(n) * std::log(theta), static_cast<long long>(k));
}

/// Law of the fresh count at one level: pmf[j] = Pr{n_l = min_fresh + j}.
struct LevelLaw {
    std::size_t min_fresh = 0;
    std::size_t max_fresh = 0;
    double ratio = 1.0;
    std::vector<double> pmf;

    double mean() const {
        double m = 0.0;
        for (std::size_t j = 0; j < pmf.size(); ++j) m += static_cast<double>(min_fresh + j) * pmf[j];
        return m;
    }
};

/// Exact law of the total fresh count over levels 2..m.
class FreshCountDist {
public:
    /// Entries below this are dropped during convolution; their mass is
    /// tallied in dropped_mass().
    static constexpr double kDropBelow = 1e-300;

    FreshCountDist() : pmf_{1.0} {}

    std::size_t support_max() const { return pmf_.size() - 1; }
    const std::vector<double>& pmf() const { return pmf_; }
    const std::vector<LevelLaw>& per_level() const { return levels_; }
    double dropped_mass() const { return dropped_; }

    double prob(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }

    double total_mass() const {
        double s = 0.0;
        for (double p : pmf_) s += p;
        return s;
    }

    /// Pr{S <= k}, summed from the lower end.
    double cdf(long long k) const {
        if (k < 0) return 0.0;
        double s = 0.0;
        const auto top = std::min<std::size_t>(static_cast<std::size_t>(k), support_max());
        for (std::size_t i = 0; i <= top; ++i) s += pmf_[i];
        return s;
    }

    /// Pr{S > k}, summed from the upper end (smallest terms first).
    double sf(long long k) const {
        double s = 0.0;
        for (std::size_t i = pmf_.size(); i-- > 0;) {
            if (static_cast<long long>(i) <= k) break;
            s += pmf_[i];
        }
        return s;
    }

    TailPair tails(long long k) const { return {cdf(k), sf(k)}; }

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < pmf_.size(); ++i) m += static_cast<double>(i) * pmf_[i];
        return m;
    }

    double variance() const {
        const double mu = mean();
        double v = 0.0;
        for (std::size_t i = 0; i < pmf_.size(); ++i) {
            const double d = static_cast<double>(i) - mu;
            v += d * d * pmf_[i];
        }
        return v;
    }

    void add_level(LevelLaw law) {
        std::vector<double> next(pmf_.size() + law.max_fresh, 0.0);
        for (std::size_t i = 0; i < pmf_.size(); ++i) {
            const double a = pmf_[i];
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < law.pmf.size(); ++j) next[i + law.min_fresh + j] += a * law.pmf[j];
        }
        for (double& p : next) {
            if (p != 0.0 && p < kDropBelow) {
                dropped_ += p;
                p = 0.0;
            }
        }
        while (next.size() > 1 && next.back() == 0.0) next.pop_back();
        // Renormalization guard: only engages if rounding drift becomes
        // visible, never to hide a modelling error.
        double mass = dropped_;
        for (double p : next) mass += p;
        if (std::abs(mass - 1.0) > 1e-13) {
            for (double& p : next) p /= mass;
        }
        pmf_ = std::move(next);
        levels_.push_back(std::move(law));
    }

private:
    std::vector<double> pmf_;
    std::vector<LevelLaw> levels_;
    double dropped_ = 0.0;
};

namespace detail {

/// Level law from the parent size, own size and log volume ratio (<= 0).
inline LevelLaw level_law(std::size_t parent_n, std::size_t n, double log_ratio) {
    LevelLaw law;
    law.ratio = std::exp(log_ratio);
    law.min_fresh = n - parent_n;
    law.max_fresh = n;
    law.pmf.assign(parent_n + 1, 0.0);
    // Reused count k ~ Binomial(parent_n, ratio); fresh = n - k.
    const double log_q = log_ratio == 0.0 ? -INFINITY : std::log(-std::expm1(log_ratio));
    double mass = 0.0;
    for (std::size_t k = 0; k <= parent_n; ++k) {
        double p;
        if (log_ratio == 0.0) {
            p = k == parent_n ? 1.0 : 0.0;
        } else {
            p = binomial_pmf_log(k, parent_n, log_ratio, log_q);
        }
        law.pmf[parent_n - k] = p;  // index j = fresh - min_fresh = parent_n - k
        mass += p;
    }
    for (double& p : law.pmf) p /= mass;
    return law;
}

}  // namespace detail

/// Exact law from per-level sample sizes N_1..N_m (nondecreasing) and log
/// volume ratios ln(v_l / v_{l-1}) for l = 2..m, each in (-inf, 0].
inline FreshCountDist exact_fresh_dist_log(std::span<const std::size_t> sizes, std::span<const double> log_ratios) {
    detail::require(!sizes.empty(), "need at least one level size");
    detail::require(log_ratios.size() + 1 == sizes.size(), "need exactly m - 1 volume ratios for m sizes");
    for (std::size_t l = 1; l < sizes.size(); ++l)
        detail::require(sizes[l] >= sizes[l - 1], "sample sizes must be nondecreasing");
    for (double lr : log_ratios)
        detail::require(std::isfinite(lr) && lr <= 0.0, "volume ratios must lie in (0, 1]");
    FreshCountDist dist;
    for (std::size_t l = 1; l < sizes.size(); ++l)
        dist.add_level(detail::level_law(sizes[l - 1], sizes[l], log_ratios[l - 1]));
    return dist;
}

/// Same as exact_fresh_dist_log with plain ratios v_l / v_{l-1}.
inline FreshCountDist exact_fresh_dist(std::span<const std::size_t> sizes, std::span<const double> ratios) {
    std::vector<double> logs;
    logs.reserve(ratios.size());
    for (double r : ratios) {
        if (!(r > 0.0 && r <= 1.0)) throw ValidationError("volume ratios must lie in (0, 1]");
        logs.push_back(std::log(r));
    }
    return exact_fresh_dist_log(sizes, logs);
}

/// Equal N at all m levels, ratios from a grid in dimension `dim`.
inline FreshCountDist fresh_dist_for_grid(std::size_t n, const GridSpec& grid, std::size_t dim) {
    validate(grid);
    std::vector<std::size_t> sizes(grid.levels(), n);
    std::vector<double> logs;
    for (std::size_t l = 1; l < grid.levels(); ++l)
        logs.push_back(log_volume_ratio(dim, grid.radii[l], grid.radii[l - 1]));
    return exact_fresh_dist_log(sizes, logs);
}

/// Equal N, m levels, equal consecutive ratios with total
/// ln(V_max / V_min) = log_total.
inline FreshCountDist equal_ratio_dist(std::size_t n, std::size_t m, double log_total) {
    detail::require(m >= 1, "m must be >= 1");
    detail::require(log_total >= 0.0, "ln(V_max/V_min) must be >= 0");
    std::vector<std::size_t> sizes(m, n);
    std::vector<double> logs(m - 1, m > 1 ? -log_total / static_cast<double>(m - 1) : 0.0);
    return exact_fresh_dist_log(sizes, logs);
}

/// Lambda of the Poisson reference for an equal-N grid.
inline PoissonRef poisson_ref_for_grid(std::size_t n, const GridSpec& grid, std::size_t dim) {
    validate(grid);
    return {static_cast<double>(n) * static_cast<double>(dim) * std::log(grid.radii.front() / grid.radii.back())};
}

/// Total-variation distance between the exact law and Poisson(lambda),
/// including Poisson mass beyond the exact support.
inline double total_variation_to_poisson(const FreshCountDist& dist, double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k <= dist.support_max(); ++k) s += std::abs(dist.prob(k) - poisson_pmf(k, lambda));
    s += poisson_tails(lambda, static_cast<long long>(dist.support_max())).sf;
    return 0.5 * s;
}

/// Chernoff bound e^-lambda (lambda e / k)^k on Pr{S >= k}, valid for k > lambda.
inline double chernoff_tail(double lambda, double k) {
    detail::require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    if (!(k > lambda)) throw DomainError("Chernoff tail bound needs k > lambda");
    return std::exp(-lambda + k * (std::log(lambda) + 1.0 - std::log(k)));
}

/// exp(-eps^2 lambda / 4), a bound on Pr{S >= (1 + eps) lambda} for 0 < eps < 1.
inline double relative_tail(double lambda, double eps) {
    detail::require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    return std::exp(-eps * eps * lambda / 4.0);
}

/// (e^eps / (1 + eps)^(1 + eps))^lambda; tighter than relative_tail.
inline double relative_tail_intermediate(double lambda, double eps) {
    detail::require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    return std::exp(lambda * (eps - (1.0 + eps) * std::log1p(eps)));
}

}  // namespace robmean
