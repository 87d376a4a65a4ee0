#pragma once

// Sample reuse down a chain of nested balls.
//
// Level 1 draws N fresh experiment records uniform in the largest ball. Each
// later level keeps, in their original order, the parent records whose delta
// lies in the smaller ball and tops the set up with fresh records drawn
// uniformly in the smaller ball. The kept records carry their V draw and
// their already computed q value along, so q is evaluated exactly once per
// fresh record. Because V is independent of delta and the keep/drop decision
// looks only at delta, the transferred (V, delta) pairs keep the product law
// and every level holds N i.i.d. uniform draws from its own ball.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/problem.hpp"
#include "robmean/random.hpp"

namespace robmean {

/// One paired draw (V, delta) with its cached norm and q value.
template <class V>
class ExperimentRecord {
public:
    ExperimentRecord(V v_draw, Point delta, double delta_norm, double q_value)
        : v_draw_(std::move(v_draw)),
          delta_(std::move(delta)),
          delta_norm_(delta_norm),
          q_value_(q_value) {}

    const V& v_draw() const noexcept { return v_draw_; }
    const Point& delta() const noexcept { return delta_; }
    double delta_norm() const noexcept { return delta_norm_; }
    double q_value() const noexcept { return q_value_; }

private:
    V v_draw_;
    Point delta_;
    double delta_norm_;
    double q_value_;
};

template <class V>
struct ReuseOutcome {
    std::vector<ExperimentRecord<V>> records;  // reused first, then fresh
    std::vector<std::size_t> reused_from;      // parent index of each reused record
    std::size_t reused_count = 0;
    std::size_t fresh_count = 0;
};

/// Applies the reuse function to one parent level.
///
/// `fresh_source()` must return a record uniform in the target ball with an
/// independent V draw; it is called exactly N - k times.
template <class V, class FreshSource>
ReuseOutcome<V> reuse_step(std::vector<ExperimentRecord<V>> parent,
                           double parent_radius,
                           double target_radius,
                           std::size_t n,
                           FreshSource&& fresh_source) {
    detail::require(target_radius > 0.0, "target radius must be > 0");
    detail::require(target_radius < parent_radius, "target radius must be smaller than the parent radius");
    detail::require(parent.size() >= n, "parent level holds " + std::to_string(parent.size()) +
                                            " records, fewer than the required N = " + std::to_string(n));
    detail::require(parent.size() == n, "parent level holds " + std::to_string(parent.size()) +
                                            " records, more than the target size N = " + std::to_string(n));

    ReuseOutcome<V> out;
    out.records.reserve(n);
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (parent[i].delta_norm() <= target_radius) {
            out.records.push_back(std::move(parent[i]));
            out.reused_from.push_back(i);
        }
    }
    out.reused_count = out.records.size();
    out.fresh_count = n - out.reused_count;
    for (std::size_t j = 0; j < out.fresh_count; ++j) out.records.push_back(fresh_source());
    return out;
}

/// Reused and fresh counts at one level of a chain.
struct LevelCounts {
    double radius = 0.0;
    std::size_t reused = 0;
    std::size_t fresh = 0;
};

struct ChainTrace {
    std::size_t n = 0;
    std::vector<LevelCounts> per_level;
    std::size_t total_fresh = 0;
};

/// N + sum of fresh counts over levels 2..m. Level 1 is all fresh.
inline std::size_t total_fresh(const ChainTrace& trace) {
    std::size_t total = trace.per_level.empty() ? 0 : trace.n;
    for (std::size_t l = 1; l < trace.per_level.size(); ++l) total += trace.per_level[l].fresh;
    return total;
}

/// Sum of fresh counts over levels 2..m (the randomly sized part).
inline std::size_t fresh_after_first(const ChainTrace& trace) {
    std::size_t total = 0;
    for (std::size_t l = 1; l < trace.per_level.size(); ++l) total += trace.per_level[l].fresh;
    return total;
}

/// Records available to a level visitor. Fresh records are
/// records[reused, size).
template <class V>
struct LevelView {
    std::size_t level = 0;  // 0-based
    double radius = 0.0;
    std::span<const ExperimentRecord<V>> records;
    std::size_t reused = 0;

    std::span<const ExperimentRecord<V>> fresh() const { return records.subspan(reused); }
};

struct NoopVisitor {
    template <class View>
    void operator()(const View&) const noexcept {}
};

/// Default reuse operator used by run_chain_with.
struct StandardReuse {
    template <class V, class FreshSource>
    ReuseOutcome<V> operator()(std::vector<ExperimentRecord<V>> parent, double parent_radius,
                               double target_radius, std::size_t n, FreshSource&& fresh) const {
        return reuse_step<V>(std::move(parent), parent_radius, target_radius, n,
                             std::forward<FreshSource>(fresh));
    }
};

/// Chain over explicit radii with a caller-provided record factory.
///
/// `make_fresh(level, radius)` returns one fresh record for that level.
/// `visit(LevelView<V>)` sees every level in order; only the current level's
/// records are alive, so memory stays O(N) for any number of levels.
/// `step` replaces the reuse operator (test harnesses inject faults here).
template <class V, class Factory, class Visitor = NoopVisitor, class Step = StandardReuse>
ChainTrace run_chain_with(const GridSpec& grid, std::size_t n, Factory&& make_fresh,
                          Visitor&& visit = {}, Step&& step = {}) {
    validate(grid);
    detail::require(n >= 1, "sample size N must be >= 1");

    ChainTrace trace;
    trace.n = n;
    trace.per_level.reserve(grid.levels());

    std::vector<ExperimentRecord<V>> current;
    current.reserve(n);
    for (std::size_t i = 0; i < n; ++i) current.push_back(make_fresh(std::size_t{0}, grid.radii[0]));
    trace.per_level.push_back({grid.radii[0], 0, n});
    visit(LevelView<V>{0, grid.radii[0], current, 0});

    for (std::size_t l = 1; l < grid.levels(); ++l) {
        const double radius = grid.radii[l];
        auto outcome = step(std::move(current), grid.radii[l - 1], radius, n,
                            [&] { return make_fresh(l, radius); });
        current = std::move(outcome.records);
        trace.per_level.push_back({radius, outcome.reused_count, outcome.fresh_count});
        visit(LevelView<V>{l, radius, current, outcome.reused_count});
    }
    trace.total_fresh = total_fresh(trace);
    return trace;
}

/// Draws one fresh record for `problem` in the ball of `radius`: V first,
/// then delta, then a single q evaluation.
template <class V>
ExperimentRecord<V> make_record(const ProblemDef<V>& problem, double radius, Stream& rng) {
    V v = problem.sample_v(rng);
    Point delta = sample_uniform_ball(problem.ball(radius), rng);
    const double norm = norm_of(delta, problem.norm);
    const double q = problem.q(v, delta);
    return ExperimentRecord<V>(std::move(v), std::move(delta), norm, q);
}

namespace detail {

template <class V>
auto checked_factory(const ProblemDef<V>& problem, Stream& rng) {
    return [&problem, &rng, draws = std::vector<std::size_t>{}](std::size_t level, double radius) mutable {
        if (draws.size() <= level) draws.resize(level + 1, 0);
        auto rec = make_record(problem, radius, rng);
        const std::size_t index = draws[level]++;
        if (!std::isfinite(rec.q_value()))
            throw EvaluationError("q returned a non-finite value at level " + std::to_string(level + 1) +
                                  " (radius " + std::to_string(radius) + "), fresh record " +
                                  std::to_string(index + 1));
        return rec;
    };
}

inline void require_grid_in_problem(const GridSpec& grid, double max_radius) {
    validate(grid);
    require(grid.radii.front() <= max_radius, "grid radius " + std::to_string(grid.radii.front()) +
                                                  " exceeds the problem max_radius " +
                                                  std::to_string(max_radius));
}

}  // namespace detail

/// Runs the reuse chain for a problem over its grid. Deterministic for a
/// fixed stream state. Throws EvaluationError if q is not finite.
template <class V, class Visitor = NoopVisitor>
ChainTrace run_chain(const ProblemDef<V>& problem, const GridSpec& grid, std::size_t n, Stream& rng,
                     Visitor&& visit = {}) {
    validate(problem);
    detail::require_grid_in_problem(grid, problem.max_radius);
    return run_chain_with<V>(grid, n, detail::checked_factory(problem, rng), std::forward<Visitor>(visit));
}

}  // namespace robmean
