#pragma once

// Run configuration: JSON file with nested sections, command-line flag
// overrides, and the ROBMEAN_SEED environment variable for the default seed.
//
// Precedence, lowest first: subcommand defaults, ROBMEAN_SEED, file, flags.
//
//   {
//     "subcommand": "estimate",                 // estimate | complexity | verify | density
//     "problem":  {"id": "quadratic-shift", "dim": 1, "norm": "euclidean", "max_radius": 1.0},
//     "grid":     {"scheme": "geometric-volume", "levels": 100, "min_radius": 0.01, "radii": []},
//     "samples": 10000, "replications": 1, "seed": 42, "threads": 0,
//     "naive_baseline": false,
//     "output":   {"path": "", "format": "csv"},
//     "density":  {"kappa": 1.0513, "a": 100, "bins": 20, "levels": 1000},
//     "verify":   {"suite": "reuse-uniformity", "alpha": 0.01, "fault": "none", ...}
//   }
//
// Unknown keys and wrongly typed values are rejected with the dotted key
// path in the message.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "robmean/density.hpp"
#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/problem.hpp"
#include "robmean/problems.hpp"
#include "robmean/verify.hpp"

namespace robmean::config {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSubcommands[] = {"estimate", "complexity", "verify", "density"};
inline constexpr const char* kSeedEnv = "ROBMEAN_SEED";

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string subcommand = "estimate";
    std::string problem = "quadratic-shift";
    std::size_t dim = 1;
    NormKind norm = NormKind::euclidean;
    double max_radius = 1.0;
    GridScheme scheme = GridScheme::geometric_volume;
    std::size_t levels = 100;
    double min_radius = 0.01;
    std::vector<double> radii;
    std::size_t samples = 10000;
    std::size_t replications = 1;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    bool naive_baseline = false;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    DensityConfig density;
    verify::TestConfig test;

    Json effective;  // merged configuration; re-running it reproduces the run

    GridSpec grid() const {
        return scheme == GridScheme::explicit_radii ? grid_from_radii(radii)
                                                    : build_grid(max_radius, levels, scheme, min_radius);
    }
};

namespace detail {

[[noreturn]] inline void fail(const std::string& key, const std::string& what) {
    throw ValidationError("config '" + key + "': " + what);
}

enum class Kind { string, uint, real, boolean, object, real_array, uint_array };

struct KeySpec {
    std::string_view path;
    Kind kind;
};

inline constexpr KeySpec kKeys[] = {
    {"subcommand", Kind::string},
    {"problem", Kind::object},
    {"problem.id", Kind::string},
    {"problem.dim", Kind::uint},
    {"problem.norm", Kind::string},
    {"problem.max_radius", Kind::real},
    {"grid", Kind::object},
    {"grid.scheme", Kind::string},
    {"grid.levels", Kind::uint},
    {"grid.min_radius", Kind::real},
    {"grid.radii", Kind::real_array},
    {"samples", Kind::uint},
    {"replications", Kind::uint},
    {"seed", Kind::uint},
    {"threads", Kind::uint},
    {"naive_baseline", Kind::boolean},
    {"output", Kind::object},
    {"output.path", Kind::string},
    {"output.format", Kind::string},
    {"density", Kind::object},
    {"density.kappa", Kind::real},
    {"density.a", Kind::real},
    {"density.bins", Kind::uint},
    {"density.levels", Kind::uint},
    {"verify", Kind::object},
    {"verify.suite", Kind::string},
    {"verify.alpha", Kind::real},
    {"verify.fault", Kind::string},
    {"verify.k_max", Kind::uint},
    {"verify.empirical_chains", Kind::uint},
    {"verify.m_sweep", Kind::uint_array},
    {"verify.tv_threshold", Kind::real},
    {"verify.sectors", Kind::uint},
    {"verify.relative_tolerance", Kind::real},
    {"verify.min_expected_count", Kind::real},
    {"verify.margin_z", Kind::real},
};

inline const KeySpec* find_key(std::string_view path) {
    for (const auto& k : kKeys)
        if (k.path == path) return &k;
    return nullptr;
}

inline std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::string: return "a string";
        case Kind::uint: return "a nonnegative integer";
        case Kind::real: return "a number";
        case Kind::boolean: return "true or false";
        case Kind::object: return "an object";
        case Kind::real_array: return "an array of numbers";
        case Kind::uint_array: return "an array of nonnegative integers";
    }
    return "?";
}

inline bool matches(const Json& v, Kind k) {
    switch (k) {
        case Kind::string: return v.is_string();
        case Kind::uint: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
        case Kind::real: return v.is_number();
        case Kind::boolean: return v.is_boolean();
        case Kind::object: return v.is_object();
        case Kind::real_array:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
        case Kind::uint_array:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) {
                       return e.is_number_unsigned() || (e.is_number_integer() && e.get<long long>() >= 0);
                   });
    }
    return false;
}

inline void check_schema(const Json& j, const std::string& prefix = "") {
    if (!j.is_object()) fail(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        const KeySpec* spec = find_key(path);
        if (!spec) fail(path, "unknown key");
        if (!matches(value, spec->kind)) fail(path, "expected " + std::string(kind_name(spec->kind)));
        if (spec->kind == Kind::object) check_schema(value, path);
    }
}

inline const Json* lookup(const Json& j, std::string_view path) {
    const Json* cur = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string part(path.substr(start, dot - start));
        if (!cur->is_object() || !cur->contains(part)) return nullptr;
        cur = &(*cur)[part];
        if (dot == std::string_view::npos) return cur;
        start = dot + 1;
    }
}

inline void set_path(Json& j, std::string_view path, Json value) {
    Json* cur = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string part(path.substr(start, dot - start));
        if (dot == std::string_view::npos) {
            (*cur)[part] = std::move(value);
            return;
        }
        cur = &(*cur)[part];
        start = dot + 1;
    }
}

template <class T>
void take(const Json& j, std::string_view path, T& out) {
    if (const Json* v = lookup(j, path)) out = v->get<T>();
}

inline std::uint64_t parse_seed_text(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
        const auto v = std::stoull(text, &pos, 0);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "expected an unsigned 64-bit integer, got '" + text + "'");
    }
}

/// Subcommand-specific defaults.
inline Json defaults_for(const std::string& subcommand, const std::string& suite) {
    Json d;
    d["subcommand"] = subcommand;
    d["seed"] = 42;
    d["threads"] = 0;
    d["output"] = {{"path", ""}, {"format", "csv"}};
    if (subcommand == "estimate") {
        d["problem"] = {{"id", "quadratic-shift"}, {"dim", 1}, {"norm", "euclidean"}, {"max_radius", 1.0}};
        d["grid"] = {{"scheme", "geometric-volume"}, {"levels", 100}, {"min_radius", 0.01}};
        d["samples"] = 10000;
        d["replications"] = 1;
        d["naive_baseline"] = false;
    } else if (subcommand == "complexity") {
        // N = 100, 11 levels, V_max / V_min = e^0.1: lambda = 10.
        d["problem"] = {{"id", "zero"}, {"dim", 1}, {"norm", "euclidean"}, {"max_radius", 1.0}};
        d["grid"] = {{"scheme", "geometric-volume"}, {"levels", 11}, {"min_radius", std::exp(-0.1)}};
        d["samples"] = 100;
        d["replications"] = 0;
    } else if (subcommand == "density") {
        const DensityConfig dc;
        d["problem"] = {{"id", "zero"}, {"dim", dc.dim}, {"norm", "euclidean"}, {"max_radius", dc.a}};
        d["samples"] = dc.n;
        d["replications"] = dc.replications;
        d["density"] = {{"kappa", dc.kappa}, {"a", dc.a}, {"bins", dc.bins}, {"levels", dc.levels}};
    } else if (subcommand == "verify") {
        const auto t = verify::default_config(suite);
        d["problem"] = {{"id", "zero"}, {"dim", t.dim}, {"norm", std::string(to_string(t.norm))},
                        {"max_radius", t.max_radius}};
        d["grid"] = {{"scheme", "geometric-volume"}, {"levels", t.levels}, {"min_radius", t.min_radius}};
        d["samples"] = t.n;
        d["replications"] = t.replications;
        d["seed"] = t.seed;
        d["verify"] = {{"suite", suite},
                       {"alpha", t.alpha},
                       {"fault", "none"},
                       {"k_max", t.k_max},
                       {"empirical_chains", t.empirical_chains},
                       {"m_sweep", t.m_sweep},
                       {"tv_threshold", t.tv_threshold},
                       {"sectors", t.sectors},
                       {"relative_tolerance", t.relative_tolerance},
                       {"min_expected_count", t.min_expected_count},
                       {"margin_z", t.margin_z}};
        if (suite == "density-profile") {
            const auto& dc = t.density;
            d["problem"]["dim"] = dc.dim;
            d["problem"]["max_radius"] = dc.a;
            d["samples"] = dc.n;
            d["replications"] = dc.replications;
            d["seed"] = dc.seed;
            d["density"] = {{"kappa", dc.kappa}, {"a", dc.a}, {"bins", dc.bins}, {"levels", dc.levels}};
        }
    } else {
        fail("subcommand", "expected estimate, complexity, verify or density, got '" + subcommand + "'");
    }
    return d;
}

inline void require_range(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) fail(key, "must satisfy " + constraint);
}

}  // namespace detail

/// Merges and validates. `file` and `flags` are JSON objects in the config
/// schema (either may be empty); `env_seed` is the ROBMEAN_SEED value if set.
inline RunConfig resolve(const Json& file, const Json& flags, std::optional<std::string> env_seed = std::nullopt) {
    detail::check_schema(file.is_null() ? Json::object() : file);
    detail::check_schema(flags.is_null() ? Json::object() : flags);

    Json layered = Json::object();
    if (env_seed) layered["seed"] = detail::parse_seed_text(kSeedEnv, *env_seed);
    if (!file.is_null()) layered.merge_patch(file);
    if (!flags.is_null()) layered.merge_patch(flags);

    std::string sub = "estimate";
    detail::take(layered, "subcommand", sub);
    std::string suite = "reuse-uniformity";
    detail::take(layered, "verify.suite", suite);
    if (sub == "verify") {
        bool known = false;
        for (auto s : verify::kSuites) known = known || s == suite;
        if (!known)
            detail::fail("verify.suite", "unknown suite '" + suite +
                                             "' (expected reuse-uniformity, poisson-dominance, "
                                             "poisson-convergence, complexity-tails or density-profile)");
    }

    Json eff = detail::defaults_for(sub, suite);
    eff.merge_patch(layered);

    RunConfig c;
    c.subcommand = sub;
    std::string s;
    detail::take(eff, "problem.id", c.problem);
    detail::take(eff, "problem.dim", c.dim);
    if (detail::lookup(eff, "problem.norm")) {
        try {
            c.norm = parse_norm(detail::lookup(eff, "problem.norm")->get<std::string>());
        } catch (const ValidationError& e) {
            detail::fail("problem.norm", e.what());
        }
    }
    detail::take(eff, "problem.max_radius", c.max_radius);
    if (const Json* v = detail::lookup(eff, "grid.scheme")) {
        try {
            c.scheme = parse_grid_scheme(v->get<std::string>());
        } catch (const ValidationError& e) {
            detail::fail("grid.scheme", e.what());
        }
    }
    detail::take(eff, "grid.levels", c.levels);
    detail::take(eff, "grid.min_radius", c.min_radius);
    detail::take(eff, "grid.radii", c.radii);
    detail::take(eff, "samples", c.samples);
    detail::take(eff, "replications", c.replications);
    detail::take(eff, "seed", c.seed);
    detail::take(eff, "threads", c.threads);
    detail::take(eff, "naive_baseline", c.naive_baseline);
    detail::take(eff, "output.path", c.output_path);
    if (const Json* v = detail::lookup(eff, "output.format")) {
        const auto f = v->get<std::string>();
        if (f == "csv") c.format = OutputFormat::csv;
        else if (f == "json") c.format = OutputFormat::json;
        else detail::fail("output.format", "expected csv or json, got '" + f + "'");
    }

    detail::require_range(c.dim >= 1, "problem.dim", ">= 1");
    detail::require_range(std::isfinite(c.max_radius) && c.max_radius > 0.0, "problem.max_radius", "> 0");
    detail::require_range(c.samples >= 1, "samples", ">= 1");

    if (sub == "estimate") {
        bool known = false;
        for (auto p : kBuiltinProblems) known = known || p == c.problem;
        if (!known)
            detail::fail("problem.id", "unknown problem '" + c.problem +
                                           "' (expected zero, odd-symmetric or quadratic-shift)");
        detail::require_range(c.samples >= 2, "samples", ">= 2");
        detail::require_range(c.replications == 1, "replications", "== 1 for estimate (one chain per run)");
    }
    if (sub == "estimate" || sub == "complexity") {
        if (c.scheme == GridScheme::explicit_radii) {
            detail::require_range(!c.radii.empty(), "grid.radii", "nonempty for the explicit scheme");
        } else {
            detail::require_range(c.levels >= 1, "grid.levels", ">= 1");
            detail::require_range(c.levels == 1 || (c.min_radius > 0.0 && c.min_radius < c.max_radius),
                                  "grid.min_radius", "0 < min_radius < problem.max_radius");
        }
        try {
            const GridSpec g = c.grid();
            detail::require_range(g.radii.front() <= c.max_radius, "grid.radii", "largest radius <= problem.max_radius");
        } catch (const ValidationError& e) {
            detail::fail("grid", e.what());
        }
    }

    if (sub == "density" || (sub == "verify" && suite == "density-profile")) {
        auto& dc = c.density;
        dc.dim = c.dim;
        dc.norm = c.norm;
        dc.n = c.samples;
        dc.replications = c.replications;
        dc.seed = c.seed;
        dc.threads = c.threads;
        detail::take(eff, "density.kappa", dc.kappa);
        detail::take(eff, "density.a", dc.a);
        detail::take(eff, "density.bins", dc.bins);
        detail::take(eff, "density.levels", dc.levels);
        detail::require_range(dc.kappa > 1.0, "density.kappa", "> 1");
        detail::require_range(dc.a > 0.0, "density.a", "> 0");
        detail::require_range(dc.bins >= 1, "density.bins", ">= 1");
        detail::require_range(dc.levels >= 2, "density.levels", ">= 2");
        detail::require_range(dc.replications >= 1, "replications", ">= 1");
    }

    if (sub == "verify") {
        auto t = verify::default_config(suite);
        t.dim = c.dim;
        t.norm = c.norm;
        t.max_radius = c.max_radius;
        t.levels = c.levels;
        t.min_radius = c.min_radius;
        t.n = c.samples;
        t.replications = c.replications;
        t.seed = c.seed;
        t.threads = c.threads;
        detail::take(eff, "verify.alpha", t.alpha);
        detail::take(eff, "verify.k_max", t.k_max);
        detail::take(eff, "verify.empirical_chains", t.empirical_chains);
        detail::take(eff, "verify.m_sweep", t.m_sweep);
        detail::take(eff, "verify.tv_threshold", t.tv_threshold);
        detail::take(eff, "verify.sectors", t.sectors);
        detail::take(eff, "verify.relative_tolerance", t.relative_tolerance);
        detail::take(eff, "verify.min_expected_count", t.min_expected_count);
        detail::take(eff, "verify.margin_z", t.margin_z);
        if (const Json* v = detail::lookup(eff, "verify.fault")) {
            try {
                t.fault = verify::parse_fault(v->get<std::string>());
            } catch (const ValidationError& e) {
                detail::fail("verify.fault", e.what());
            }
        }
        t.density = c.density;
        detail::require_range(t.alpha > 0.0 && t.alpha < 1.0, "verify.alpha", "0 < alpha < 1");
        detail::require_range(t.replications >= 1, "replications", ">= 1");
        detail::require_range(t.levels >= 1, "grid.levels", ">= 1");
        detail::require_range(t.levels == 1 || (t.min_radius > 0.0 && t.min_radius < t.max_radius),
                              "grid.min_radius", "0 < min_radius < problem.max_radius");
        c.test = t;
    }

    c.effective = std::move(eff);
    return c;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file '" + path + "'");
    try {
        return Json::parse(f, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

/// Reads ROBMEAN_SEED if set.
inline std::optional<std::string> env_seed() {
    if (const char* v = std::getenv(kSeedEnv); v && *v) return std::string(v);
    return std::nullopt;
}

/// Sets a dotted key in a flag-override object.
inline void set_flag(Json& flags, std::string_view path, Json value) { detail::set_path(flags, path, std::move(value)); }

}  // namespace robmean::config
