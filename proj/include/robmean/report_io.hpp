#pragma once

// CSV and JSON emission for level tables, fresh-count pmfs and density
// profiles.
//
// Every CSV starts with a `# schema_version: 1` line followed by a header:
//
//   levels   rho,mean,stderr,reused,fresh
//   pmf      k,prob,poisson_prob
//   density  rho_center,empirical,theoretical,flag   (flag: exact | upper-bound)
//
// Reals are written with 17 significant digits so a parse of the output
// reproduces the doubles bit for bit.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "robmean/complexity.hpp"
#include "robmean/density.hpp"
#include "robmean/error.hpp"
#include "robmean/estimator.hpp"

namespace robmean::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kLevelsHeader = "rho,mean,stderr,reused,fresh";
inline constexpr std::string_view kPmfHeader = "k,prob,poisson_prob";
inline constexpr std::string_view kDensityHeader = "rho_center,empirical,theoretical,flag";

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_real(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("malformed number '" + std::string(s) + "'");
    return v;
}

inline std::size_t parse_count(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("malformed count '" + std::string(s) + "'");
    return v;
}

namespace detail {

inline void write_preamble(std::ostream& os, std::string_view header) {
    os << "# schema_version: " << kSchemaVersion << '\n' << header << '\n';
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Reads past the schema comment and checks the header; returns data lines.
inline std::vector<std::string> read_body(std::istream& is, std::string_view header) {
    std::string line;
    bool seen_header = false;
    std::vector<std::string> rows;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.find("schema_version") != std::string::npos &&
                line.substr(line.find(':') + 1).find(std::to_string(kSchemaVersion)) == std::string::npos)
                throw ValidationError("unsupported CSV schema: " + line);
            continue;
        }
        if (!seen_header) {
            if (line != header)
                throw ValidationError("unexpected CSV header '" + line + "', expected '" + std::string(header) + "'");
            seen_header = true;
            continue;
        }
        rows.push_back(line);
    }
    if (!seen_header) throw ValidationError("CSV has no header line");
    return rows;
}

}  // namespace detail

inline void write_levels_csv(std::ostream& os, const std::vector<LevelEstimate>& levels) {
    detail::write_preamble(os, kLevelsHeader);
    for (const auto& l : levels)
        os << format_real(l.radius) << ',' << format_real(l.mean) << ',' << format_real(l.std_error) << ','
           << l.reused << ',' << l.fresh << '\n';
}

inline std::vector<LevelEstimate> read_levels_csv(std::istream& is) {
    std::vector<LevelEstimate> out;
    for (const auto& row : detail::read_body(is, kLevelsHeader)) {
        const auto f = detail::split(row);
        if (f.size() != 5) throw ValidationError("levels CSV row needs 5 fields: " + row);
        out.push_back({parse_real(f[0]), parse_real(f[1]), parse_real(f[2]), parse_count(f[3]), parse_count(f[4])});
    }
    return out;
}

struct PmfRow {
    std::size_t k = 0;
    double prob = 0.0;
    double poisson_prob = 0.0;
};

/// Rows for k = 0..support_max of the exact law.
inline std::vector<PmfRow> pmf_rows(const FreshCountDist& dist, double lambda) {
    std::vector<PmfRow> rows;
    rows.reserve(dist.support_max() + 1);
    for (std::size_t k = 0; k <= dist.support_max(); ++k) rows.push_back({k, dist.prob(k), poisson_pmf(k, lambda)});
    return rows;
}

inline void write_pmf_csv(std::ostream& os, const std::vector<PmfRow>& rows) {
    detail::write_preamble(os, kPmfHeader);
    for (const auto& r : rows) os << r.k << ',' << format_real(r.prob) << ',' << format_real(r.poisson_prob) << '\n';
}

inline std::vector<PmfRow> read_pmf_csv(std::istream& is) {
    std::vector<PmfRow> out;
    for (const auto& row : detail::read_body(is, kPmfHeader)) {
        const auto f = detail::split(row);
        if (f.size() != 3) throw ValidationError("pmf CSV row needs 3 fields: " + row);
        out.push_back({parse_count(f[0]), parse_real(f[1]), parse_real(f[2])});
    }
    return out;
}

struct DensityRow {
    double rho_center = 0.0;
    double empirical = 0.0;
    double theoretical = 0.0;
    std::string flag;
};

inline void write_density_csv(std::ostream& os, const DensityProfile& prof) {
    detail::write_preamble(os, kDensityHeader);
    for (const auto& b : prof.bins)
        os << format_real(b.center) << ',' << format_real(b.empirical) << ',' << format_real(b.theoretical) << ','
           << to_string(b.flag) << '\n';
}

inline std::vector<DensityRow> read_density_csv(std::istream& is) {
    std::vector<DensityRow> out;
    for (const auto& row : detail::read_body(is, kDensityHeader)) {
        const auto f = detail::split(row);
        if (f.size() != 4) throw ValidationError("density CSV row needs 4 fields: " + row);
        if (f[3] != "exact" && f[3] != "upper-bound")
            throw ValidationError("density CSV flag must be exact or upper-bound: " + row);
        out.push_back({parse_real(f[0]), parse_real(f[1]), parse_real(f[2]), std::string(f[3])});
    }
    return out;
}

using Json = nlohmann::ordered_json;

inline Json to_json(const LevelEstimate& l) {
    return {{"rho", l.radius}, {"mean", l.mean}, {"stderr", l.std_error}, {"reused", l.reused}, {"fresh", l.fresh}};
}

inline Json to_json(const std::vector<LevelEstimate>& levels) {
    Json arr = Json::array();
    for (const auto& l : levels) arr.push_back(to_json(l));
    return arr;
}

inline std::vector<LevelEstimate> levels_from_json(const Json& arr) {
    std::vector<LevelEstimate> out;
    for (const auto& j : arr)
        out.push_back({j.at("rho").get<double>(), j.at("mean").get<double>(), j.at("stderr").get<double>(),
                       j.at("reused").get<std::size_t>(), j.at("fresh").get<std::size_t>()});
    return out;
}

inline Json to_json(const BoundsReport& b) {
    return {{"lower", b.lower},
            {"upper", b.upper},
            {"argmin_radius", b.argmin_radius},
            {"argmax_radius", b.argmax_radius},
            {"lower_stderr", b.lower_std_error},
            {"upper_stderr", b.upper_std_error},
            {"total_fresh", b.total_fresh},
            {"note", BoundsReport::kCaveat}};
}

inline Json to_json(const std::vector<PmfRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back({{"k", r.k}, {"prob", r.prob}, {"poisson_prob", r.poisson_prob}});
    return arr;
}

inline Json to_json(const DensityProfile& prof) {
    Json arr = Json::array();
    for (const auto& b : prof.bins)
        arr.push_back({{"rho_center", b.center},
                       {"empirical", b.empirical},
                       {"theoretical", b.theoretical},
                       {"flag", std::string(to_string(b.flag))},
                       {"bin_lo", b.lo},
                       {"bin_hi", b.hi},
                       {"empirical_se", b.empirical_se},
                       {"theoretical_bin_average", b.theoretical_bin}});
    return arr;
}

/// Writes `text` to `path`, creating parent directories.
inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace robmean::io
