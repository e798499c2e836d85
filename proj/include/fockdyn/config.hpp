// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Experiment configuration: a `key = value` text format, its parser,
 * validation and the time grid it describes.
 *
 * Example:
 *
 *     experiment  = tbri_bw
 *     model       = tbri
 *     n = 6
 *     m = 12
 *     V0sq = 0.003
 *     N_g = 2
 *     t_max = 40
 *     n_points = 200
 *     outputs = observables, strength_function
 *
 * `#` starts a comment; lists are comma separated; unknown or repeated keys
 * are errors.
 */

#pragma once

#include <fockdyn/hamiltonian.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fockdyn {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Model { Tbri, Wbrm };
enum class Spacing { Linear, Log };

struct Outputs {
    bool observables = true;
    bool snapshots = false;
    bool strength_function = false;
    bool theory_overlays = true;
};

inline constexpr int kLogPointsPerDecade = 64;

struct ExperimentConfig {
    std::string experiment = "experiment";
    Model model = Model::Tbri;
    TbriParams tbri{};
    WbrmParams wbrm{};
    std::optional<std::size_t> initial_index;  ///< empty: centre of the spectrum
    double t_min = 0.0;                         ///< first grid time (log grids need t_min > 0)
    double t_max = 40.0;
    std::size_t n_points = 200;  ///< for log spacing, 0 selects 64 points per decade
    Spacing spacing = Spacing::Linear;
    std::size_t N_g = 1;
    std::uint64_t master_seed = 1;
    Outputs outputs{};
    std::vector<double> snapshot_times;

    [[nodiscard]] std::size_t basis_size() const {
        return model == Model::Tbri ? static_cast<std::size_t>(binomial(tbri.m, tbri.n)) : wbrm.N;
    }
    [[nodiscard]] std::size_t initial() const { return initial_index.value_or(basis_size() / 2); }
};

/// Grid times: linear from t_min to t_max inclusive, or geometric.
inline std::vector<double> time_grid(const ExperimentConfig& c) {
    std::vector<double> t;
    if (c.spacing == Spacing::Linear) {
        const std::size_t n = c.n_points;
        t.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            t[j] = n == 1 ? c.t_max : c.t_min + (c.t_max - c.t_min) * static_cast<double>(j) / static_cast<double>(n - 1);
        if (n > 1) t.back() = c.t_max;
        return t;
    }
    const double decades = std::log10(c.t_max / c.t_min);
    const std::size_t n =
        c.n_points > 0 ? c.n_points : static_cast<std::size_t>(std::ceil(kLogPointsPerDecade * decades)) + 1;
    t.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        t[j] = n == 1 ? c.t_max : c.t_min * std::pow(10.0, decades * static_cast<double>(j) / static_cast<double>(n - 1));
    t.front() = c.t_min;
    t.back() = c.t_max;
    return t;
}

/// Index of the grid point equal to t (relative tolerance 1e-9), if any.
inline std::optional<std::size_t> grid_index(std::span<const double> grid, double t) {
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (std::abs(grid[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return j;
    return std::nullopt;
}

inline void validate(const ExperimentConfig& c) {
    if (c.experiment.empty() || c.experiment.find_first_of("/\\ ") != std::string::npos)
        throw ConfigError("experiment: must be a non-empty name without spaces or slashes");
    if (c.model == Model::Tbri) {
        validate(c.tbri);
        if (c.tbri.m > kMaxOrbitals) throw ConfigError("m: at most 64 orbitals are supported");
    } else {
        validate(c.wbrm);
    }
    if (c.initial_index && *c.initial_index >= c.basis_size())
        throw ConfigError("initial_index: " + std::to_string(*c.initial_index) + " outside basis of size " +
                          std::to_string(c.basis_size()));
    if (!(c.t_max > 0.0)) throw ConfigError("t_max: must be > 0");
    if (!(c.t_min >= 0.0) || !(c.t_min < c.t_max)) throw ConfigError("t_min: need 0 <= t_min < t_max");
    if (c.spacing == Spacing::Log && !(c.t_min > 0.0)) throw ConfigError("t_min: log spacing needs t_min > 0");
    if (c.spacing == Spacing::Linear && c.n_points < 1) throw ConfigError("n_points: must be >= 1");
    if (c.N_g < 1) throw ConfigError("N_g: must be >= 1");
    const auto grid = time_grid(c);
    for (double t : c.snapshot_times)
        if (!grid_index(grid, t)) throw ConfigError("snapshot_times: " + std::to_string(t) + " is not a grid point");
}

namespace detail {
inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

inline double parse_double(const std::string& key, std::string_view v) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError(key + ": '" + std::string(v) + "' is not a finite number");
    return x;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view v) {
    Int x{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError(key + ": '" + std::string(v) + "' is not a valid integer");
    return x;
}
} // namespace detail

/// Parse configuration text; `origin` names the source in error messages.
inline ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>") {
    ExperimentConfig c;
    std::map<std::string, std::pair<std::string, int>> entries;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (!entries.emplace(key, std::pair{value, line_no}).second)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    bool has_n_points = false;
    for (const auto& [key, entry] : entries) {
        const auto& [v, ln] = entry;
        const std::string where = origin + ":" + std::to_string(ln) + ": " + key;
        try {
            if (key == "experiment") {
                c.experiment = v;
            } else if (key == "model") {
                if (v == "tbri") c.model = Model::Tbri;
                else if (v == "wbrm") c.model = Model::Wbrm;
                else throw ConfigError("expected tbri or wbrm");
            } else if (key == "n") {
                c.tbri.n = detail::parse_int<int>(key, v);
            } else if (key == "m") {
                c.tbri.m = detail::parse_int<int>(key, v);
            } else if (key == "V0sq") {
                c.tbri.V0sq = detail::parse_double(key, v);
            } else if (key == "d0") {
                c.tbri.d0 = detail::parse_double(key, v);
            } else if (key == "N") {
                c.wbrm.N = detail::parse_int<std::size_t>(key, v);
            } else if (key == "b") {
                c.wbrm.b = detail::parse_int<std::size_t>(key, v);
            } else if (key == "D") {
                c.wbrm.D = detail::parse_double(key, v);
            } else if (key == "V0") {
                c.wbrm.V0 = detail::parse_double(key, v);
            } else if (key == "initial_index") {
                if (v == "center") c.initial_index.reset();
                else c.initial_index = detail::parse_int<std::size_t>(key, v);
            } else if (key == "t_min") {
                c.t_min = detail::parse_double(key, v);
            } else if (key == "t_max") {
                c.t_max = detail::parse_double(key, v);
            } else if (key == "n_points") {
                c.n_points = detail::parse_int<std::size_t>(key, v);
                has_n_points = true;
            } else if (key == "spacing") {
                if (v == "linear") c.spacing = Spacing::Linear;
                else if (v == "log") c.spacing = Spacing::Log;
                else throw ConfigError("expected linear or log");
            } else if (key == "N_g") {
                c.N_g = detail::parse_int<std::size_t>(key, v);
            } else if (key == "master_seed") {
                c.master_seed = detail::parse_int<std::uint64_t>(key, v);
            } else if (key == "outputs") {
                c.outputs = Outputs{false, false, false, false};
                for (const auto& o : detail::split_list(v)) {
                    if (o == "observables") c.outputs.observables = true;
                    else if (o == "snapshots") c.outputs.snapshots = true;
                    else if (o == "strength_function") c.outputs.strength_function = true;
                    else if (o == "theory_overlays") c.outputs.theory_overlays = true;
                    else throw ConfigError("unknown output '" + o + "'");
                }
            } else if (key == "snapshot_times") {
                c.snapshot_times.clear();
                for (const auto& s : detail::split_list(v)) c.snapshot_times.push_back(detail::parse_double(key, s));
            } else {
                throw ConfigError("unknown key");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    if (c.spacing == Spacing::Log && !has_n_points) c.n_points = 0;
    if (c.model == Model::Wbrm) c.tbri = TbriParams{};
    if (!c.snapshot_times.empty() && !entries.contains("outputs")) c.outputs.snapshots = true;
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

/// Canonical key/value echo of a configuration (parses back to the same config).
inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("experiment", c.experiment);
    if (c.model == Model::Tbri) {
        e.emplace_back("model", "tbri");
        e.emplace_back("n", std::to_string(c.tbri.n));
        e.emplace_back("m", std::to_string(c.tbri.m));
        e.emplace_back("V0sq", num(c.tbri.V0sq));
        e.emplace_back("d0", num(c.tbri.d0));
    } else {
        e.emplace_back("model", "wbrm");
        e.emplace_back("N", std::to_string(c.wbrm.N));
        e.emplace_back("b", std::to_string(c.wbrm.b));
        e.emplace_back("D", num(c.wbrm.D));
        e.emplace_back("V0", num(c.wbrm.V0));
    }
    e.emplace_back("initial_index", c.initial_index ? std::to_string(*c.initial_index) : "center");
    e.emplace_back("t_min", num(c.t_min));
    e.emplace_back("t_max", num(c.t_max));
    e.emplace_back("n_points", std::to_string(c.n_points));
    e.emplace_back("spacing", c.spacing == Spacing::Linear ? "linear" : "log");
    e.emplace_back("N_g", std::to_string(c.N_g));
    e.emplace_back("master_seed", std::to_string(c.master_seed));
    std::string outs;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!outs.empty()) outs += ", ";
        outs += name;
    };
    add(c.outputs.observables, "observables");
    add(c.outputs.snapshots, "snapshots");
    add(c.outputs.strength_function, "strength_function");
    add(c.outputs.theory_overlays, "theory_overlays");
    e.emplace_back("outputs", outs);
    std::string snaps;
    for (double t : c.snapshot_times) snaps += (snaps.empty() ? "" : ", ") + num(t);
    if (!snaps.empty()) e.emplace_back("snapshot_times", snaps);
    return e;
}

inline std::string to_text(const ExperimentConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
    return out;
}

} // namespace fockdyn
