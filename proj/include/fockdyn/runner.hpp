// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file runner.hpp
 * @brief Seeded ensemble experiments: build, diagonalize and propagate N_g
 * realizations, reduce their observables in realization order and attach the
 * cascade-model predictions.
 *
 * Realization r uses seed derive_seed(master_seed, r). Realizations run on
 * worker threads (FOCKDYN_WORKERS, default: hardware concurrency); every
 * reduction is a sequential fold in ascending r, so results are bit-identical
 * for any worker count.
 */

#pragma once

#include <fockdyn/analysis.hpp>
#include <fockdyn/basis.hpp>
#include <fockdyn/cascade.hpp>
#include <fockdyn/config.hpp>
#include <fockdyn/hamiltonian.hpp>
#include <fockdyn/observables.hpp>
#include <fockdyn/rng.hpp>
#include <fockdyn/spectral.hpp>
#include <fockdyn/strength.hpp>
#include <fockdyn/table.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#ifndef FOCKDYN_VERSION
#define FOCKDYN_VERSION "unversioned"
#endif

namespace fockdyn {

struct RealizationError : std::runtime_error {
    RealizationError(std::size_t index, std::uint64_t seed, const std::string& what)
        : std::runtime_error("realization " + std::to_string(index) + " (seed " + std::to_string(seed) +
                             ") failed: " + what),
          index(index), seed(seed) {}
    std::size_t index;
    std::uint64_t seed;
};

/// Worker count from FOCKDYN_WORKERS, else the available hardware parallelism.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("FOCKDYN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs job(i) for i in [0, count) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers have stopped.
template <class Job>
void parallel_for(std::size_t count, std::size_t workers, Job&& job) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::uint64_t realization_seed(const ExperimentConfig& c, std::size_t r) {
    return derive_seed(c.master_seed, r);
}

inline Hamiltonian build_hamiltonian(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.model == Model::Tbri) {
        auto p = c.tbri;
        p.seed = seed;
        return make_tbri(p);
    }
    auto p = c.wbrm;
    p.seed = seed;
    return build_wbrm(p);
}

/// Number of states directly coupled to a generic basis state.
inline std::size_t branching_number(const ExperimentConfig& c) {
    if (c.model == Model::Tbri) return static_cast<std::size_t>(direct_coupling_count(c.tbri.n, c.tbri.m));
    return 2 * c.wbrm.b;
}

/// Structural class of every basis state relative to `initial`.
inline std::vector<int> structural_classes(const Hamiltonian& H, std::size_t initial) {
    if (H.basis) return classify(*H.basis, initial).class_of;
    const auto& w = std::get<WbrmParams>(H.provenance);
    std::vector<int> cls(H.size());
    for (std::size_t f = 0; f < cls.size(); ++f) {
        const std::size_t d = f > initial ? f - initial : initial - f;
        cls[f] = static_cast<int>((d + w.b - 1) / w.b);
    }
    return cls;
}

struct Realization {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double E0 = 0.0;
    std::optional<double> gamma0;  ///< empty when the golden-rule estimate is undefined
    double delta_E = 0.0;
    double ballistic_slope = 0.0;  ///< sqrt(sum_f (f - n0)^2 H_0f^2)
    double residual_norm = 0.0;
    std::vector<ObservableRecord> records;
    std::vector<double> stationary;
    LdosSample ldos;
};

inline Realization run_realization(const ExperimentConfig& c, std::span<const double> times, std::size_t r) {
    Realization out;
    out.index = r;
    out.seed = realization_seed(c, r);
    const Hamiltonian H = build_hamiltonian(c, out.seed);
    const std::size_t n0 = c.initial();
    if (n0 >= H.size()) throw std::out_of_range("initial index outside the basis");
    const auto i = static_cast<Eigen::Index>(n0);
    out.E0 = H.matrix(i, i);
    out.delta_E = delta_E_numeric(H, n0);
    try {
        out.gamma0 = gamma0(H, n0);
    } catch (const std::domain_error&) {
        out.gamma0.reset();
    }
    const Eigen::VectorXd row = H.matrix.row(i).transpose();
    out.ballistic_slope = tbri_ballistic_slope(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())), n0);

    const SpectralDecomposition spec = diagonalize(H);
    out.residual_norm = spec.residual_norm;
    const Eigen::MatrixXd W = evolve_probabilities(spec, n0, times);
    out.records.reserve(times.size());
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        const Eigen::VectorXd w = W.col(j);
        out.records.push_back(observe(times[static_cast<std::size_t>(j)],
                                      std::span<const double>(w.data(), static_cast<std::size_t>(w.size())), n0));
    }
    const Eigen::VectorXd ws = stationary_distribution(spec, n0);
    out.stationary.assign(ws.data(), ws.data() + ws.size());
    if (c.outputs.strength_function) out.ldos = ldos_sample(spec, n0, out.E0, out.gamma0.value_or(0.0));
    return out;
}

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<double> times;
    std::size_t initial = 0;
    std::size_t basis_size = 0;
    std::vector<Realization> realizations;

    std::vector<ObservableRecord> mean;  ///< ensemble mean per grid time
    std::vector<ObservableRecord> lo;    ///< per-realization minimum
    std::vector<ObservableRecord> hi;    ///< per-realization maximum
    std::vector<double> stationary;      ///< ensemble-mean w_f^s

    double gamma0 = std::numeric_limits<double>::quiet_NaN();  ///< mean over realizations
    double delta_E = 0.0;                                       ///< mean over realizations
    double ballistic_slope = 0.0;                               ///< mean numeric slope
    double branching = 0.0;                                     ///< M
    double n_c = 0.0;                                           ///< ln N / ln M
    double Npc_inf = 1.0;
    double ipr_inf = 1.0;
    double gamma_p = std::numeric_limits<double>::quiet_NaN();
    std::string gamma_p_source;
    double t_c = std::numeric_limits<double>::quiet_NaN();
    bool theory_available = false;
    std::string theory_note;
    Shape regime = Shape::BreitWigner;
    std::optional<StrengthFunction> strength;

    [[nodiscard]] std::vector<double> series(double ObservableRecord::*field) const {
        std::vector<double> v;
        v.reserve(mean.size());
        for (const auto& r : mean) v.push_back(r.*field);
        return v;
    }
    [[nodiscard]] CascadeParams cascade() const {
        return {gamma0, delta_E, branching, Npc_inf, ipr_inf, n_c};
    }
    /// Rate that plays Gamma's role in the entropy laws: min(Gamma0, Delta_E).
    [[nodiscard]] double effective_gamma() const { return effective_rate(gamma0, delta_E); }
};

namespace detail {
inline void fold(ObservableRecord& acc, const ObservableRecord& x, double (*op)(double, double)) {
    acc.W0 = op(acc.W0, x.W0);
    acc.S = op(acc.S, x.S);
    acc.Npc = op(acc.Npc, x.Npc);
    acc.l_ipr = op(acc.l_ipr, x.l_ipr);
    acc.width = op(acc.width, x.width);
}
} // namespace detail

/// Reduce realizations (ascending index) and derive the cascade parameters.
inline void reduce(ExperimentResult& res) {
    const auto& R = res.realizations;
    const std::size_t T = res.times.size();
    const double ng = static_cast<double>(R.size());
    res.mean.assign(T, ObservableRecord{});
    res.lo = R.front().records;
    res.hi = R.front().records;
    for (std::size_t j = 0; j < T; ++j) {
        ObservableRecord acc{res.times[j], 0.0, 0.0, 0.0, 0.0, 0.0};
        for (const auto& r : R) {
            detail::fold(acc, r.records[j], [](double a, double b) { return a + b; });
            detail::fold(res.lo[j], r.records[j], [](double a, double b) { return std::min(a, b); });
            detail::fold(res.hi[j], r.records[j], [](double a, double b) { return std::max(a, b); });
        }
        acc.W0 /= ng;
        acc.S /= ng;
        acc.Npc /= ng;
        acc.l_ipr /= ng;
        acc.width /= ng;
        res.mean[j] = acc;
    }
    res.stationary.assign(res.basis_size, 0.0);
    for (const auto& r : R)
        for (std::size_t f = 0; f < res.basis_size; ++f) res.stationary[f] += r.stationary[f];
    for (double& w : res.stationary) w /= ng;

    double g = 0.0, de = 0.0, slope = 0.0;
    bool have_gamma = true;
    for (const auto& r : R) {
        have_gamma = have_gamma && r.gamma0.has_value();
        g += r.gamma0.value_or(0.0);
        de += r.delta_E;
        slope += r.ballistic_slope;
    }
    res.delta_E = de / ng;
    res.ballistic_slope = slope / ng;
    res.branching = static_cast<double>(branching_number(res.config));
    res.n_c = res.basis_size > 1 && res.branching > 1.0
                  ? effective_class_count(static_cast<double>(res.basis_size), res.branching)
                  : std::numeric_limits<double>::quiet_NaN();
    if (have_gamma) res.gamma0 = g / ng;

    const auto S = res.series(&ObservableRecord::S);
    const auto L = res.series(&ObservableRecord::l_ipr);
    res.Npc_inf = std::exp(analysis::saturation_level(res.times, S));
    res.ipr_inf = analysis::saturation_level(res.times, L);

    if (!have_gamma || !(res.gamma0 > 0.0) || !(res.delta_E > 0.0) || !(res.branching > 1.0)) {
        res.theory_available = false;
        res.theory_note = "no interaction-induced spreading width for this configuration";
        return;
    }
    res.theory_available = true;
    res.regime = classify_shape(res.gamma0, res.delta_E);
    res.gamma_p = res.gamma0;
    res.gamma_p_source = "Gamma0";
    if (res.regime != Shape::BreitWigner) {
        try {
            const auto W0 = res.series(&ObservableRecord::W0);
            const auto f = fit_gamma_p(res.times, W0, res.gamma0, res.delta_E);
            if (f.gamma_p > 0.0 && std::isfinite(f.gamma_p)) {
                res.gamma_p = f.gamma_p;
                res.gamma_p_source = "fit";
            }
        } catch (const std::exception&) {
            res.gamma_p_source = "Gamma0 (fit window not resolved by the grid)";
        }
    }
    res.t_c = survival_crossover_time(res.gamma_p, res.delta_E);
}

inline ExperimentResult run(const ExperimentConfig& config, std::size_t workers = worker_count()) {
    validate(config);
    ExperimentResult res;
    res.config = config;
    res.times = time_grid(config);
    res.initial = config.initial();
    res.basis_size = config.basis_size();
    res.realizations.resize(config.N_g);
    parallel_for(config.N_g, workers, [&](std::size_t r) {
        try {
            res.realizations[r] = run_realization(config, res.times, r);
        } catch (const std::exception& e) {
            throw RealizationError(r, realization_seed(config, r), e.what());
        }
    });
    reduce(res);

    if (config.outputs.strength_function && res.delta_E > 0.0) {
        std::vector<LdosSample> samples;
        for (const auto& r : res.realizations) samples.push_back(r.ldos);
        auto grid = strength_grid(samples);
        auto P = smooth_ldos(samples, grid);
        const double g0 = res.theory_available ? res.gamma0 : 0.0;
        res.strength = fit_strength(std::move(grid), std::move(P), g0, res.delta_E);
    }
    return res;
}

// ---------------------------------------------------------------- tables

inline void add_common_metadata(Table& t, const ExperimentResult& res) {
    t.meta("fockdyn_version", FOCKDYN_VERSION);
    for (const auto& [k, v] : config_entries(res.config)) t.meta("config." + k, v);
    std::string seeds;
    for (const auto& r : res.realizations) seeds += (seeds.empty() ? "" : " ") + std::to_string(r.seed);
    t.meta("seeds", seeds);
    t.meta("initial_index", std::to_string(res.initial));
    t.meta("N", std::to_string(res.basis_size));
    t.meta("M", res.branching);
    t.meta("n_c", res.n_c);
    t.meta("DeltaE", res.delta_E);
    if (res.theory_available) {
        t.meta("Gamma0", res.gamma0);
        t.meta("regime", std::string(to_string(res.regime)));
        t.meta("Gamma_p", res.gamma_p);
        t.meta("Gamma_p_source", res.gamma_p_source);
        t.meta("t_c", res.t_c);
        t.meta("Gamma_eff", res.effective_gamma());
    } else {
        t.meta("theory", res.theory_note);
    }
    t.meta("Npc_inf", res.Npc_inf);
    t.meta("ipr_inf", res.ipr_inf);
    t.meta("ballistic_slope_numeric", res.ballistic_slope);
    if (res.config.model == Model::Wbrm)
        t.meta("ballistic_slope_theory", wbrm_ballistic_slope(static_cast<double>(res.config.wbrm.b), res.config.wbrm.V0));
}

inline double theory_ballistic_slope(const ExperimentResult& res) {
    if (res.config.model == Model::Wbrm)
        return wbrm_ballistic_slope(static_cast<double>(res.config.wbrm.b), res.config.wbrm.V0);
    return res.ballistic_slope;
}

/// Per-time ensemble means, min/max envelopes and theory overlays.
inline Table observables_table(const ExperimentResult& res) {
    Table t;
    t.name = "observables";
    add_common_metadata(t, res);
    t.columns = {"t",      "W0",     "S",      "Npc",    "l_ipr",     "width",     "W0_min",   "W0_max",
                 "S_min",  "S_max",  "Npc_min", "Npc_max", "l_ipr_min", "l_ipr_max", "width_min", "width_max"};
    const bool theory = res.theory_available && res.config.outputs.theory_overlays;
    if (theory) {
        for (const char* c : {"W0_theory", "S_one_class", "Npc_one_class", "ipr_one_class", "S_linear", "S_cascade",
                              "S_small_time", "ipr_cascade", "width_ballistic"})
            t.columns.emplace_back(c);
    }
    const double M = res.branching;
    const double g_eff = res.effective_gamma();
    const double slope = theory_ballistic_slope(res);
    for (std::size_t j = 0; j < res.times.size(); ++j) {
        const auto& m = res.mean[j];
        const auto& a = res.lo[j];
        const auto& b = res.hi[j];
        std::vector<double> row{m.t,     m.W0,    m.S,     m.Npc,   m.l_ipr,   m.width,   a.W0,    b.W0,
                                a.S,     b.S,     a.Npc,   b.Npc,   a.l_ipr,   b.l_ipr,   a.width, b.width};
        if (theory) {
            const double t_ = m.t;
            const double W0 = std::clamp(m.W0, std::numeric_limits<double>::min(), 1.0);
            const double S1 = entropy_one_class(W0, res.Npc_inf);
            row.insert(row.end(), {survival_theory(t_, res.gamma_p, res.delta_E), S1, std::exp(S1),
                                   ipr_one_class(W0, res.ipr_inf), g_eff * std::log(M) * t_,
                                   entropy_cascade_x(g_eff * t_, M), entropy_small_time(t_, res.delta_E, M),
                                   ipr_cascade(W0, M), width_ballistic(t_, slope)});
        }
        t.add_row(std::move(row));
    }
    return t;
}

/// Ensemble strength function with its Lorentzian and Gaussian fits.
inline Table strength_table(const ExperimentResult& res) {
    if (!res.strength) throw std::logic_error("strength_table: strength function was not computed");
    const auto& sf = *res.strength;
    Table t;
    t.name = "strength_function";
    add_common_metadata(t, res);
    t.meta("lorentz_area", sf.lorentz.area);
    t.meta("lorentz_center", sf.lorentz.center);
    t.meta("fitted_gamma", sf.fitted_gamma);
    t.meta("lorentz_ssr", sf.lorentz.ssr);
    t.meta("gauss_area", sf.gauss.area);
    t.meta("gauss_center", sf.gauss.center);
    t.meta("fitted_sigma", sf.fitted_sigma);
    t.meta("gauss_ssr", sf.gauss.ssr);
    t.meta("better_fit", sf.lorentzian_wins() ? "lorentzian" : "gaussian");
    t.meta("shape", std::string(to_string(sf.shape)));
    t.meta("ratio_Gamma0_over_DeltaE", sf.ratio);
    t.meta("integral", sf.integral());
    t.columns = {"E_minus_E0", "P0", "lorentzian_fit", "gaussian_fit"};
    for (std::size_t j = 0; j < sf.energy.size(); ++j) {
        const double e = sf.energy[j];
        t.add_row({e, sf.P0[j], lorentzian(e, sf.lorentz.area, sf.lorentz.center, sf.lorentz.width),
                   gaussian(e, sf.gauss.area, sf.gauss.center, sf.gauss.width)});
    }
    return t;
}

/// Ensemble-mean stationary distribution against the basis index.
inline Table stationary_table(const ExperimentResult& res) {
    Table t;
    t.name = "stationary";
    add_common_metadata(t, res);
    t.meta("enhancement_ratio_20", analysis::enhancement_ratio(res.stationary, res.initial, 20));
    t.columns = {"f", "offset", "w_s"};
    for (std::size_t f = 0; f < res.stationary.size(); ++f)
        t.add_row({static_cast<double>(f), static_cast<double>(f) - static_cast<double>(res.initial), res.stationary[f]});
    return t;
}

/**
 * @brief Packet snapshots of a single realization (realization 0): one table
 * per time with the basis index f, unperturbed energy E_f, w_f and the
 * structural class of f. No ensemble average.
 */
inline std::vector<Table> snapshot_dump(const ExperimentConfig& config, std::span<const double> times) {
    validate(config);
    const std::uint64_t seed = realization_seed(config, 0);
    const Hamiltonian H = build_hamiltonian(config, seed);
    const std::size_t n0 = config.initial();
    const auto spec = diagonalize(H);
    const auto cls = structural_classes(H, n0);
    const auto E = H.unperturbed_energies();
    const Eigen::MatrixXd W = evolve_probabilities(spec, n0, times);

    std::vector<Table> out;
    for (std::size_t j = 0; j < times.size(); ++j) {
        Table t;
        t.name = "snapshot_" + std::to_string(j);
        t.meta("fockdyn_version", FOCKDYN_VERSION);
        for (const auto& [k, v] : config_entries(config)) t.meta("config." + k, v);
        t.meta("seed", std::to_string(seed));
        t.meta("t", times[j]);
        t.meta("initial_index", std::to_string(n0));
        t.columns = {"f", "E_f", "w_f", "class"};
        for (std::size_t f = 0; f < H.size(); ++f)
            t.add_row({static_cast<double>(f), E[f], W(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(j)),
                       static_cast<double>(cls[f])});
        out.push_back(std::move(t));
    }
    return out;
}

/// All tables requested by the configuration's `outputs`.
inline std::vector<Table> result_tables(const ExperimentResult& res) {
    std::vector<Table> out;
    if (res.config.outputs.observables || res.config.outputs.theory_overlays) out.push_back(observables_table(res));
    if (res.config.outputs.strength_function && res.strength) {
        out.push_back(strength_table(res));
        out.push_back(stationary_table(res));
    }
    if (res.config.outputs.snapshots && !res.config.snapshot_times.empty())
        for (auto& t : snapshot_dump(res.config, res.config.snapshot_times)) out.push_back(std::move(t));
    return out;
}

} // namespace fockdyn
