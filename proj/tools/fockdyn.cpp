// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

// fockdyn: command-line front end for ensemble runs, closed-form theory
// tables, packet snapshots and the canonical figure data set.

#include <fockdyn/runner.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef FOCKDYN_CONFIG_DIR
#define FOCKDYN_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace fockdyn;

namespace {

void write_tables(const fs::path& dir, const std::vector<Table>& tables) {
    for (const auto& t : tables) std::cout << "  wrote " << write_csv(dir, t).string() << '\n';
}

void print_summary(const ExperimentResult& res) {
    std::printf("%s: N=%zu  N_g=%zu  initial=%zu  M=%g  n_c=%.4f\n", res.config.experiment.c_str(), res.basis_size,
                res.realizations.size(), res.initial, res.branching, res.n_c);
    std::printf("  Delta_E=%.6g", res.delta_E);
    if (res.theory_available)
        std::printf("  Gamma0=%.6g  Gamma0/Delta_E=%.4g  regime=%s  Gamma_p=%.6g (%s)", res.gamma0,
                    res.gamma0 / res.delta_E, std::string(to_string(res.regime)).c_str(), res.gamma_p,
                    res.gamma_p_source.c_str());
    std::printf("\n  N_pc(inf)=%.6g  l_ipr(inf)=%.6g\n", res.Npc_inf, res.ipr_inf);
    if (res.strength)
        std::printf("  strength function: fitted Gamma=%.6g  sigma=%.6g  better fit=%s  integral=%.5f\n",
                    res.strength->fitted_gamma, res.strength->fitted_sigma,
                    res.strength->lorentzian_wins() ? "lorentzian" : "gaussian", res.strength->integral());
}

ExperimentResult run_and_write(const ExperimentConfig& config, const fs::path& out, std::size_t workers) {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run(config, workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print_summary(res);
    std::printf("  %.2f s\n", secs);
    write_tables(out / config.experiment, result_tables(res));
    return res;
}

struct TheoryOptions {
    std::string model;  // empty: use the explicit parameters
    double gamma = 0.5;
    double delta_E = 1.16;
    double M = 261;
    double Npc_inf = 0.0;
    double ipr_inf = 0.0;
    double n_c = 0.0;
    double slope = 0.0;
    double t_max = 10.0;
    std::size_t n_points = 201;
    int n = 6, m = 12;
    double V0sq = 0.003, d0 = 1.0;
    std::size_t N = 924, b = 110;
    double D = 1.0, V0 = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

/// Closed-form predictions on a linear grid.
Table theory_table(TheoryOptions o) {
    Table t;
    t.name = "theory";
    t.meta("fockdyn_version", FOCKDYN_VERSION);
    if (o.model == "tbri") {
        TbriParams p{o.n, o.m, o.V0sq, o.d0, o.seed};
        const auto H = make_tbri(p);
        const auto n0 = H.size() / 2;
        o.delta_E = delta_E_analytic(o.n, o.m, o.V0sq);
        o.gamma = gamma0(H, n0);
        o.M = static_cast<double>(direct_coupling_count(o.n, o.m));
        o.n_c = effective_class_count(static_cast<double>(H.size()), o.M);
        const Eigen::VectorXd row = H.matrix.row(static_cast<Eigen::Index>(n0)).transpose();
        o.slope = tbri_ballistic_slope(std::span<const double>(row.data(), H.size()), n0);
        if (o.Npc_inf <= 0.0) o.Npc_inf = static_cast<double>(H.size());
        t.meta("source", "tbri n=" + std::to_string(o.n) + " m=" + std::to_string(o.m) + " V0sq=" +
                             format_number(o.V0sq) + " seed=" + std::to_string(o.seed) +
                             " (Gamma0 and ballistic slope from one sampled matrix)");
    } else if (o.model == "wbrm") {
        o.delta_E = wbrm_delta_E_analytic(o.b, o.V0);
        o.gamma = wbrm_gamma_bw(o.D, o.V0);
        o.M = 2.0 * static_cast<double>(o.b);
        o.n_c = effective_class_count(static_cast<double>(o.N), o.M);
        o.slope = wbrm_ballistic_slope(static_cast<double>(o.b), o.V0);
        if (o.Npc_inf <= 0.0) o.Npc_inf = static_cast<double>(o.N);
        t.meta("source", "wbrm N=" + std::to_string(o.N) + " b=" + std::to_string(o.b) + " D=" + format_number(o.D) +
                             " V0=" + format_number(o.V0));
    } else if (!o.model.empty()) {
        throw std::invalid_argument("--model must be tbri or wbrm");
    }
    if (o.Npc_inf <= 0.0) o.Npc_inf = o.M;
    if (o.ipr_inf <= 0.0) o.ipr_inf = o.Npc_inf / 3.0;
    o.ipr_inf = std::max(o.ipr_inf, 1.0);
    const double g_eff = effective_rate(o.gamma, o.delta_E);
    t.meta("Gamma", o.gamma);
    t.meta("DeltaE", o.delta_E);
    t.meta("Gamma_eff", g_eff);
    t.meta("M", o.M);
    t.meta("Npc_inf", o.Npc_inf);
    t.meta("ipr_inf", o.ipr_inf);
    t.meta("t_c", survival_crossover_time(o.gamma, o.delta_E));
    if (o.n_c > 0.0) {
        t.meta("n_c", o.n_c);
        t.meta("oscillation_period", oscillation_period(o.n_c, o.gamma));
    }
    if (o.slope > 0.0) {
        t.meta("ballistic_slope", o.slope);
        t.meta("ballistic_saturation_time", ballistic_saturation_time(o.delta_E, o.slope));
    }
    t.columns = {"t",         "W0_theory",    "W1",          "W2",          "W3",
                 "S_cascade", "S_linear",     "S_small_time", "S_one_class", "ipr_cascade",
                 "ipr_one_class", "width_ballistic"};
    for (std::size_t j = 0; j < o.n_points; ++j) {
        const double tt = o.n_points == 1 ? o.t_max : o.t_max * static_cast<double>(j) / static_cast<double>(o.n_points - 1);
        const double W0 = std::max(survival_theory(tt, o.gamma, o.delta_E), std::numeric_limits<double>::min());
        t.add_row({tt, W0, class_population(1, W0), class_population(2, W0), class_population(3, W0),
                   entropy_cascade_x(g_eff * tt, o.M), g_eff * std::log(o.M) * tt,
                   entropy_small_time(tt, o.delta_E, o.M), entropy_one_class(W0, o.Npc_inf), ipr_cascade(W0, o.M),
                   ipr_one_class(W0, o.ipr_inf), width_ballistic(tt, o.slope)});
    }
    return t;
}

/// Schematic survival law: Gaussian and exponential branches joined at t_c.
Table survival_schematic() {
    const double gp = 0.5, de = 1.2;
    Table t;
    t.name = "survival_theory";
    t.meta("fockdyn_version", FOCKDYN_VERSION);
    t.meta("Gamma_p", gp);
    t.meta("DeltaE", de);
    t.meta("t_c", survival_crossover_time(gp, de));
    t.columns = {"t", "W0_theory", "gaussian_branch", "exponential_branch"};
    for (int j = 0; j <= 400; ++j) {
        const double tt = 4.0 * j / 400.0;
        t.add_row({tt, survival_theory(tt, gp, de), std::exp(-de * de * tt * tt), std::exp(-gp * tt)});
    }
    return t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fockdyn: wave-packet dynamics in random many-body Hamiltonians"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FOCKDYN_VERSION);
    std::size_t workers = worker_count();
    app.add_option("-j,--workers", workers, "Worker threads (default: FOCKDYN_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);

    auto* run_cmd = app.add_subcommand("run", "Run one ensemble experiment from a config file");
    std::string run_config, run_out = "results";
    run_cmd->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--out", run_out, "Output root; tables go to <out>/<experiment>/");

    auto* theory_cmd = app.add_subcommand("theory", "Evaluate the closed-form cascade predictions on a time grid");
    TheoryOptions th;
    theory_cmd->add_option("--model", th.model, "Derive Gamma, Delta_E, M from a model (tbri|wbrm)");
    theory_cmd->add_option("--Gamma", th.gamma, "Spreading width");
    theory_cmd->add_option("--DeltaE", th.delta_E, "Strength-function width");
    theory_cmd->add_option("--M", th.M, "Branching number");
    theory_cmd->add_option("--Npc-inf", th.Npc_inf, "Saturation N_pc (default: N for a model, else M)");
    theory_cmd->add_option("--ipr-inf", th.ipr_inf, "Saturation l_ipr (default: N_pc(inf)/3)");
    theory_cmd->add_option("--n-c", th.n_c, "Effective class count (for the oscillation period)");
    theory_cmd->add_option("--slope", th.slope, "Ballistic width slope");
    theory_cmd->add_option("--t-max", th.t_max, "Last grid time")->check(CLI::PositiveNumber);
    theory_cmd->add_option("--n-points", th.n_points, "Grid points")->check(CLI::PositiveNumber);
    theory_cmd->add_option("--n", th.n, "TBRI particles");
    theory_cmd->add_option("--m", th.m, "TBRI orbitals");
    theory_cmd->add_option("--V0sq", th.V0sq, "TBRI two-body variance");
    theory_cmd->add_option("--d0", th.d0, "TBRI single-particle spacing");
    theory_cmd->add_option("--N", th.N, "WBRM size");
    theory_cmd->add_option("--b", th.b, "WBRM band half-width");
    theory_cmd->add_option("--D", th.D, "WBRM diagonal spacing");
    theory_cmd->add_option("--V0", th.V0, "WBRM off-diagonal std");
    theory_cmd->add_option("--seed", th.seed, "Seed of the sampled TBRI matrix");
    theory_cmd->add_option("-o,--out", th.out, "Output directory (default: print to stdout)");

    auto* snap_cmd = app.add_subcommand("snapshot", "Dump single-realization packets w_f(t)");
    std::string snap_config, snap_out = "results", dump_matrix;
    std::vector<double> snap_times;
    snap_cmd->add_option("config", snap_config, "Config file")->required()->check(CLI::ExistingFile);
    snap_cmd->add_option("-t,--times", snap_times, "Snapshot times (default: the config's snapshot_times)")
        ->delimiter(',');
    snap_cmd->add_option("-o,--out", snap_out, "Output root; tables go to <out>/<experiment>/");
    snap_cmd->add_option("--dump-matrix", dump_matrix, "Also write the Hamiltonian as 'row col value' triplets");

    auto* fig_cmd = app.add_subcommand("figures-data", "Emit the canonical tables for the figure set");
    std::string fig_out = "figures-data", fig_configs = FOCKDYN_CONFIG_DIR;
    fig_cmd->add_option("-o,--out", fig_out, "Output root");
    fig_cmd->add_option("--configs", fig_configs, "Directory of fig*.cfg recipes")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            run_and_write(load_config(run_config), run_out, workers);
        } else if (*theory_cmd) {
            const auto t = theory_table(th);
            if (th.out.empty()) write_csv(std::cout, t);
            else std::cout << "wrote " << write_csv(fs::path(th.out), t).string() << '\n';
        } else if (*snap_cmd) {
            const auto config = load_config(snap_config);
            const std::vector<double> times = snap_times.empty() ? config.snapshot_times : snap_times;
            if (times.empty()) throw std::invalid_argument("no snapshot times: pass --times or set snapshot_times");
            for (double t : times)
                if (!(t >= 0.0)) throw std::invalid_argument("snapshot times must be >= 0");
            write_tables(fs::path(snap_out) / config.experiment, snapshot_dump(config, times));
            if (!dump_matrix.empty()) {
                std::ofstream os(dump_matrix);
                if (!os) throw std::runtime_error("cannot write " + dump_matrix);
                write_triplets(os, build_hamiltonian(config, realization_seed(config, 0)).matrix);
                std::cout << "  wrote " << dump_matrix << '\n';
            }
        } else if (*fig_cmd) {
            std::vector<fs::path> recipes;
            for (const auto& e : fs::directory_iterator(fig_configs))
                if (e.path().extension() == ".cfg" && e.path().filename().string().rfind("fig", 0) == 0)
                    recipes.push_back(e.path());
            std::sort(recipes.begin(), recipes.end());
            if (recipes.empty()) throw std::runtime_error("no fig*.cfg recipes in " + fig_configs);
            write_tables(fs::path(fig_out) / "fig01_survival", {survival_schematic()});
            for (const auto& p : recipes) run_and_write(load_config(p.string()), fig_out, workers);
        }
    } catch (const std::exception& e) {
        std::cerr << "fockdyn: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
