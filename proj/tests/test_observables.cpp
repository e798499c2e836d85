// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <fockdyn/analysis.hpp>
#include <fockdyn/fit.hpp>
#include <fockdyn/hamiltonian.hpp>
#include <fockdyn/observables.hpp>
#include <fockdyn/spectral.hpp>
#include <fockdyn/strength.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

using namespace fockdyn;

TEST(Entropy, Examples) {
    EXPECT_EQ(entropy(std::vector<double>{1.0, 0.0, 0.0}), 0.0);
    EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
    const std::vector<double> uniform(100, 0.01);
    EXPECT_NEAR(entropy(uniform), std::log(100.0), 1e-12);
    EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.25, 0.25}), 1.5 * std::log(2.0), 1e-15);
}

TEST(Entropy, StaysInBoundsUnderRounding) {
    const std::vector<double> w{1.0 + 1e-15, 0.0, 0.0};
    EXPECT_EQ(entropy(w), 0.0);
    EXPECT_EQ(ipr(w), 1.0);
}

TEST(Ipr, Examples) {
    EXPECT_EQ(ipr(std::vector<double>{0.0, 1.0}), 1.0);
    EXPECT_NEAR(ipr(std::vector<double>(50, 0.02)), 50.0, 1e-10);
    EXPECT_NEAR(ipr(std::vector<double>{0.5, 0.25, 0.25}), 1.0 / 0.375, 1e-14);
}

TEST(Width, Examples) {
    EXPECT_EQ(packet_width(std::vector<double>{0.0, 1.0, 0.0}, 1), 0.0);
    EXPECT_NEAR(packet_width(std::vector<double>{0.5, 0.0, 0.5}, 1), 1.0, 1e-15);
    EXPECT_NEAR(packet_width(std::vector<double>{0.0, 0.0, 0.0, 1.0}, 0), 3.0, 1e-15);
    const std::vector<double> idx{-2.0, 0.0, 4.0};
    EXPECT_NEAR(packet_width(std::vector<double>{0.5, 0.0, 0.5}, idx, 0.0), std::sqrt(10.0), 1e-14);
}

TEST(Observables, PermutationCovarianceAndOrdering) {
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> ex(1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> w(64);
        for (auto& x : w) x = ex(rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= total;
        const double S = entropy(w);
        const double L = ipr(w);
        EXPECT_GE(std::exp(S), L * (1.0 - 1e-12));
        EXPECT_LE(S, std::log(64.0));
        EXPECT_GE(L, 1.0);
        std::shuffle(w.begin(), w.end(), rng);
        EXPECT_NEAR(entropy(w), S, 1e-12);
        EXPECT_NEAR(ipr(w), L, 1e-10);
    }
}

TEST(Observables, RejectInvalidDistributions) {
    EXPECT_THROW(entropy(std::vector<double>{0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(entropy(std::vector<double>{1.2, -0.2}), std::invalid_argument);
    EXPECT_THROW(ipr(std::vector<double>{0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(ipr(std::vector<double>{0.5, NAN, 0.5}), std::invalid_argument);
    EXPECT_THROW(packet_width(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}, 0.0), std::invalid_argument);
    EXPECT_THROW(observe(0.0, std::vector<double>{1.0}, 1), std::out_of_range);
}

TEST(Observables, ObserveBundlesEverything) {
    const std::vector<double> w{0.25, 0.5, 0.25};
    const auto r = observe(1.5, w, 1);
    EXPECT_EQ(r.t, 1.5);
    EXPECT_EQ(r.W0, 0.5);
    EXPECT_NEAR(r.S, 1.5 * std::log(2.0), 1e-15);
    EXPECT_NEAR(r.Npc, std::exp(r.S), 1e-15);
    EXPECT_NEAR(r.l_ipr, 1.0 / 0.375, 1e-14);
    EXPECT_NEAR(r.width, std::sqrt(0.5), 1e-15);
}

TEST(Fit, LinearExact) {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const auto l = fit::linear(x, y);
    EXPECT_NEAR(l.slope, 2.0, 1e-14);
    EXPECT_NEAR(l.intercept, 1.0, 1e-14);
    EXPECT_NEAR(l.r_squared, 1.0, 1e-14);
    EXPECT_NEAR(fit::r_squared(y, y), 1.0, 0.0);
    EXPECT_THROW(fit::linear(std::vector<double>{1, 1}, std::vector<double>{0, 1}), std::invalid_argument);
}

TEST(Fit, ExpPlateauRecoversParameters) {
    std::vector<double> t, y;
    for (int j = 0; j < 60; ++j) {
        t.push_back(0.1 * j);
        y.push_back(0.8 * std::exp(-1.3 * t.back()) + 0.05);
    }
    const auto f = fit::exp_plateau(t, y, 0.5);
    EXPECT_NEAR(f.amplitude, 0.8, 1e-6);
    EXPECT_NEAR(f.rate, 1.3, 1e-6);
    EXPECT_NEAR(f.plateau, 0.05, 1e-6);
}

TEST(Analysis, DominantPeriodOfSinusoid) {
    std::vector<double> t, y;
    for (int j = 0; j <= 400; ++j) {
        t.push_back(0.1 * j);
        y.push_back(3.0 + 0.2 * std::sin(2.0 * std::numbers::pi * t.back() / 6.0) + 0.05 * std::sin(17.0 * t.back()));
    }
    const auto osc = analysis::dominant_period(t, y, 8.0);
    ASSERT_TRUE(osc.period.has_value());
    EXPECT_NEAR(*osc.period, 6.0, 0.15);
    const std::vector<double> flat(401, 1.0);
    EXPECT_FALSE(analysis::dominant_period(t, flat, 8.0).period.has_value());
}

TEST(Analysis, WindowsAndSaturation) {
    std::vector<double> t, y;
    for (int j = 0; j <= 100; ++j) {
        t.push_back(0.01 * j);
        y.push_back(std::min(2.0 * t.back(), 1.0));
    }
    EXPECT_NEAR(analysis::window_fit(t, y, 0.1, 0.4).slope, 2.0, 1e-12);
    const auto s = analysis::saturation(t, y, 0.6);
    EXPECT_NEAR(s.level, 1.0, 1e-12);
    EXPECT_NEAR(s.time, 0.5, 1e-12);
    EXPECT_NEAR(analysis::saturation_level(t, y), 1.0, 1e-12);
    const auto g = analysis::growth_rate(t, y, 1.0);
    EXPECT_NEAR(g.line.slope, 2.0, 1e-12);
    EXPECT_THROW(analysis::window_mean(t, y, 5.0, 6.0), std::domain_error);
}

TEST(Analysis, EnhancementRatio) {
    std::vector<double> w(100, 1.0);
    w[50] = 3.0;
    EXPECT_NEAR(analysis::enhancement_ratio(w, 50), 3.0, 1e-15);
    EXPECT_NEAR(analysis::enhancement_ratio(w, 0), 1.0, 1e-15);  // edge: all 20 neighbours on one side
    w[99] = 2.0;
    EXPECT_NEAR(analysis::neighbor_mean(w, 99, 4), 1.0, 1e-15);
    EXPECT_THROW(analysis::neighbor_mean(w, 100, 4), std::invalid_argument);
}

TEST(Strength, ClassifyShape) {
    EXPECT_EQ(classify_shape(0.5, 1.1), Shape::BreitWigner);
    EXPECT_EQ(classify_shape(15.0, 5.8), Shape::Gaussian);
    EXPECT_EQ(classify_shape(1.5, 1.0), Shape::Intermediate);
    EXPECT_EQ(to_string(Shape::Gaussian), "Gaussian");
}

TEST(Strength, FitsRecoverSyntheticShapes) {
    std::vector<double> grid;
    for (int j = -400; j <= 400; ++j) grid.push_back(0.01 * j);
    std::vector<double> lor, gau;
    for (double e : grid) {
        lor.push_back(lorentzian(e, 1.0, 0.1, 0.4));
        gau.push_back(gaussian(e, 1.0, -0.05, 0.7));
    }
    const auto fl = fit_strength(grid, lor, 0.4, 1.0);
    EXPECT_TRUE(fl.lorentzian_wins());
    EXPECT_NEAR(fl.fitted_gamma, 0.4, 1e-6);
    EXPECT_NEAR(fl.lorentz.center, 0.1, 1e-6);
    const auto fg = fit_strength(grid, gau, 3.0, 1.0);
    EXPECT_FALSE(fg.lorentzian_wins());
    EXPECT_NEAR(fg.fitted_sigma, 0.7, 1e-6);
    EXPECT_EQ(fg.shape, Shape::Gaussian);
}

TEST(Strength, SingleRealizationIsNormalized) {
    for (double V0sq : {0.003, 0.083}) {
        TbriParams p;
        p.V0sq = V0sq;
        p.seed = 12;
        const auto H = make_tbri(p);
        const auto spec = diagonalize(H);
        const auto n0 = H.basis->center_index();
        const double g0 = gamma0(H, n0);
        const auto sf = strength_function(spec, n0, H.basis->energy(n0), g0, delta_E_numeric(H, n0));
        EXPECT_NEAR(sf.integral(), 1.0, 0.02) << V0sq;
        EXPECT_TRUE(std::all_of(sf.P0.begin(), sf.P0.end(), [](double x) { return x >= 0.0; }));
    }
}
