// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file strength.hpp
 * @brief Strength function (local density of states) of a basis state and
 * its Breit-Wigner / Gaussian shape classification.
 *
 * P0(E) is the kernel-smoothed distribution of |C_0^(k)|^2 over the exact
 * eigenvalues E_k, expressed as a function of E - E0. Profiles from several
 * realizations can be averaged on a common grid before fitting.
 */

#pragma once

#include <fockdyn/fit.hpp>
#include <fockdyn/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fockdyn {

enum class Shape { BreitWigner, Gaussian, Intermediate };

constexpr std::string_view to_string(Shape s) noexcept {
    switch (s) {
        case Shape::BreitWigner: return "BreitWigner";
        case Shape::Gaussian: return "Gaussian";
        case Shape::Intermediate: return "intermediate";
    }
    return "?";
}

/// BW when Gamma0 < Delta_E, Gaussian when Gamma0 >= 2 Delta_E.
constexpr Shape classify_shape(double gamma0, double delta_E) noexcept {
    if (gamma0 < delta_E) return Shape::BreitWigner;
    if (gamma0 >= 2.0 * delta_E) return Shape::Gaussian;
    return Shape::Intermediate;
}

/// Eigenvalue offsets from E0 with their weights |C_0^(k)|^2.
struct LdosSample {
    std::vector<double> offset;
    std::vector<double> weight;
    double bandwidth = 0.0;
};

/// Kernel bandwidth max(3 * mean level spacing, Gamma0 / 5).
inline double strength_bandwidth(const SpectralDecomposition& spec, double gamma0) {
    const auto n = spec.eigenvalues.size();
    const double span = spec.eigenvalues(n - 1) - spec.eigenvalues(0);
    if (n < 2 || !(span > 0.0)) throw std::domain_error("strength function: degenerate spectrum span");
    return std::max(3.0 * span / static_cast<double>(n - 1), gamma0 / 5.0);
}

inline LdosSample ldos_sample(const SpectralDecomposition& spec, std::size_t initial, double E0, double gamma0) {
    if (initial >= spec.size()) throw std::out_of_range("ldos_sample: index out of range");
    LdosSample s;
    s.bandwidth = strength_bandwidth(spec, gamma0);
    const auto i = static_cast<Eigen::Index>(initial);
    s.offset.resize(spec.size());
    s.weight.resize(spec.size());
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        s.offset[static_cast<std::size_t>(k)] = spec.eigenvalues(k) - E0;
        s.weight[static_cast<std::size_t>(k)] = spec.eigenvectors(i, k) * spec.eigenvectors(i, k);
    }
    return s;
}

/// Uniform grid covering every sample's support plus five kernel widths.
inline std::vector<double> strength_grid(std::span<const LdosSample> samples) {
    if (samples.empty()) throw std::invalid_argument("strength_grid: no samples");
    double lo = 0.0, hi = 0.0, h_min = samples.front().bandwidth, h_max = h_min;
    for (const auto& s : samples) {
        const auto [mn, mx] = std::minmax_element(s.offset.begin(), s.offset.end());
        lo = std::min(lo, *mn - 5.0 * s.bandwidth);
        hi = std::max(hi, *mx + 5.0 * s.bandwidth);
        h_min = std::min(h_min, s.bandwidth);
        h_max = std::max(h_max, s.bandwidth);
    }
    const double step = h_min / 4.0;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    std::vector<double> grid(n);
    for (std::size_t j = 0; j < n; ++j) grid[j] = lo + static_cast<double>(j) * step;
    return grid;
}

/// Ensemble-mean kernel-smoothed P0 on `grid`.
inline std::vector<double> smooth_ldos(std::span<const LdosSample> samples, std::span<const double> grid) {
    std::vector<double> P(grid.size(), 0.0);
    if (grid.size() < 2) return P;
    const double step = grid[1] - grid[0];
    for (const auto& s : samples) {
        const double h = s.bandwidth;
        const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * h * static_cast<double>(samples.size()));
        const auto reach = static_cast<std::ptrdiff_t>(std::ceil(8.0 * h / step));
        for (std::size_t k = 0; k < s.offset.size(); ++k) {
            if (s.weight[k] == 0.0) continue;
            const auto centre = static_cast<std::ptrdiff_t>(std::llround((s.offset[k] - grid.front()) / step));
            const auto j0 = std::max<std::ptrdiff_t>(0, centre - reach);
            const auto j1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.size()) - 1, centre + reach);
            for (auto j = j0; j <= j1; ++j) {
                const double z = (grid[static_cast<std::size_t>(j)] - s.offset[k]) / h;
                P[static_cast<std::size_t>(j)] += s.weight[k] * norm * std::exp(-0.5 * z * z);
            }
        }
    }
    return P;
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) acc += 0.5 * (x[j] - x[j - 1]) * (y[j] + y[j - 1]);
    return acc;
}

struct ShapeFit {
    double area = 0.0;
    double center = 0.0;
    double width = 0.0;  ///< Gamma (full width at half maximum) or sigma
    double ssr = 0.0;
};

inline double lorentzian(double x, double area, double center, double gamma) {
    const double d = x - center;
    return area / (2.0 * std::numbers::pi) * gamma / (d * d + 0.25 * gamma * gamma);
}

inline double gaussian(double x, double area, double center, double sigma) {
    const double d = x - center;
    return area / (std::sqrt(2.0 * std::numbers::pi) * sigma) * std::exp(-d * d / (2.0 * sigma * sigma));
}

struct StrengthFunction {
    std::vector<double> energy;  ///< E - E0
    std::vector<double> P0;
    ShapeFit lorentz;
    ShapeFit gauss;
    double fitted_gamma = 0.0;
    double fitted_sigma = 0.0;
    double gamma0 = 0.0;
    double delta_E = 0.0;
    double ratio = 0.0;  ///< Gamma0 / Delta_E
    Shape shape = Shape::BreitWigner;

    [[nodiscard]] bool lorentzian_wins() const noexcept { return lorentz.ssr < gauss.ssr; }
    [[nodiscard]] double integral() const { return trapezoid(energy, P0); }
};

/// Least-squares Lorentzian and Gaussian fits over |E - E0| <= 4 Delta_E.
inline StrengthFunction fit_strength(std::vector<double> grid, std::vector<double> P0, double gamma0,
                                     double delta_E) {
    if (grid.size() != P0.size() || grid.size() < 8) throw std::invalid_argument("fit_strength: bad profile");
    StrengthFunction sf;
    sf.gamma0 = gamma0;
    sf.delta_E = delta_E;
    sf.ratio = delta_E > 0.0 ? gamma0 / delta_E : std::numeric_limits<double>::infinity();
    sf.shape = classify_shape(gamma0, delta_E);

    const double step = grid[1] - grid[0];
    const double half = std::max(4.0 * delta_E, 16.0 * step);
    std::vector<double> x, y;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (std::abs(grid[j]) <= half) {
            x.push_back(grid[j]);
            y.push_back(P0[j]);
        }

    const double width_guess = std::max({std::min(gamma0, delta_E), 4.0 * step, 1e-12});

    auto lor = [](double e, const Eigen::Vector3d& p, Eigen::Vector3d& g) {
        const double d = e - p(1);
        const double G = p(2);
        const double den = d * d + 0.25 * G * G;
        const double c = 1.0 / (2.0 * std::numbers::pi);
        const double f = p(0) * c * G / den;
        g << c * G / den, p(0) * c * G * 2.0 * d / (den * den), p(0) * c * (den - 0.5 * G * G) / (den * den);
        return f;
    };
    auto gau = [](double e, const Eigen::Vector3d& p, Eigen::Vector3d& g) {
        const double d = e - p(1);
        const double s = p(2);
        const double ex = std::exp(-d * d / (2.0 * s * s));
        const double c = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s);
        const double f = p(0) * c * ex;
        g << c * ex, f * d / (s * s), f * (d * d / (s * s * s) - 1.0 / s);
        return f;
    };

    const auto rl = fit::levenberg_marquardt<3>(lor, x, y, Eigen::Vector3d(1.0, 0.0, width_guess));
    const auto rg = fit::levenberg_marquardt<3>(gau, x, y, Eigen::Vector3d(1.0, 0.0, std::max(delta_E, width_guess)));
    sf.lorentz = {rl.params(0), rl.params(1), std::abs(rl.params(2)), rl.ssr};
    sf.gauss = {rg.params(0), rg.params(1), std::abs(rg.params(2)), rg.ssr};
    sf.fitted_gamma = sf.lorentz.width;
    sf.fitted_sigma = sf.gauss.width;
    sf.energy = std::move(grid);
    sf.P0 = std::move(P0);
    return sf;
}

/// Strength function of one realization.
inline StrengthFunction strength_function(const SpectralDecomposition& spec, std::size_t initial, double E0,
                                          double gamma0, double delta_E) {
    const LdosSample s = ldos_sample(spec, initial, E0, gamma0);
    const std::span<const LdosSample> one(&s, 1);
    auto grid = strength_grid(one);
    auto P = smooth_ldos(one, grid);
    return fit_strength(std::move(grid), std::move(P), gamma0, delta_E);
}

} // namespace fockdyn
