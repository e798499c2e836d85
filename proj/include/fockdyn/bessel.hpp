// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>

namespace fockdyn {

inline constexpr double kBesselCrossover = 20.0;

namespace detail {
/// Hankel series sum_k ((2k-1)!!)^2 / (k! (8x)^k), cut where terms stop shrinking.
inline double i0_asymptotic_sum(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

inline double i0_power_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}
} // namespace detail

/// Modified Bessel function I0(x). Power series up to |x| = 20, asymptotic
/// expansion e^x / sqrt(2 pi x) * (...) beyond.
inline double bessel_i0(double x) {
    x = std::abs(x);
    if (x <= kBesselCrossover) return detail::i0_power_series(x);
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * detail::i0_asymptotic_sum(x);
}

/// Exponentially scaled e^{-|x|} I0(x); finite for every finite x.
inline double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x <= kBesselCrossover) return std::exp(-x) * detail::i0_power_series(x);
    return detail::i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

} // namespace fockdyn
