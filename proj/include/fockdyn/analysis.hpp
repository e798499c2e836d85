// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Measurements on observable time series: saturation levels, slope
 * windows, oscillation periods, ballistic spread and the stationary
 * self-correlation enhancement.
 */

#pragma once

#include <fockdyn/fit.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fockdyn::analysis {

/// Mean of y over the samples with lo <= t <= hi.
inline double window_mean(std::span<const double> t, std::span<const double> y, double lo, double hi) {
    if (t.size() != y.size()) throw std::invalid_argument("window_mean: size mismatch");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] >= lo && t[j] <= hi) {
            acc += y[j];
            ++n;
        }
    if (n == 0) throw std::domain_error("window_mean: empty window");
    return acc / static_cast<double>(n);
}

/// Late-time level: mean of y over the second half of the grid, t >= t_max / 2.
inline double saturation_level(std::span<const double> t, std::span<const double> y) {
    if (t.empty()) throw std::invalid_argument("saturation_level: empty series");
    return window_mean(t, y, 0.5 * t.back(), t.back());
}

/// Least-squares line through the samples with lo <= t <= hi.
inline fit::Line window_fit(std::span<const double> t, std::span<const double> y, double lo, double hi) {
    std::vector<double> x, v;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] >= lo && t[j] <= hi) {
            x.push_back(t[j]);
            v.push_back(y[j]);
        }
    if (x.size() < 3) throw std::domain_error("window_fit: fewer than 3 samples in window");
    return fit::linear(x, v);
}

struct GrowthWindow {
    fit::Line line;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t points = 0;
};

/**
 * @brief Linear growth rate of a saturating curve: fit over the samples where
 * lo_frac * y_inf <= y <= hi_frac * y_inf, restricted to times before y first
 * reaches 0.9 y_inf.
 */
inline GrowthWindow growth_rate(std::span<const double> t, std::span<const double> y, double y_inf,
                                double lo_frac = 0.3, double hi_frac = 0.7) {
    std::size_t stop = t.size();
    for (std::size_t j = 0; j < t.size(); ++j)
        if (y[j] >= 0.9 * y_inf) {
            stop = j;
            break;
        }
    std::vector<double> x, v;
    for (std::size_t j = 0; j < stop; ++j)
        if (y[j] >= lo_frac * y_inf && y[j] <= hi_frac * y_inf) {
            x.push_back(t[j]);
            v.push_back(y[j]);
        }
    if (x.size() < 3) throw std::domain_error("growth_rate: fewer than 3 samples in the growth window");
    return {fit::linear(x, v), x.front(), x.back(), x.size()};
}

struct Oscillation {
    std::optional<double> period;  ///< median spacing of residual maxima
    std::vector<double> peak_times;
};

/**
 * @brief Dominant oscillation period of y for t >= t_start. The residual
 * y - mean(y) is smoothed by a centred moving average of `smoothing` time
 * units (edges trimmed); positive local maxima are taken as peaks.
 */
inline Oscillation dominant_period(std::span<const double> t, std::span<const double> y, double t_start,
                                   double smoothing = 1.5) {
    if (t.size() != y.size()) throw std::invalid_argument("dominant_period: size mismatch");
    std::vector<double> tt, r;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] >= t_start) {
            tt.push_back(t[j]);
            r.push_back(y[j]);
        }
    Oscillation out;
    if (tt.size() < 8) return out;
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    for (double& v : r) v -= mean;

    const double dt = tt[1] - tt[0];
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(smoothing / dt)));
    if (2 * k + 3 > r.size()) return out;
    // centred box of k samples (k/2 before, (k-1)/2 after), k samples trimmed at each end
    std::vector<double> s;
    std::vector<double> ts;
    for (std::size_t j = k; j + k < r.size(); ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < k; ++q) acc += r[j + q - k / 2];
        s.push_back(acc / static_cast<double>(k));
        ts.push_back(tt[j]);
    }
    for (std::size_t j = 1; j + 1 < s.size(); ++j)
        if (s[j] > s[j - 1] && s[j] >= s[j + 1] && s[j] > 0.0) out.peak_times.push_back(ts[j]);
    if (out.peak_times.size() < 2) return out;
    std::vector<double> gaps;
    for (std::size_t j = 1; j < out.peak_times.size(); ++j) gaps.push_back(out.peak_times[j] - out.peak_times[j - 1]);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t g = gaps.size();
    out.period = g % 2 == 1 ? gaps[g / 2] : 0.5 * (gaps[g / 2 - 1] + gaps[g / 2]);
    return out;
}

struct Saturation {
    double level = 0.0;  ///< mean over the late window
    double time = 0.0;   ///< first grid time at which y >= level
};

/// Saturation level as the mean over [t_from, end], and its first crossing.
inline Saturation saturation(std::span<const double> t, std::span<const double> y, double t_from) {
    Saturation s;
    s.level = window_mean(t, y, t_from, t.back());
    s.time = t.back();
    for (std::size_t j = 0; j < t.size(); ++j)
        if (y[j] >= s.level) {
            s.time = t[j];
            break;
        }
    return s;
}

/// w_s[initial] over the mean of w_s on the `neighbors` nearest indices
/// (half on each side, shifted inward at the edges).
inline double neighbor_mean(std::span<const double> w, std::size_t initial, std::size_t neighbors) {
    if (initial >= w.size() || neighbors == 0 || neighbors >= w.size())
        throw std::invalid_argument("neighbor_mean: bad index or neighbor count");
    double acc = 0.0;
    std::size_t got = 0;
    for (std::size_t d = 1; got < neighbors && d < w.size(); ++d) {
        if (initial >= d) {
            acc += w[initial - d];
            ++got;
        }
        if (got < neighbors && initial + d < w.size()) {
            acc += w[initial + d];
            ++got;
        }
    }
    return acc / static_cast<double>(got);
}

inline double enhancement_ratio(std::span<const double> w, std::size_t initial, std::size_t neighbors = 20) {
    return w[initial] / neighbor_mean(w, initial, neighbors);
}

/// Maximum relative deviation |a - b| / |b| over samples with lo <= t <= hi.
inline double max_relative_deviation(std::span<const double> t, std::span<const double> a, std::span<const double> b,
                                     double lo, double hi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] >= lo && t[j] <= hi) worst = std::max(worst, std::abs(a[j] - b[j]) / std::abs(b[j]));
    return worst;
}

/// Maximum absolute deviation |a - b| over samples with lo <= t <= hi.
inline double max_abs_deviation(std::span<const double> t, std::span<const double> a, std::span<const double> b,
                                double lo, double hi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] >= lo && t[j] <= hi) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

} // namespace fockdyn::analysis
