// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockdyn {

struct ObservableRecord {
    double t = 0.0;
    double W0 = 0.0;
    double S = 0.0;      ///< Shannon entropy, nats
    double Npc = 1.0;    ///< exp(S)
    double l_ipr = 1.0;  ///< 1 / sum w^2
    double width = 0.0;  ///< basis-index spread about n0
};

namespace detail {
inline void check_distribution(std::span<const double> w, const char* who) {
    double total = 0.0;
    for (double x : w) {
        if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": invalid distribution entry");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) + ": distribution sums to " + std::to_string(total));
}
} // namespace detail

/// -sum w ln w with 0 ln 0 = 0. Rounding of the input (entries like
/// 1 + 1e-15) is kept from pushing the result outside [0, ln K].
inline double entropy(std::span<const double> w) {
    detail::check_distribution(w, "entropy");
    double s = 0.0;
    for (double x : w)
        if (x > 0.0) s -= x * std::log(x);
    return std::clamp(s, 0.0, std::log(static_cast<double>(w.size())));
}

inline double ipr(std::span<const double> w) {
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; }))
        throw std::invalid_argument("ipr: all-zero vector");
    detail::check_distribution(w, "ipr");
    double s2 = 0.0;
    for (double x : w) s2 += x * x;
    return std::clamp(1.0 / s2, 1.0, static_cast<double>(w.size()));
}

/// sqrt(sum_f (n_f - n0)^2 w_f), with n_f taken from `index`.
inline double packet_width(std::span<const double> w, std::span<const double> index, double n0) {
    if (w.size() != index.size()) throw std::invalid_argument("packet_width: size mismatch");
    detail::check_distribution(w, "packet_width");
    double v = 0.0;
    for (std::size_t f = 0; f < w.size(); ++f) v += (index[f] - n0) * (index[f] - n0) * w[f];
    return std::sqrt(v);
}

/// Width with n_f = f (position in the energy-ordered basis).
inline double packet_width(std::span<const double> w, std::size_t n0) {
    detail::check_distribution(w, "packet_width");
    double v = 0.0;
    for (std::size_t f = 0; f < w.size(); ++f) {
        const double d = static_cast<double>(f) - static_cast<double>(n0);
        v += d * d * w[f];
    }
    return std::sqrt(v);
}

inline ObservableRecord observe(double t, std::span<const double> w, std::size_t initial) {
    if (initial >= w.size()) throw std::out_of_range("observe: initial index out of range");
    ObservableRecord r;
    r.t = t;
    r.W0 = w[initial];
    r.S = entropy(w);
    r.Npc = std::exp(r.S);
    r.l_ipr = ipr(w);
    r.width = packet_width(w, initial);
    return r;
}

} // namespace fockdyn
