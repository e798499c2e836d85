// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cascade.hpp
 * @brief Closed-form predictions of the Fock-space cascade model.
 *
 * Probability flows from the initial state through classes of basis states
 * reached in 1, 2, ... interaction steps, each step branching into M states.
 * With x = ln(1/W0) (x = Gamma t in the Breit-Wigner regime) the class
 * populations are Poisson in x:
 *
 *     W_n = x^n / n! * W0,     sum_n W_n = 1.
 *
 * Everything here is a pure function of its arguments.
 */

#pragma once

#include <fockdyn/bessel.hpp>
#include <fockdyn/fit.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fockdyn {

struct CascadeParams {
    double Gamma = 0.0;    ///< spreading width
    double DeltaE = 0.0;   ///< strength-function width
    double M = 2.0;        ///< branching number
    double Npc_inf = 1.0;  ///< saturation exp(S)
    double ipr_inf = 1.0;  ///< saturation l_ipr
    double n_classes = std::numeric_limits<double>::infinity();
};

/// Crossover time Gamma_p / Delta_E^2 between the Gaussian and exponential laws.
inline double survival_crossover_time(double gamma_p, double delta_E) {
    if (!(delta_E > 0.0)) throw std::invalid_argument("survival_crossover_time: Delta_E must be > 0");
    return gamma_p / (delta_E * delta_E);
}

/// W0(t): exp(-Delta_E^2 t^2) up to t_c, C exp(-Gamma_p t) after, continuous at t_c.
inline double survival_theory(double t, double gamma_p, double delta_E) {
    if (!(t >= 0.0)) throw std::invalid_argument("survival_theory: t must be >= 0");
    const double tc = survival_crossover_time(gamma_p, delta_E);
    if (t <= tc) return std::exp(-delta_E * delta_E * t * t);
    const double log_c = -delta_E * delta_E * tc * tc + gamma_p * tc;
    return std::exp(log_c - gamma_p * t);
}

inline double survival_theory(double t, const CascadeParams& p) { return survival_theory(t, p.Gamma, p.DeltaE); }

/// W_n = x^n/n! W0 with x = ln(1/W0).
inline double class_population(int n, double W0) {
    if (n < 0) throw std::invalid_argument("class_population: n must be >= 0");
    if (!(W0 > 0.0) || W0 > 1.0) throw std::invalid_argument("class_population: need 0 < W0 <= 1");
    const double x = -std::log(W0);
    if (n == 0) return W0;
    if (x == 0.0) return 0.0;
    return std::exp(n * std::log(x) - std::lgamma(n + 1.0) + std::log(W0));
}

/// W_n(t) for the pure exponential cascade, W0 = exp(-Gamma t).
inline double class_population_time(int n, double gamma_t) {
    if (n < 0 || gamma_t < 0.0) throw std::invalid_argument("class_population_time: need n >= 0, Gamma t >= 0");
    if (n == 0) return std::exp(-gamma_t);
    if (gamma_t == 0.0) return 0.0;
    return std::exp(n * std::log(gamma_t) - std::lgamma(n + 1.0) - gamma_t);
}

/// Peak value of W_n, reached at Gamma t = n: n^n e^-n / n!.
inline double class_population_peak(int n) {
    if (n < 1) throw std::invalid_argument("class_population_peak: n must be >= 1");
    return std::exp(n * std::log(static_cast<double>(n)) - n - std::lgamma(n + 1.0));
}

/**
 * @brief Cascade entropy with N_n = M^n states per class:
 *
 *     S = x ln M + x - e^{-x} sum_n (x^n/n!) ln(x^n/n!),   x = Gamma t.
 *
 * The series is summed until, past its peak, a term falls below 1e-15 of
 * the partial sum.
 */
inline double entropy_cascade_x(double x, double M) {
    if (x < 0.0) throw std::invalid_argument("entropy_cascade: x must be >= 0");
    if (!(M >= 1.0)) throw std::invalid_argument("entropy_cascade: M must be >= 1");
    if (x == 0.0) return 0.0;
    const double lx = std::log(x);
    double series = 0.0;
    for (int n = 0; n < 100000; ++n) {
        const double log_q = n * lx - std::lgamma(n + 1.0);
        const double term = std::exp(log_q - x) * log_q;
        series += term;
        if (n > x && std::abs(term) < 1e-15 * std::max(std::abs(series), 1e-300)) break;
    }
    return x * std::log(M) + x - series;
}

inline double entropy_cascade(double t, const CascadeParams& p) {
    if (t < 0.0) throw std::invalid_argument("entropy_cascade: t must be >= 0");
    return entropy_cascade_x(p.Gamma * t, p.M);
}

/// Two-class small-time entropy a(1 + ln(N1/a)), a = Delta_E^2 t^2.
inline double entropy_small_time(double t, double delta_E, double N1) {
    const double a = delta_E * delta_E * t * t;
    if (a == 0.0) return 0.0;
    return a * (1.0 + std::log(N1 / a));
}

/// First-order entropy from individual couplings, w_f = H_0f^2 t^2.
inline double entropy_perturbative(double t, std::span<const double> couplings) {
    double de2 = 0.0;
    double tail = 0.0;
    for (double h : couplings) {
        const double h2 = h * h;
        if (h2 == 0.0) continue;
        de2 += h2;
        tail += h2 * std::log(1.0 / (h2 * t * t));
    }
    if (t == 0.0) return 0.0;
    return de2 * t * t + t * t * tail;
}

/// One-class entropy: initial state plus N_pc(inf) equally shared states.
inline double entropy_one_class(double W0, double Npc_inf) {
    if (W0 < 0.0 || W0 > 1.0) throw std::invalid_argument("entropy_one_class: need 0 <= W0 <= 1");
    if (!(Npc_inf >= 1.0)) throw std::invalid_argument("entropy_one_class: N_pc(inf) must be >= 1");
    double s = 0.0;
    if (W0 > 0.0) s -= W0 * std::log(W0);
    const double rest = 1.0 - W0;
    if (rest > 0.0) s -= rest * std::log(rest / Npc_inf);
    return s;
}

/// (l_ipr)^-1 = W0^2 I0(2 ln(1/W0) / sqrt(M)), infinite class chain.
inline double inverse_ipr_cascade(double W0, double M) {
    if (!(W0 > 0.0) || W0 > 1.0) throw std::invalid_argument("ipr_cascade: need 0 < W0 <= 1");
    if (!(M >= 1.0)) throw std::invalid_argument("ipr_cascade: M must be >= 1");
    const double lw = std::log(W0);
    const double z = -2.0 * lw / std::sqrt(M);
    return std::exp(2.0 * lw + z) * bessel_i0_scaled(z);
}

inline double ipr_cascade(double W0, double M) { return 1.0 / inverse_ipr_cascade(W0, M); }

/// Small-time form W0^2 (1 + (ln 1/W0)^2 / N1).
inline double inverse_ipr_small_time(double W0, double N1) {
    const double x = -std::log(W0);
    return W0 * W0 * (1.0 + x * x / N1);
}

/// Large-time decay rate of (l_ipr)^-1: 2 Gamma (1 - 1/sqrt(M)).
inline double inverse_ipr_decay_rate(double gamma, double M) { return 2.0 * gamma * (1.0 - 1.0 / std::sqrt(M)); }

/// One-class interpolation (l_ipr)^-1 = W0^2 + (1 - W0)^2 / l_ipr(inf).
inline double ipr_one_class(double W0, double ipr_inf) {
    if (W0 < 0.0 || W0 > 1.0) throw std::invalid_argument("ipr_one_class: need 0 <= W0 <= 1");
    if (!(ipr_inf >= 1.0)) throw std::invalid_argument("ipr_one_class: l_ipr(inf) must be >= 1");
    return 1.0 / (W0 * W0 + (1.0 - W0) * (1.0 - W0) / ipr_inf);
}

/// First-order population of a directly coupled state under an exponentially
/// decaying initial amplitude |A0| = exp(-Gamma t / 2).
inline double perturbative_population(double H0f, double omega_0f, double gamma, double t) {
    if (!(gamma > 0.0)) throw std::invalid_argument("perturbative_population: Gamma must be > 0");
    const std::complex<double> z = std::exp(std::complex<double>(-0.5 * gamma * t, omega_0f * t)) - 1.0;
    return H0f * H0f / (omega_0f * omega_0f + 0.25 * gamma * gamma) * std::norm(z);
}

/// Ballistic packet width: Delta(t) = slope * t.
inline double width_ballistic(double t, double slope) { return slope * t; }

/// WBRM ballistic slope sqrt(2/3) V0 b^{3/2}.
inline double wbrm_ballistic_slope(double b, double V0) { return std::sqrt(2.0 / 3.0) * V0 * std::pow(b, 1.5); }

/// TBRI ballistic slope V0 Delta_0 = sqrt(sum_f (n_f - n0)^2 H_0f^2) from one row.
inline double tbri_ballistic_slope(std::span<const double> row, std::size_t n0) {
    double acc = 0.0;
    for (std::size_t f = 0; f < row.size(); ++f) {
        if (f == n0) continue;
        const double d = static_cast<double>(f) - static_cast<double>(n0);
        acc += d * d * row[f] * row[f];
    }
    return std::sqrt(acc);
}

/// End of the ballistic spread, when slope * t reaches sqrt(2) Delta_E.
inline double ballistic_saturation_time(double delta_E, double slope) { return std::sqrt(2.0) * delta_E / slope; }

/// WBRM closed form of the above: sqrt(6)/b.
inline double wbrm_saturation_time(double b) { return std::sqrt(6.0) / b; }

/// Fock-space reflection period T = 2 n_c / Gamma.
inline double oscillation_period(double n_classes, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("oscillation_period: Gamma must be > 0");
    return 2.0 * n_classes / gamma;
}

/// Effective spreading rate: Gamma0 in the BW regime, Delta_E once Gamma0 exceeds it.
inline double effective_rate(double gamma0, double delta_E) { return std::min(gamma0, delta_E); }

struct GammaPFit {
    double gamma_p = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double plateau = 0.0;
    std::size_t points = 0;
};

/**
 * @brief Extract Gamma_p from a numeric W0(t) by fitting C exp(-Gamma_p t) + c
 * on [t_c, 4/Gamma0]. When that window holds fewer than 8 samples (Gamma0 >
 * 2 Delta_E) the window [1/Delta_E, 4/Delta_E] is used instead.
 */
inline GammaPFit fit_gamma_p(std::span<const double> t, std::span<const double> W0, double gamma0, double delta_E) {
    auto window = [&](double lo, double hi) {
        std::vector<double> x, y;
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[j] >= lo && t[j] <= hi) {
                x.push_back(t[j]);
                y.push_back(W0[j]);
            }
        return std::pair{x, y};
    };
    GammaPFit out;
    out.t_lo = survival_crossover_time(gamma0, delta_E);
    out.t_hi = 4.0 / gamma0;
    auto [x, y] = window(out.t_lo, out.t_hi);
    if (x.size() < 8) {
        out.t_lo = 1.0 / delta_E;
        out.t_hi = 4.0 / delta_E;
        std::tie(x, y) = window(out.t_lo, out.t_hi);
    }
    if (x.size() < 4) throw std::domain_error("fit_gamma_p: time grid too coarse for the fit window");
    const auto f = fit::exp_plateau(x, y, gamma0);
    out.gamma_p = f.rate;
    out.plateau = f.plateau;
    out.points = x.size();
    return out;
}

} // namespace fockdyn
