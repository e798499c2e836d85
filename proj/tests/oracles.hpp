// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used only by the tests. None of
// them calls into the library routine it checks.

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <queue>
#include <vector>

namespace oracle {

// ------------------------------------------------ second-quantized operators

/// Annihilation operator a_j on the full 2^m Fock space (Jordan-Wigner):
/// a_j |mask> = (-1)^{#occupied below j} |mask - j> if j is occupied.
inline Eigen::MatrixXd annihilator(int j, int m) {
    const int dim = 1 << m;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        if (!((s >> j) & 1)) continue;
        int below = 0;
        for (int k = 0; k < j; ++k) below += (s >> k) & 1;
        a(s & ~(1 << j), s) = (below % 2) ? -1.0 : 1.0;
    }
    return a;
}

/// H = sum_s eps_s n_s + sum_{pairs A != B} v(A, B) a+_r a+_s a_q a_p,
/// A = {p<q}, B = {r<s}, on the full Fock space; `v` is indexed by pair
/// number in lexicographic order.
inline Eigen::MatrixXd fock_hamiltonian(const std::vector<double>& eps, const Eigen::MatrixXd& v) {
    const int m = static_cast<int>(eps.size());
    std::vector<Eigen::MatrixXd> a;
    for (int j = 0; j < m; ++j) a.push_back(annihilator(j, m));
    const int dim = 1 << m;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < m; ++s) H += eps[static_cast<std::size_t>(s)] * a[s].transpose() * a[s];
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < m; ++p)
        for (int q = p + 1; q < m; ++q) pairs.emplace_back(p, q);
    for (std::size_t A = 0; A < pairs.size(); ++A)
        for (std::size_t B = 0; B < pairs.size(); ++B) {
            if (A == B) continue;
            const double g = v(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(B));
            if (g == 0.0) continue;
            const auto [p, q] = pairs[A];
            const auto [r, s] = pairs[B];
            H += g * a[r].transpose() * a[s].transpose() * a[q] * a[p];
        }
    return H;
}

// ----------------------------------------------------------- graph search

/// Class of every mask in `states` by BFS on "differ in at most two
/// occupied orbitals", checking every pair of states explicitly.
inline std::vector<int> brute_force_classes(const std::vector<std::uint64_t>& states, std::size_t initial) {
    const std::size_t N = states.size();
    std::vector<int> cls(N, -1);
    cls[initial] = 0;
    std::queue<std::size_t> todo;
    todo.push(initial);
    while (!todo.empty()) {
        const auto a = todo.front();
        todo.pop();
        for (std::size_t b = 0; b < N; ++b) {
            if (cls[b] >= 0) continue;
            const int moved = std::popcount(states[a] ^ states[b]) / 2;
            if (moved <= 2) {
                cls[b] = cls[a] + 1;
                todo.push(b);
            }
        }
    }
    return cls;
}

/// All masks with n of m bits set, by plain counting.
inline std::vector<std::uint64_t> all_masks(int n, int m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
        if (std::popcount(s) == n) out.push_back(s);
    return out;
}

// ------------------------------------------------------------ integrator

/// Classical 4th-order Runge-Kutta for i dA/dt = H A with fixed step dt.
inline Eigen::VectorXcd rk4_evolve(const Eigen::MatrixXd& H, Eigen::VectorXcd A, double t, double dt = 1e-4) {
    const std::complex<double> mi(0.0, -1.0);
    const Eigen::MatrixXcd K = mi * H.cast<std::complex<double>>();
    const auto steps = static_cast<long>(std::llround(t / dt));
    const double h = steps > 0 ? t / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
        const Eigen::VectorXcd k1 = K * A;
        const Eigen::VectorXcd k2 = K * (A + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = K * (A + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = K * (A + h * k3);
        A += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return A;
}

// --------------------------------------------------------------- series

/// (l_ipr)^-1 = W0^2 sum_k (ln 1/W0)^{2k} / (k! k! M^k), summed term by term
/// in extended precision.
inline double inverse_ipr_series(double W0, double M) {
    const long double x = -std::log(static_cast<long double>(W0));
    const long double q = x * x / static_cast<long double>(M);
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(k));
        sum += term;
        if (k > 2 && term < 1e-22L * sum) break;
    }
    // W0^2 * sum, formed as exp(2 ln W0 + ln sum) to stay in range
    return static_cast<double>(std::exp(-2.0L * x + std::log(sum)));
}

/// x ln M plus the Shannon entropy of Poisson(x), with p_n built by the
/// recurrence p_n = p_{n-1} x / n.
inline double poisson_cascade_entropy(double x, double M) {
    if (x == 0.0) return 0.0;
    long double p = std::exp(-static_cast<long double>(x));
    long double h = 0.0L;
    const int n_max = static_cast<int>(x + 40.0 * std::sqrt(x) + 60.0);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) p *= static_cast<long double>(x) / n;
        if (p > 0.0L) h -= p * std::log(p);
    }
    return static_cast<double>(static_cast<long double>(x) * std::log(static_cast<long double>(M)) + h);
}

/// n^n e^{-n} / n! as a running product of (n/k) e^{-1}.
inline double poisson_peak(int n) {
    long double v = 1.0L;
    for (int k = 1; k <= n; ++k) v *= static_cast<long double>(n) / k * std::exp(-1.0L);
    return static_cast<double>(v);
}

} // namespace oracle
