// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Exact diagonalization and spectral propagation of a basis state.
 *
 * With H = sum_k E_k |k><k| and |k> = sum_f C_f^(k) |f>, a packet started in
 * basis state 0 evolves as
 *
 *     A_f(t) = sum_k C_0^(k) C_f^(k) exp(-i E_k t)        (hbar = 1).
 *
 * Time is measured in units hbar/d0.
 */

#pragma once

#include <fockdyn/hamiltonian.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockdyn {

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   ///< ascending
    Eigen::MatrixXd eigenvectors;  ///< column k is C^(k)
    double residual_norm = 0.0;    ///< max_k |H v_k - E_k v_k|_inf

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct PacketSnapshot {
    double t = 0.0;
    Eigen::VectorXcd amplitudes;
    Eigen::VectorXd probabilities;
    double W0 = 0.0;
};

/// Full eigendecomposition of a real symmetric matrix. Each eigenvector is
/// normalized so that its largest-magnitude component is positive.
inline SpectralDecomposition diagonalize(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
    if (H.rows() == 0) throw std::invalid_argument("diagonalize: empty matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: QL iteration did not converge within " +
                                 std::to_string(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations) +
                                 "*N sweeps (N=" + std::to_string(H.rows()) + ")");

    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors(), 0.0};
    for (Eigen::Index k = 0; k < out.eigenvectors.cols(); ++k) {
        Eigen::Index arg = 0;
        out.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (out.eigenvectors(arg, k) < 0.0) out.eigenvectors.col(k) *= -1.0;
    }
    const Eigen::MatrixXd R = H * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
    out.residual_norm = R.cwiseAbs().maxCoeff();
    return out;
}

inline SpectralDecomposition diagonalize(const Hamiltonian& H) { return diagonalize(H.matrix); }

namespace detail {
inline void check_initial(const SpectralDecomposition& spec, std::size_t initial) {
    if (initial >= spec.size()) throw std::out_of_range("initial index " + std::to_string(initial) + " out of range");
}
} // namespace detail

inline PacketSnapshot evolve(const SpectralDecomposition& spec, std::size_t initial, double t) {
    detail::check_initial(spec, initial);
    if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
    const auto i = static_cast<Eigen::Index>(initial);
    const Eigen::VectorXd c0 = spec.eigenvectors.row(i).transpose();
    const Eigen::ArrayXd phase = spec.eigenvalues.array() * t;
    const Eigen::VectorXd re = spec.eigenvectors * (c0.array() * phase.cos()).matrix();
    const Eigen::VectorXd im = -(spec.eigenvectors * (c0.array() * phase.sin()).matrix());

    PacketSnapshot snap;
    snap.t = t;
    if (t == 0.0) {
        // the packet starts exactly on the basis state; skip the rounding of V V^T
        snap.amplitudes = Eigen::VectorXcd::Zero(re.size());
        snap.amplitudes(i) = 1.0;
        snap.probabilities = Eigen::VectorXd::Unit(re.size(), i);
        snap.W0 = 1.0;
        return snap;
    }
    snap.amplitudes.resize(re.size());
    snap.amplitudes.real() = re;
    snap.amplitudes.imag() = im;
    snap.probabilities = re.array().square() + im.array().square();
    snap.W0 = snap.probabilities(i);
    return snap;
}

/// Probabilities w_f(t) for many times at once; column j belongs to times[j].
/// Uses two real matrix products per block of times.
inline Eigen::MatrixXd evolve_probabilities(const SpectralDecomposition& spec, std::size_t initial,
                                            std::span<const double> times) {
    detail::check_initial(spec, initial);
    const auto N = static_cast<Eigen::Index>(spec.size());
    const auto T = static_cast<Eigen::Index>(times.size());
    const Eigen::ArrayXd c0 = spec.eigenvectors.row(static_cast<Eigen::Index>(initial)).transpose();
    Eigen::MatrixXd out(N, T);

    constexpr Eigen::Index block = 128;
    for (Eigen::Index j0 = 0; j0 < T; j0 += block) {
        const Eigen::Index nb = std::min(block, T - j0);
        Eigen::MatrixXd C(N, nb), S(N, nb);
        for (Eigen::Index j = 0; j < nb; ++j) {
            const double t = times[static_cast<std::size_t>(j0 + j)];
            if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
            const Eigen::ArrayXd phase = spec.eigenvalues.array() * t;
            C.col(j) = (c0 * phase.cos()).matrix();
            S.col(j) = (c0 * phase.sin()).matrix();
        }
        const Eigen::MatrixXd re = spec.eigenvectors * C;
        const Eigen::MatrixXd im = spec.eigenvectors * S;
        out.middleCols(j0, nb) = re.array().square() + im.array().square();
        for (Eigen::Index j = 0; j < nb; ++j)
            if (times[static_cast<std::size_t>(j0 + j)] == 0.0)
                out.col(j0 + j) = Eigen::VectorXd::Unit(N, static_cast<Eigen::Index>(initial));
    }
    return out;
}

/// A_0(t) = sum_k |C_0^(k)|^2 exp(-i E_k t).
inline std::complex<double> survival_amplitude(const SpectralDecomposition& spec, std::size_t initial, double t) {
    detail::check_initial(spec, initial);
    const auto i = static_cast<Eigen::Index>(initial);
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        const double w = spec.eigenvectors(i, k) * spec.eigenvectors(i, k);
        re += w * std::cos(spec.eigenvalues(k) * t);
        im -= w * std::sin(spec.eigenvalues(k) * t);
    }
    return {re, im};
}

/// Infinite-time average w_f^s = sum_k |C_0^(k)|^2 |C_f^(k)|^2.
inline Eigen::VectorXd stationary_distribution(const SpectralDecomposition& spec, std::size_t initial) {
    detail::check_initial(spec, initial);
    const Eigen::VectorXd w0 = spec.eigenvectors.row(static_cast<Eigen::Index>(initial)).transpose().array().square();
    return spec.eigenvectors.array().square().matrix() * w0;
}

} // namespace fockdyn
