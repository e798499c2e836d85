// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Two-body random interaction (TBRI) and Wigner band random matrix
 * (WBRM) ensembles, plus the characteristic widths Gamma_0 and Delta_E.
 *
 * TBRI bookkeeping: the residual interaction is
 *
 *     V = sum_{alpha != beta} v[alpha][beta] a+_r a+_s a_q a_p,
 *
 * where alpha = {p<q} and beta = {r<s} run over unordered orbital pairs and
 * v is a real symmetric matrix of iid Gaussians (zero diagonal). Every matrix
 * element between Slater determinants is assembled from these amplitudes
 * with its fermionic sign, so one-particle moves collect a sum over
 * spectator orbitals and the two-body correlations of the model survive.
 * The diagonal is pure H0.
 */

#pragma once

#include <fockdyn/basis.hpp>
#include <fockdyn/rng.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fockdyn {

struct TbriParams {
    int n = 6;
    int m = 12;
    double V0sq = 0.003;
    double d0 = 1.0;
    std::uint64_t seed = 0;
};

struct WbrmParams {
    std::size_t N = 924;
    std::size_t b = 110;
    double D = 1.0;
    double V0 = 1.0;
    std::uint64_t seed = 0;
};

inline void validate(const TbriParams& p) {
    if (p.n <= 0 || p.n > p.m) throw std::invalid_argument("TBRI: need 0 < n <= m");
    if (!(p.V0sq >= 0.0)) throw std::invalid_argument("TBRI: V0sq must be >= 0");
    if (!(p.d0 > 0.0)) throw std::invalid_argument("TBRI: d0 must be > 0");
}

inline void validate(const WbrmParams& p) {
    if (p.b < 1 || p.b >= p.N) throw std::invalid_argument("WBRM: need 1 <= b < N");
    if (!(p.D > 0.0)) throw std::invalid_argument("WBRM: D must be > 0");
    if (!(p.V0 >= 0.0)) throw std::invalid_argument("WBRM: V0 must be >= 0");
}

struct Hamiltonian {
    Eigen::MatrixXd matrix;
    std::variant<TbriParams, WbrmParams> provenance;
    std::shared_ptr<const ManyBodyBasis> basis;  ///< TBRI only

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
    [[nodiscard]] bool is_tbri() const noexcept { return std::holds_alternative<TbriParams>(provenance); }

    /// Unperturbed energies (the diagonal of H0).
    [[nodiscard]] std::vector<double> unperturbed_energies() const {
        std::vector<double> e(size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = matrix(i, i);
        return e;
    }
};

/// Jittered lattice: eps_s = s*d0 + U(-d0/2, d0/2), sorted.
template <class Rng>
std::vector<double> sample_single_particle_energies(int m, double d0, Rng& rng) {
    if (m < 1) throw std::invalid_argument("sample_single_particle_energies: m must be >= 1");
    if (!(d0 > 0.0)) throw std::invalid_argument("sample_single_particle_energies: d0 must be > 0");
    std::uniform_real_distribution<double> jitter(-0.5 * d0, 0.5 * d0);
    std::vector<double> eps(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) eps[static_cast<std::size_t>(s)] = s * d0 + jitter(rng);
    std::sort(eps.begin(), eps.end());
    return eps;
}

/// Index of the unordered pair {p<q} among the m(m-1)/2 orbital pairs.
constexpr std::size_t pair_index(int p, int q, int m) noexcept {
    const auto pp = static_cast<std::size_t>(p);
    const auto mm = static_cast<std::size_t>(m);
    return pp * (2 * mm - pp - 1) / 2 + static_cast<std::size_t>(q - p - 1);
}

/// Symmetric pair-to-pair amplitude table, zero on the diagonal.
struct TwoBodyAmplitudes {
    int m = 0;
    Eigen::MatrixXd v;

    [[nodiscard]] double operator()(int p, int q, int r, int s) const {
        return v(static_cast<Eigen::Index>(pair_index(p, q, m)), static_cast<Eigen::Index>(pair_index(r, s, m)));
    }
};

template <class Rng>
TwoBodyAmplitudes sample_two_body_amplitudes(int m, double V0sq, Rng& rng) {
    const auto pairs = static_cast<Eigen::Index>(m * (m - 1) / 2);
    TwoBodyAmplitudes out{m, Eigen::MatrixXd::Zero(pairs, pairs)};
    std::normal_distribution<double> gauss(0.0, std::sqrt(V0sq));
    for (Eigen::Index a = 0; a < pairs; ++a)
        for (Eigen::Index b = a + 1; b < pairs; ++b) {
            const double g = V0sq > 0.0 ? gauss(rng) : 0.0;
            out.v(a, b) = g;
            out.v(b, a) = g;
        }
    return out;
}

namespace detail {

/// (-1)^(number of occupied orbitals below `orbital`).
constexpr int fermion_sign(std::uint64_t mask, int orbital) noexcept {
    const std::uint64_t below = (orbital == 0) ? 0 : (mask & ((std::uint64_t{1} << orbital) - 1));
    return (std::popcount(below) & 1) ? -1 : 1;
}

} // namespace detail

/// Matrix of H0 + V in the given basis for a fixed amplitude table.
inline Eigen::MatrixXd assemble_tbri(const ManyBodyBasis& basis, const TwoBodyAmplitudes& amp) {
    if (amp.m != basis.orbitals()) throw std::invalid_argument("assemble_tbri: amplitude table does not match m");
    const int m = basis.orbitals();
    const auto N = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    const auto states = basis.states();

    std::vector<int> occ;
    std::vector<int> empty;
    for (Eigen::Index col = 0; col < N; ++col) {
        const std::uint64_t f = states[static_cast<std::size_t>(col)].mask;
        H(col, col) = basis.energy(static_cast<std::size_t>(col));

        occ.clear();
        for (std::uint64_t bits = f; bits; bits &= bits - 1) occ.push_back(std::countr_zero(bits));

        for (std::size_t i = 0; i < occ.size(); ++i) {
            for (std::size_t j = i + 1; j < occ.size(); ++j) {
                const int p = occ[i];
                const int q = occ[j];
                // a_q a_p |f>
                int sign = detail::fermion_sign(f, p);
                std::uint64_t g = f & ~(std::uint64_t{1} << p);
                sign *= detail::fermion_sign(g, q);
                g &= ~(std::uint64_t{1} << q);

                empty.clear();
                for (int o = 0; o < m; ++o)
                    if (!((g >> o) & 1U)) empty.push_back(o);

                for (std::size_t k = 0; k < empty.size(); ++k) {
                    for (std::size_t l = k + 1; l < empty.size(); ++l) {
                        const int r = empty[k];
                        const int s = empty[l];
                        if (r == p && s == q) continue;
                        // a+_r a+_s on the reduced state
                        int sg = sign * detail::fermion_sign(g, s);
                        std::uint64_t h = g | (std::uint64_t{1} << s);
                        sg *= detail::fermion_sign(h, r);
                        h |= std::uint64_t{1} << r;
                        const auto row = static_cast<Eigen::Index>(basis.index_of({h}));
                        if (row > col) H(row, col) += sg * amp(p, q, r, s);
                    }
                }
            }
        }
    }
    // Mirror the lower triangle so the matrix is bitwise symmetric.
    for (Eigen::Index c = 0; c < N; ++c)
        for (Eigen::Index r = c + 1; r < N; ++r) H(c, r) = H(r, c);
    return H;
}

/// Two-body amplitudes come from stream 1 of params.seed; the basis (and
/// its single-particle energies) is supplied by the caller.
inline Hamiltonian build_tbri(const TbriParams& params, std::shared_ptr<const ManyBodyBasis> basis) {
    validate(params);
    if (!basis || basis->particles() != params.n || basis->orbitals() != params.m)
        throw std::invalid_argument("build_tbri: basis does not match (n, m)");
    auto rng = make_engine(params.seed, 1);
    const auto amp = sample_two_body_amplitudes(params.m, params.V0sq, rng);
    return Hamiltonian{assemble_tbri(*basis, amp), params, std::move(basis)};
}

/// Full TBRI realization: single-particle energies from stream 0 of the seed,
/// two-body amplitudes from stream 1.
inline Hamiltonian make_tbri(const TbriParams& params) {
    validate(params);
    auto rng = make_engine(params.seed, 0);
    const auto eps = sample_single_particle_energies(params.m, params.d0, rng);
    auto basis = std::make_shared<const ManyBodyBasis>(enumerate_basis(params.n, params.m, eps));
    return build_tbri(params, std::move(basis));
}

/// Ordered random diagonal with mean spacing D plus a Gaussian band |i-j| <= b.
inline Hamiltonian build_wbrm(const WbrmParams& params) {
    validate(params);
    auto rng = make_engine(params.seed, 0);
    const auto N = static_cast<Eigen::Index>(params.N);
    const auto b = static_cast<Eigen::Index>(params.b);

    std::uniform_real_distribution<double> jitter(-0.5 * params.D, 0.5 * params.D);
    std::vector<double> diag(params.N);
    for (std::size_t j = 0; j < params.N; ++j) diag[j] = static_cast<double>(j) * params.D + jitter(rng);
    std::sort(diag.begin(), diag.end());

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    std::normal_distribution<double> gauss(0.0, params.V0);
    for (Eigen::Index i = 0; i < N; ++i) {
        H(i, i) = diag[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j <= std::min(N - 1, i + b); ++j) {
            const double g = params.V0 > 0.0 ? gauss(rng) : 0.0;
            H(i, j) = g;
            H(j, i) = g;
        }
    }
    return Hamiltonian{std::move(H), params, nullptr};
}

/// Delta_E^2 = V0^2 n(n-1)(m-n)(m-n+3)/4; zero for n < 2.
inline double delta_E_analytic(int n, int m, double V0sq) {
    if (n < 2) return 0.0;
    const double nn = n;
    const double h = m - n;
    return std::sqrt(0.25 * V0sq * nn * (nn - 1.0) * h * (h + 3.0));
}

/// WBRM: Delta_E^2 = 2 b V0^2 (interior row, full band).
inline double wbrm_delta_E_analytic(std::size_t b, double V0) { return std::sqrt(2.0 * static_cast<double>(b)) * V0; }

/// WBRM golden-rule width 2 pi V0^2 / D.
inline double wbrm_gamma_bw(double D, double V0) { return 2.0 * std::numbers::pi * V0 * V0 / D; }

/// sqrt(sum_{f != initial} H_{0f}^2).
inline double delta_E_numeric(const Eigen::MatrixXd& H, std::size_t initial) {
    const auto i = static_cast<Eigen::Index>(initial);
    if (i >= H.rows()) throw std::out_of_range("delta_E_numeric: index out of range");
    return std::sqrt(H.row(i).squaredNorm() - H(i, i) * H(i, i));
}

inline double delta_E_numeric(const Hamiltonian& H, std::size_t initial) {
    return delta_E_numeric(H.matrix, initial);
}

/// Fermi golden rule spreading width of the initial state.
///
/// TBRI: 2 pi mean(H_0f^2) rho_f(E_0) with rho_f a Gaussian fit (mean,
/// variance) to the unperturbed energies of the directly coupled states.
/// WBRM: 2 pi V0^2 / D.
inline double gamma0(const Hamiltonian& H, std::size_t initial) {
    if (initial >= H.size()) throw std::out_of_range("gamma0: index out of range");
    if (const auto* w = std::get_if<WbrmParams>(&H.provenance))
        return wbrm_gamma_bw(w->D, w->V0);

    const auto i = static_cast<Eigen::Index>(initial);
    const double E0 = H.matrix(i, i);
    double sum_h2 = 0.0;
    std::vector<double> coupled;
    for (Eigen::Index f = 0; f < H.matrix.cols(); ++f) {
        if (f == i || H.matrix(i, f) == 0.0) continue;
        sum_h2 += H.matrix(i, f) * H.matrix(i, f);
        coupled.push_back(H.matrix(f, f));
    }
    if (coupled.size() < 10)
        throw std::domain_error("gamma0: only " + std::to_string(coupled.size()) +
                                " coupled states, cannot estimate their density");
    const double M = static_cast<double>(coupled.size());
    double mean = 0.0;
    for (double e : coupled) mean += e;
    mean /= M;
    double var = 0.0;
    for (double e : coupled) var += (e - mean) * (e - mean);
    var /= M;
    const double rho = M / std::sqrt(2.0 * std::numbers::pi * var) * std::exp(-(E0 - mean) * (E0 - mean) / (2.0 * var));
    return 2.0 * std::numbers::pi * (sum_h2 / M) * rho;
}

/// Plain-text triplets "row col value", row-major, 17 significant digits.
/// Zero entries are skipped.
inline void write_triplets(std::ostream& os, const Eigen::MatrixXd& H) {
    char buf[96];
    for (Eigen::Index r = 0; r < H.rows(); ++r)
        for (Eigen::Index c = 0; c < H.cols(); ++c) {
            if (H(r, c) == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(r), static_cast<long>(c), H(r, c));
            os << buf;
        }
}

} // namespace fockdyn
