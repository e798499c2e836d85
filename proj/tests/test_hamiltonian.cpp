// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <fockdyn/basis.hpp>
#include <fockdyn/hamiltonian.hpp>
#include <fockdyn/rng.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace fockdyn;

namespace {
std::shared_ptr<const ManyBodyBasis> lattice_basis(int n, int m) {
    std::vector<double> eps(static_cast<std::size_t>(m));
    std::iota(eps.begin(), eps.end(), 0.0);
    return std::make_shared<const ManyBodyBasis>(enumerate_basis(n, m, eps));
}

bool bitwise_symmetric(const Eigen::MatrixXd& H) {
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (H(i, j) != H(j, i)) return false;
    return true;
}
} // namespace

TEST(SingleParticleEnergies, JitteredLattice) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto rng = make_engine(seed);
        const auto eps = sample_single_particle_energies(12, 1.0, rng);
        ASSERT_EQ(eps.size(), 12U);
        for (std::size_t s = 1; s < eps.size(); ++s) ASSERT_GT(eps[s], eps[s - 1]);
        const double spacing = (eps.back() - eps.front()) / 11.0;
        EXPECT_GE(spacing, 0.8);
        EXPECT_LE(spacing, 1.2);
    }
    auto rng = make_engine(1);
    const auto one = sample_single_particle_energies(1, 1.0, rng);
    ASSERT_EQ(one.size(), 1U);
    EXPECT_GE(one[0], -0.5);
    EXPECT_LE(one[0], 0.5);
    EXPECT_THROW(sample_single_particle_energies(3, 0.0, rng), std::invalid_argument);
}

TEST(Tbri, MatchesSecondQuantizedOperatorAlgebra) {
    // The Jordan-Wigner Fock-space operator, projected on the n-particle
    // basis, must reproduce the assembled matrix element by element.
    for (const auto& [n, m] : {std::pair{2, 4}, std::pair{3, 6}, std::pair{2, 5}, std::pair{4, 7}}) {
        auto rng = make_engine(static_cast<std::uint64_t>(11 * n + m));
        const auto eps = sample_single_particle_energies(m, 1.0, rng);
        const auto basis = enumerate_basis(n, m, eps);
        const auto amp = sample_two_body_amplitudes(m, 0.3, rng);
        const Eigen::MatrixXd H = assemble_tbri(basis, amp);
        const Eigen::MatrixXd F = oracle::fock_hamiltonian(eps, amp.v);
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const auto fa = static_cast<Eigen::Index>(basis.state(a).mask);
                const auto fb = static_cast<Eigen::Index>(basis.state(b).mask);
                ASSERT_NEAR(H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), F(fa, fb), 1e-13)
                    << "n=" << n << " m=" << m << " a=" << a << " b=" << b;
            }
    }
}

TEST(Tbri, TwoParticleElementsAreSignedAmplitudes) {
    auto rng = make_engine(5);
    const auto basis = lattice_basis(2, 4);
    const auto amp = sample_two_body_amplitudes(4, 1.0, rng);
    const Eigen::MatrixXd H = assemble_tbri(*basis, amp);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            if (a == b) continue;
            const auto sa = basis->state(a).mask;
            const auto sb = basis->state(b).mask;
            const int p = std::countr_zero(sb), q = 63 - std::countl_zero(sb);
            const int r = std::countr_zero(sa), s = 63 - std::countl_zero(sa);
            EXPECT_EQ(std::abs(H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))), std::abs(amp(p, q, r, s)));
        }
}

TEST(Tbri, CentreRowCouplesExactlyTheFirstClass) {
    TbriParams p;
    p.seed = 99;
    const auto H = make_tbri(p);
    ASSERT_EQ(H.size(), 924U);
    EXPECT_TRUE(bitwise_symmetric(H.matrix));
    const auto n0 = H.basis->center_index();
    const auto cd = classify(*H.basis, n0);
    int nonzero = 0;
    for (std::size_t f = 0; f < H.size(); ++f) {
        if (f == n0) continue;
        const bool nz = H.matrix(static_cast<Eigen::Index>(n0), static_cast<Eigen::Index>(f)) != 0.0;
        nonzero += nz;
        EXPECT_EQ(nz, cd.class_of[f] == 1) << f;
    }
    EXPECT_EQ(nonzero, 261);
}

TEST(Tbri, SparsityPatternMatchesStructuralNeighbours) {
    for (const auto& [n, m] : {std::pair{2, 6}, std::pair{3, 7}, std::pair{4, 8}}) {
        TbriParams p{n, m, 0.5, 1.0, 17};
        const auto H = make_tbri(p);
        for (std::size_t a = 0; a < H.size(); ++a)
            for (std::size_t b = 0; b < H.size(); ++b) {
                if (a == b) continue;
                const bool nz = H.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) != 0.0;
                EXPECT_EQ(nz, H.basis->state(a).moved_particles(H.basis->state(b)) <= 2);
            }
    }
}

TEST(Tbri, NoInteractionGivesUnperturbedDiagonal) {
    TbriParams p{6, 12, 0.0, 1.0, 3};
    const auto H = make_tbri(p);
    const Eigen::MatrixXd off = H.matrix - Eigen::MatrixXd(H.matrix.diagonal().asDiagonal());
    EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
    for (std::size_t i = 0; i < H.size(); ++i) EXPECT_EQ(H.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)), H.basis->energy(i));
}

TEST(Tbri, SameSeedSameMatrix) {
    TbriParams p{5, 10, 0.01, 1.0, 1234};
    const auto a = make_tbri(p);
    const auto b = make_tbri(p);
    EXPECT_TRUE((a.matrix.array() == b.matrix.array()).all());
    p.seed = 1235;
    const auto c = make_tbri(p);
    EXPECT_FALSE((a.matrix.array() == c.matrix.array()).all());
}

TEST(Tbri, RejectsMismatchedBasis) {
    TbriParams p{3, 6, 0.1, 1.0, 1};
    EXPECT_THROW(build_tbri(p, lattice_basis(2, 6)), std::invalid_argument);
    p.V0sq = -1.0;
    EXPECT_THROW(make_tbri(p), std::invalid_argument);
}

TEST(Tbri, TwoParticleMoveVarianceIsV0sq) {
    // pure two-particle moves carry a single amplitude: second moment V0^2
    const double V0sq = 0.7;
    double sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; count < 10000; ++seed) {
        TbriParams p{3, 7, V0sq, 1.0, seed};
        const auto H = make_tbri(p);
        const std::size_t a = H.basis->center_index();
        for (std::size_t b = 0; b < H.size(); ++b)
            if (H.basis->state(a).moved_particles(H.basis->state(b)) == 2) {
                const double h = H.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                sum2 += h * h;
                ++count;
            }
    }
    const double m2 = sum2 / static_cast<double>(count);
    const double se = V0sq * std::sqrt(2.0 / static_cast<double>(count));
    EXPECT_NEAR(m2, V0sq, 5.0 * se);
}

TEST(Tbri, MeanSquaredRowNormMatchesClosedForm) {
    const int n = 4, m = 8;
    const double V0sq = 0.2;
    std::vector<double> d2;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        TbriParams p{n, m, V0sq, 1.0, seed};
        const auto H = make_tbri(p);
        const double d = delta_E_numeric(H, H.basis->center_index());
        d2.push_back(d * d);
    }
    const double mean = std::accumulate(d2.begin(), d2.end(), 0.0) / 400.0;
    double var = 0.0;
    for (double x : d2) var += (x - mean) * (x - mean);
    var /= 399.0;
    const double expected = std::pow(delta_E_analytic(n, m, V0sq), 2);
    EXPECT_NEAR(mean, expected, 5.0 * std::sqrt(var / 400.0));
}

TEST(Widths, AnalyticValues) {
    EXPECT_NEAR(delta_E_analytic(6, 12, 0.083), 5.80, 0.01);
    EXPECT_NEAR(delta_E_analytic(6, 12, 0.003), 1.10, 0.01);
    EXPECT_EQ(delta_E_analytic(1, 9, 0.5), 0.0);
    EXPECT_NEAR(wbrm_delta_E_analytic(110, 1.0), 14.83, 0.01);
    EXPECT_NEAR(wbrm_gamma_bw(1.0, 1.0), 2.0 * std::numbers::pi, 1e-14);
    EXPECT_NEAR(wbrm_gamma_bw(1.0, 3.0), 56.5, 0.1);
}

TEST(Widths, NumericOnDiagonalIsZero) {
    const Eigen::MatrixXd H = Eigen::VectorXd::LinSpaced(10, 0, 9).asDiagonal();
    EXPECT_EQ(delta_E_numeric(H, 4), 0.0);
    EXPECT_THROW(delta_E_numeric(H, 10), std::out_of_range);
}

TEST(Widths, SingleParticleTbriIsDiagonal) {
    // no two-body transition exists for one particle
    TbriParams p{1, 9, 0.5, 1.0, 4};
    const auto H = make_tbri(p);
    EXPECT_EQ(delta_E_numeric(H, 4), 0.0);
}

TEST(Gamma0, WbrmGoldenRule) {
    WbrmParams w{200, 20, 1.0, 1.0, 1};
    EXPECT_NEAR(gamma0(build_wbrm(w), 100), 2.0 * std::numbers::pi, 1e-12);
    w.V0 = 3.0;
    EXPECT_NEAR(gamma0(build_wbrm(w), 100), 56.55, 0.01);
}

TEST(Gamma0, TbriWeakCouplingNearHalf) {
    double sum = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        TbriParams p{6, 12, 0.003, 1.0, derive_seed(77, static_cast<std::uint64_t>(r))};
        const auto H = make_tbri(p);
        sum += gamma0(H, H.basis->center_index());
    }
    const double mean = sum / reps;
    EXPECT_NEAR(mean, 0.50, 0.10);
}

TEST(Gamma0, TooFewCoupledStates) {
    TbriParams p{2, 4, 0.1, 1.0, 1};
    const auto H = make_tbri(p);
    EXPECT_THROW(gamma0(H, 2), std::domain_error);
}

TEST(Wbrm, BandStructureAndSymmetry) {
    WbrmParams w{924, 110, 1.0, 1.0, 5};
    const auto H = build_wbrm(w);
    EXPECT_TRUE(bitwise_symmetric(H.matrix));
    for (Eigen::Index i = 0; i < 924; ++i) {
        for (Eigen::Index j = 0; j < 924; ++j) {
            if (std::abs(i - j) > 110) {
                ASSERT_EQ(H.matrix(i, j), 0.0);
            }
        }
        if (i > 0) {
            ASSERT_GE(H.matrix(i, i), H.matrix(i - 1, i - 1));
        }
    }
    const double spacing = (H.matrix(923, 923) - H.matrix(0, 0)) / 923.0;
    EXPECT_NEAR(spacing, 1.0, 0.01);
}

TEST(Wbrm, NoCouplingIsDiagonal) {
    WbrmParams w{50, 5, 1.0, 0.0, 5};
    const auto H = build_wbrm(w);
    EXPECT_EQ((H.matrix - Eigen::MatrixXd(H.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Wbrm, OffDiagonalVarianceMonteCarlo) {
    double sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto H = build_wbrm(WbrmParams{5, 4, 1.0, 1.0, seed});
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = i + 1; j < 5; ++j) {
                sum2 += H.matrix(i, j) * H.matrix(i, j);
                ++count;
            }
    }
    const double m2 = sum2 / static_cast<double>(count);
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / static_cast<double>(count)));
}

TEST(Wbrm, RejectsBadBand) {
    EXPECT_THROW(build_wbrm(WbrmParams{10, 10, 1.0, 1.0, 1}), std::invalid_argument);
    EXPECT_THROW(build_wbrm(WbrmParams{10, 0, 1.0, 1.0, 1}), std::invalid_argument);
    EXPECT_THROW(build_wbrm(WbrmParams{10, 3, 0.0, 1.0, 1}), std::invalid_argument);
}

TEST(Triplets, RoundTripAtSeventeenDigits) {
    TbriParams p{2, 5, 0.3, 1.0, 8};
    const auto H = make_tbri(p);
    std::stringstream ss;
    write_triplets(ss, H.matrix);
    Eigen::MatrixXd back = Eigen::MatrixXd::Zero(H.matrix.rows(), H.matrix.cols());
    long r = 0, c = 0, prev = -1;
    double v = 0.0;
    while (ss >> r >> c >> v) {
        const long pos = r * H.matrix.cols() + c;
        EXPECT_GT(pos, prev);  // row-major order
        prev = pos;
        back(r, c) = v;
    }
    EXPECT_TRUE((back.array() == H.matrix.array()).all());
}
