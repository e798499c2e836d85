// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file basis.hpp
 * @brief Many-fermion occupation basis, ordered by unperturbed energy, and its
 * decomposition into interaction classes around an initial state.
 *
 * A basis state is a Slater determinant encoded as a 64-bit occupation mask
 * (bit s <-> orbital s). Two states are directly coupled by a two-body
 * interaction when they differ in at most two occupied orbitals, i.e. when
 * popcount(a ^ b) <= 4.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fockdyn {

/// Raised when a request exceeds the fixed 64-orbital mask or a sane dense size.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

inline constexpr int kMaxOrbitals = 64;
inline constexpr std::size_t kMaxBasisSize = std::size_t{1} << 22;

/// One Slater determinant: occupied orbitals as set bits.
struct OccupationState {
    std::uint64_t mask = 0;

    [[nodiscard]] constexpr int particles() const noexcept { return std::popcount(mask); }
    [[nodiscard]] constexpr bool occupied(int orbital) const noexcept { return (mask >> orbital) & 1U; }

    /// Number of occupied orbitals in which the two states differ.
    [[nodiscard]] constexpr int moved_particles(OccupationState other) const noexcept {
        return std::popcount(mask ^ other.mask) / 2;
    }

    constexpr auto operator<=>(const OccupationState&) const = default;
};

/// Exact binomial coefficient; throws CapacityError on overflow.
inline std::uint64_t binomial(int m, int n) {
    if (n < 0 || n > m) return 0;
    n = std::min(n, m - n);
    std::uint64_t result = 1;
    for (int i = 1; i <= n; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(m - n + i);
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw CapacityError("binomial(" + std::to_string(m) + ", " + std::to_string(n) + ") overflows");
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

class ManyBodyBasis {
public:
    ManyBodyBasis() = default;
    ManyBodyBasis(int n, int m, std::vector<double> eps, std::vector<OccupationState> states,
                  std::vector<double> energies)
        : n_(n), m_(m), eps_(std::move(eps)), states_(std::move(states)), energies_(std::move(energies)) {
        index_.reserve(states_.size());
        for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i].mask, i);
    }

    [[nodiscard]] int particles() const noexcept { return n_; }
    [[nodiscard]] int orbitals() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] std::span<const double> single_particle_energies() const noexcept { return eps_; }
    [[nodiscard]] std::span<const OccupationState> states() const noexcept { return states_; }
    [[nodiscard]] std::span<const double> energies() const noexcept { return energies_; }
    [[nodiscard]] OccupationState state(std::size_t i) const { return states_.at(i); }
    [[nodiscard]] double energy(std::size_t i) const { return energies_.at(i); }

    /// Position of a state in the energy-ordered list.
    [[nodiscard]] std::size_t index_of(OccupationState s) const {
        const auto it = index_.find(s.mask);
        if (it == index_.end()) throw std::out_of_range("occupation state not in basis");
        return it->second;
    }

    /// Index of the state at the center of the spectrum (N/2, 0-based).
    [[nodiscard]] std::size_t center_index() const noexcept { return states_.size() / 2; }

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<double> eps_;
    std::vector<OccupationState> states_;
    std::vector<double> energies_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/**
 * @brief Enumerate all binomial(m, n) occupation states.
 *
 * States are sorted by unperturbed energy E_f = sum of occupied eps, ties
 * broken by ascending mask value.
 */
inline ManyBodyBasis enumerate_basis(int n, int m, std::span<const double> eps) {
    if (m > kMaxOrbitals) throw CapacityError("at most 64 orbitals are supported, got " + std::to_string(m));
    if (n <= 0 || m <= 0 || n > m)
        throw std::invalid_argument("enumerate_basis: need 0 < n <= m (n=" + std::to_string(n) +
                                    ", m=" + std::to_string(m) + ")");
    if (eps.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("enumerate_basis: eps must hold m energies");
    for (std::size_t s = 1; s < eps.size(); ++s)
        if (!(eps[s] > eps[s - 1])) throw std::invalid_argument("enumerate_basis: eps must be strictly increasing");

    const std::uint64_t count = binomial(m, n);
    if (count > kMaxBasisSize) throw CapacityError("basis of " + std::to_string(count) + " states is too large");

    struct Entry {
        double energy;
        std::uint64_t mask;
    };
    std::vector<Entry> entries;
    entries.reserve(count);

    // Gosper's hack walks all n-bit masks below 2^m in increasing order.
    std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    for (std::uint64_t k = 0; k < count; ++k) {
        double e = 0.0;
        for (std::uint64_t bits = mask; bits; bits &= bits - 1) e += eps[std::countr_zero(bits)];
        entries.push_back({e, mask});
        if (k + 1 == count) break;
        const std::uint64_t c = mask & (~mask + 1);
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.energy < b.energy || (a.energy == b.energy && a.mask < b.mask);
    });

    std::vector<OccupationState> states;
    std::vector<double> energies;
    states.reserve(count);
    energies.reserve(count);
    for (const auto& e : entries) {
        states.push_back({e.mask});
        energies.push_back(e.energy);
    }
    return ManyBodyBasis(n, m, std::vector<double>(eps.begin(), eps.end()), std::move(states), std::move(energies));
}

/// Number of states reachable from any basis state by one two-body step:
/// n(m-n) one-particle plus n(n-1)(m-n)(m-n-1)/4 two-particle moves.
inline std::uint64_t direct_coupling_count(int n, int m) {
    if (n <= 0 || n > m) throw std::invalid_argument("direct_coupling_count: need 0 < n <= m");
    const auto nn = static_cast<std::uint64_t>(n);
    const auto holes = static_cast<std::uint64_t>(m - n);
    const std::uint64_t two = (n >= 2 && holes >= 2) ? nn * (nn - 1) * holes * (holes - 1) / 4 : 0;
    return nn * holes + two;
}

/// ln N / ln M: effective number of cascade steps to cover the basis.
inline double effective_class_count(double N, double M) {
    if (!(N > 1.0) || !(M > 1.0)) throw std::invalid_argument("effective_class_count: need N > 1 and M > 1");
    return std::log(N) / std::log(M);
}

struct ClassDecomposition {
    std::vector<int> class_of;
    std::vector<std::size_t> class_sizes;

    [[nodiscard]] int n_classes() const noexcept { return static_cast<int>(class_sizes.size()); }
};

/// Breadth-first distance from `initial` on the structural two-body graph.
/// Independent of any sampled matrix element.
inline ClassDecomposition classify(const ManyBodyBasis& basis, std::size_t initial) {
    const std::size_t N = basis.size();
    if (initial >= N) throw std::out_of_range("classify: initial index " + std::to_string(initial) + " out of range");

    const auto states = basis.states();
    ClassDecomposition out;
    out.class_of.assign(N, -1);
    out.class_of[initial] = 0;

    std::vector<std::size_t> frontier{initial};
    std::vector<std::size_t> unvisited;
    unvisited.reserve(N - 1);
    for (std::size_t i = 0; i < N; ++i)
        if (i != initial) unvisited.push_back(i);

    out.class_sizes.push_back(1);
    for (int depth = 1; !frontier.empty() && !unvisited.empty(); ++depth) {
        std::vector<std::size_t> next;
        std::vector<std::size_t> remaining;
        for (const std::size_t j : unvisited) {
            const bool reached = std::any_of(frontier.begin(), frontier.end(), [&](std::size_t i) {
                return states[i].moved_particles(states[j]) <= 2;
            });
            (reached ? next : remaining).push_back(j);
        }
        if (next.empty()) break;
        for (const std::size_t j : next) out.class_of[j] = depth;
        out.class_sizes.push_back(next.size());
        frontier = std::move(next);
        unvisited = std::move(remaining);
    }
    return out;
}

} // namespace fockdyn
