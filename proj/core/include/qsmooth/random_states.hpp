#pragma once

#include <cstdint>

#include "qsmooth/operators.hpp"

namespace qsmooth {

inline constexpr int kMaxRandomDim = 64;

// Seeded complex matrix with independent standard normal entries. The
// generator (mt19937_64 + Box-Muller) is fixed by this library, not the
// standard library's distribution, so equal seeds give bit-identical
// matrices everywhere.
Matrix ginibre_matrix(std::uint64_t seed, int rows, int cols);

// G G^dagger / Tr(G G^dagger): full rank with probability 1.
QuantumState random_density(std::uint64_t seed, int dim);

BipartiteState random_bipartite(std::uint64_t seed, int dim_a, int dim_b);

// (G + G^dagger) / 2, entries O(1).
HermitianOperator random_hermitian(std::uint64_t seed, int dim);

// Random effect 0 <= P <= I: a Ginibre Hermitian squashed through
// eigenvalue clamping into [0, 1].
HermitianOperator random_effect(std::uint64_t seed, int dim);

// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
Matrix random_unitary(std::uint64_t seed, int dim);

// Derives a per-trial seed from a master seed and a (check, trial) pair.
// Disjoint streams keep parallel and serial runs identical.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t check_index,
                          std::uint64_t trial_index);

}  // namespace qsmooth
