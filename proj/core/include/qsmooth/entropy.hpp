#pragma once

#include <cmath>

#include "qsmooth/operators.hpp"

namespace qsmooth {

// Entropy in bits; +-infinity only under the documented support conditions
// (e.g. h_min = -inf when the B marginal leaks outside the support of
// sigma_B).
struct EntropyValue {
  double bits = 0.0;

  bool finite() const { return std::isfinite(bits); }
};

inline EntropyValue entropy_bits(double bits) { return EntropyValue{bits}; }

// S(rho) = -Tr rho log2 rho, requires a normalized state.
EntropyValue von_neumann_entropy(const QuantumState& rho,
                                 const Tolerances& tol = default_tolerances());

// H_min(rho_AB | sigma_B) = -log2 min{lambda : rho_AB <= lambda I_A (x) sigma_B}.
// The minimal lambda is the top eigenvalue of the conjugation of rho_AB by
// the pseudo-inverse square root of I (x) sigma_B; -inf when the B marginal
// of rho_AB is not supported inside sigma_B.
EntropyValue h_min(const BipartiteState& rho_ab, const QuantumState& sigma_b,
                   const Tolerances& tol = default_tolerances());

// H_max(rho_AB | sigma_B) = log2 Tr[pi_AB (I_A (x) sigma_B)], pi_AB the
// support projector of rho_AB; -inf on disjoint supports.
EntropyValue h_max(const BipartiteState& rho_ab, const QuantumState& sigma_b,
                   const Tolerances& tol = default_tolerances());

// Renyi orders infinity and zero: -log2 ||rho||_inf and log2 rank(rho).
EntropyValue h_min_unconditional(const QuantumState& rho,
                                 const Tolerances& tol = default_tolerances());
EntropyValue h_max_unconditional(const QuantumState& rho,
                                 const Tolerances& tol = default_tolerances());

}  // namespace qsmooth
