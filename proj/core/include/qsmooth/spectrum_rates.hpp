#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qsmooth/operators.hpp"
#include "qsmooth/weighted_spectrum.hpp"

namespace qsmooth {

// Divergence-form functional Tr[{Pi >= 0} Pi] with Pi = rho - 2^{+gamma} omega.
// Note the divergence sign: the exponent enters with +gamma, in contrast to
// the entropy functionals which use -gamma. gamma_bits carries the whole
// n*gamma product.
double div_trace_primary(const QuantumState& rho,
                         const HermitianOperator& omega, double gamma_bits,
                         const Tolerances& tol = default_tolerances());

// Alternative divergence functional Tr[{rho >= 2^{+alpha} omega} rho];
// non-increasing in alpha_bits.
double div_trace_alt(const QuantumState& rho, const HermitianOperator& omega,
                     double alpha_bits,
                     const Tolerances& tol = default_tolerances());

// Tr[{omega >= 2^{-alpha} I} (omega - 2^{-alpha} I)]; zero whenever
// ||omega||_inf <= 2^{-alpha}. Entropy sign convention.
double upsilon_trace(const HermitianOperator& omega, double alpha_bits,
                     const Tolerances& tol = default_tolerances());

// Conditional variant against I_A (x) rho_B of the given bipartite operator.
double upsilon_trace_conditional(const BipartiteState& sigma_ab,
                                 const QuantumState& rho_b, double alpha_bits,
                                 const Tolerances& tol = default_tolerances());

// Tr[P rho_AB] with P = {rho_AB >= 2^{-gamma} I_A (x) rho_B} and rho_B the
// B marginal of rho_AB itself.
double conditional_trace(const BipartiteState& rho_ab, double gamma_bits,
                         const Tolerances& tol = default_tolerances());

// Finite-n bracketing of the spectral entropy rates. The trace family maps
// (n, gamma) to a trace value in [0, 1]; gamma is a per-copy rate, so dense
// families evaluate their functional at total exponent n * gamma.
using TraceFamily = std::function<double(long n, double gamma)>;

struct RateProfile {
  struct Row {
    long n;
    double gamma;
    double trace;
  };
  std::vector<Row> rows;
  double lower_bracket = 0.0;  // largest gamma with trace <= t_low at max n
  double upper_bracket = 0.0;  // smallest gamma with trace >= t_high at max n
  double t_low = 0.01;
  double t_high = 0.99;
};

RateProfile rate_profile(const TraceFamily& family, std::span<const long> n_list,
                         std::span<const double> gamma_grid, double t_low,
                         double t_high);

// Ready-made i.i.d. families for the two divergence-definition functionals
// (omega = I), mapped into entropy coordinates via S = -D(.||I).
TraceFamily iid_family_alt(std::vector<double> base_eigenvalues);
TraceFamily iid_family_primary(std::vector<double> base_eigenvalues);

struct PropositionChainValues {
  double lhs;    // Tr[{rho >= 2^alpha omega} rho]
  double bound;  // Tr[{rho >= 2^gamma omega}(rho - 2^gamma omega)]
                 //   + 2^gamma Tr[{rho >= 2^alpha omega} omega]
};

// Finite-n instantiation of the divergence-equivalence chain; requires
// gamma_bits <= alpha_bits and satisfies lhs <= bound exactly.
PropositionChainValues proposition_chain_check(
    const QuantumState& rho, const HermitianOperator& omega, double alpha_bits,
    double gamma_bits, const Tolerances& tol = default_tolerances());

// Maximum of Tr(pi rho) over rank-limited projectors: the sum of the top
// rank_budget eigenvalues.
double best_projector_trace(const QuantumState& rho, int rank_budget,
                            const Tolerances& tol = default_tolerances());
double best_projector_trace(const WeightedSpectrum& spec,
                            std::uint64_t rank_budget);

}  // namespace qsmooth
