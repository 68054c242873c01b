#pragma once

#include <cstdint>
#include <optional>

#include "qsmooth/entropy.hpp"
#include "qsmooth/operators.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/weighted_spectrum.hpp"

namespace qsmooth {

enum class SmoothingMethod {
  ExactClassical,
  Projection,
  AdditiveLemma,
  ProjectorLemma,
  Oracle,
};

const char* to_string(SmoothingMethod method);

// Outcome of a smoothing construction. When a witness is present it lies in
// B^epsilon of the input and reproduces `value` under the corresponding
// non-smooth entropy. `distance` is the achieved ||witness - rho||_1, which
// can be well below the budgeted epsilon.
struct SmoothingResult {
  EntropyValue value;
  double epsilon = 0.0;
  std::optional<QuantumState> witness;
  std::optional<WeightedSpectrum> witness_spectrum;
  SmoothingMethod method = SmoothingMethod::ExactClassical;
  double distance = 0.0;
};

// Membership in B^epsilon(rho): rho_bar >= 0, ||rho_bar - rho||_1 <= epsilon
// (unhalved trace norm), Tr rho_bar <= Tr rho.
bool ball_contains(const QuantumState& rho_bar, const QuantumState& rho,
                   double epsilon, const Tolerances& tol = default_tolerances());

// Exact classical smoothing. H_min: cut mass from the largest atoms down to
// a common cap lambda with total cut epsilon, value -log2 lambda. H_max:
// delete whole eigenvalue instances ascending while the deleted mass stays
// within epsilon, value log2 of the remaining support count.
SmoothingResult smooth_hmin_classical(const WeightedSpectrum& p,
                                      double epsilon,
                                      const Tolerances& tol = default_tolerances());
SmoothingResult smooth_hmax_classical(const WeightedSpectrum& p,
                                      double epsilon,
                                      const Tolerances& tol = default_tolerances());

// Unconditional smooth entropies by diagonal reduction: smooth the spectrum
// classically and rotate the witness back into the eigenbasis of rho.
SmoothingResult smooth_hmin_unconditional(const QuantumState& rho,
                                          double epsilon,
                                          const Tolerances& tol = default_tolerances());
SmoothingResult smooth_hmax_unconditional(const QuantumState& rho,
                                          double epsilon,
                                          const Tolerances& tol = default_tolerances());

struct ProjectionSmoothing {
  QuantumState rho_tilde;
  double delta;  // 1 - Tr[Pi rho]; ball radius is 2 sqrt(delta)
  Projector projector;
};

// rho_tilde = Q rho Q with Q = {rho < 2^{-gamma_bits} I}; guarantees
// ||rho_tilde||_inf < 2^{-gamma_bits}.
ProjectionSmoothing projection_smooth_low(const QuantumState& rho,
                                          double gamma_bits,
                                          const Tolerances& tol = default_tolerances());

// rho_tilde = P rho P with P = {rho >= 2^{-gamma_bits} I}; guarantees
// rank(rho_tilde) <= Tr P <= 2^{gamma_bits}.
ProjectionSmoothing projection_smooth_high(const QuantumState& rho,
                                           double gamma_bits,
                                           const Tolerances& tol = default_tolerances());

// Conditional smoothing through T = alpha^{1/2} beta^{-1/2} with
// alpha = 2^{-lambda} I (x) sigma_B and beta = alpha + Delta, applied to a
// purification of rho_AB. Requires rho_AB <= beta. The witness satisfies
// H_min(witness | sigma_B) >= lambda and lies within sqrt(8 Tr Delta) of
// rho_AB in trace distance.
SmoothingResult additive_lemma_smooth(const BipartiteState& rho_ab,
                                      const QuantumState& sigma_b,
                                      double lambda_bits,
                                      const HermitianOperator& delta_ab,
                                      const Tolerances& tol = default_tolerances());

// Instantiates the additive construction with Delta = positive part of
// rho_AB - 2^{-lambda} I (x) sigma_B; the reported epsilon is
// sqrt(8 Tr[{rho_AB > 2^{-lambda} I (x) sigma_B} rho_AB]).
SmoothingResult projector_lemma_smooth(const BipartiteState& rho_ab,
                                       const QuantumState& sigma_b,
                                       double lambda_bits,
                                       const Tolerances& tol = default_tolerances());

// Certified lower bound on H_min^epsilon(rho_AB | sigma_B): the largest
// lambda on a 1e-4-bit bisection grid whose projector-lemma epsilon stays
// within budget. The returned value is the witness's exact H_min, which is
// >= that lambda.
SmoothingResult smooth_hmin_conditional_lower(const BipartiteState& rho_ab,
                                              const QuantumState& sigma_b,
                                              double epsilon,
                                              const Tolerances& tol = default_tolerances());

struct OracleOptions {
  std::uint64_t seed = 1;
  int restarts = 20;
  int max_iterations = 400;        // alternating-projection sweeps per start
  double feasibility_tol = 1e-7;   // accepted residual for a feasible verdict
  double bits_resolution = 2.5e-4; // bisection grid on -log2 lambda
  int max_dim = 9;
};

// Reference maximizer for the smooth conditional min-entropy at desk scale:
// bisection on lambda with an alternating-projection feasibility search over
// the epsilon-ball, seeded restarts, 1e-3-bit accuracy target. Always at
// least as large as smooth_hmin_conditional_lower because the lemma witness
// seeds the search.
SmoothingResult smooth_hmin_conditional_oracle(const BipartiteState& rho_ab,
                                               const QuantumState& sigma_b,
                                               double epsilon,
                                               const OracleOptions& options = {},
                                               const Tolerances& tol = default_tolerances());

// Upper bound on H_max^epsilon(rho_AB | sigma_B) by sweeping the projection
// smoothing P_gamma = {rho_AB >= 2^{-gamma} I (x) sigma_B}: over candidates
// whose smoothed state stays inside the epsilon-ball, the minimum of
// log2 Tr[(I (x) sigma_B) pi]. The Lemma-2 cap value <= gamma holds for the
// chosen gamma.
SmoothingResult smooth_hmax_conditional_upper(const BipartiteState& rho_ab,
                                              const QuantumState& sigma_b,
                                              double epsilon,
                                              const Tolerances& tol = default_tolerances());

}  // namespace qsmooth
