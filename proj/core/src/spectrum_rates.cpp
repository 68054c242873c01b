#include "qsmooth/spectrum_rates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsmooth/spectral.hpp"

namespace qsmooth {

namespace {

RVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed");
  return solver.eigenvalues();
}

void require_psd(const HermitianOperator& omega, const Tolerances& tol) {
  if (hermitian_eigenvalues(omega.entries()).minCoeff() < -tol.entry)
    fail(ErrorCode::NotPositive, "omega must be positive semidefinite");
}

// Tr[{M >= 0} M]: the sum of nonnegative eigenvalues of M, with the usual
// zero cutoff (zero eigenvalues contribute zero either way).
double positive_eigenvalue_sum(const Matrix& m) {
  const RVector vals = hermitian_eigenvalues(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > 0.0) sum += vals(i);
  return sum;
}

}  // namespace

double div_trace_primary(const QuantumState& rho,
                         const HermitianOperator& omega, double gamma_bits,
                         const Tolerances& tol) {
  if (rho.dim() != omega.dim())
    fail(ErrorCode::DimensionMismatch, "rho and omega must share a dimension");
  require_psd(omega, tol);
  const Matrix pi =
      rho.matrix() - std::exp2(gamma_bits) * omega.entries();
  return positive_eigenvalue_sum(pi);
}

double div_trace_alt(const QuantumState& rho, const HermitianOperator& omega,
                     double alpha_bits, const Tolerances& tol) {
  if (rho.dim() != omega.dim())
    fail(ErrorCode::DimensionMismatch, "rho and omega must share a dimension");
  require_psd(omega, tol);
  const Projector p =
      spectral_projector(rho.op(), omega.scaled(std::exp2(alpha_bits)),
                         SpectralRelation::GreaterEqual, tol);
  return (p.matrix() * rho.matrix()).trace().real();
}

double upsilon_trace(const HermitianOperator& omega, double alpha_bits,
                     const Tolerances& tol) {
  require_psd(omega, tol);
  const Matrix pi = omega.entries() -
                    std::exp2(-alpha_bits) * identity_matrix(omega.dim());
  return positive_eigenvalue_sum(pi);
}

double upsilon_trace_conditional(const BipartiteState& sigma_ab,
                                 const QuantumState& rho_b, double alpha_bits,
                                 const Tolerances& tol) {
  if (rho_b.dim() != sigma_ab.dim_b())
    fail(ErrorCode::DimensionMismatch, "rho_B must act on the B factor");
  (void)tol;
  const Matrix pi =
      sigma_ab.matrix() -
      std::exp2(-alpha_bits) *
          kron(identity_matrix(sigma_ab.dim_a()), rho_b.matrix());
  return positive_eigenvalue_sum(pi);
}

double conditional_trace(const BipartiteState& rho_ab, double gamma_bits,
                         const Tolerances& tol) {
  if (!rho_ab.state().normalized())
    fail(ErrorCode::NotNormalized, "conditional trace needs Tr rho = 1");
  const QuantumState rho_b = partial_trace(rho_ab, Subsystem::B, tol);
  const HermitianOperator threshold(
      std::exp2(-gamma_bits) *
          kron(identity_matrix(rho_ab.dim_a()), rho_b.matrix()),
      tol);
  const Projector p = spectral_projector(rho_ab.state().op(), threshold,
                                         SpectralRelation::GreaterEqual, tol);
  return (p.matrix() * rho_ab.matrix()).trace().real();
}

RateProfile rate_profile(const TraceFamily& family,
                         std::span<const long> n_list,
                         std::span<const double> gamma_grid, double t_low,
                         double t_high) {
  if (n_list.empty() || gamma_grid.size() < 2)
    fail(ErrorCode::GridTooCoarse, "need at least one n and two gamma points");
  if (!(0.0 < t_low && t_low < t_high && t_high < 1.0))
    fail(ErrorCode::PreconditionViolated, "need 0 < tLow < tHigh < 1");
  for (std::size_t i = 1; i < gamma_grid.size(); ++i)
    if (gamma_grid[i] <= gamma_grid[i - 1])
      fail(ErrorCode::PreconditionViolated, "gamma grid must be ascending");

  RateProfile profile;
  profile.t_low = t_low;
  profile.t_high = t_high;
  const long n_max = *std::max_element(n_list.begin(), n_list.end());

  bool have_low = false, have_high = false;
  for (long n : n_list) {
    double previous = -1.0;
    for (double gamma : gamma_grid) {
      const double trace = family(n, gamma);
      if (trace < previous - 1e-9)
        fail(ErrorCode::ConstructionFailure,
             "trace family is not monotone in gamma");
      previous = trace;
      profile.rows.push_back({n, gamma, trace});
      if (n == n_max) {
        if (trace <= t_low) {
          profile.lower_bracket = gamma;  // grid ascending: keeps the largest
          have_low = true;
        }
        if (!have_high && trace >= t_high) {
          profile.upper_bracket = gamma;  // first crossing is the smallest
          have_high = true;
        }
      }
    }
  }
  if (!have_low || !have_high)
    fail(ErrorCode::GridTooCoarse,
         "gamma grid does not cross both thresholds at the largest n");
  return profile;
}

TraceFamily iid_family_alt(std::vector<double> base_eigenvalues) {
  return [base = std::move(base_eigenvalues)](long n, double gamma) {
    return spectral_trace_gamma(iid_spectrum(base, n), gamma, n);
  };
}

TraceFamily iid_family_primary(std::vector<double> base_eigenvalues) {
  return [base = std::move(base_eigenvalues)](long n, double gamma) {
    return spectral_diff_trace_gamma(iid_spectrum(base, n), gamma, n);
  };
}

PropositionChainValues proposition_chain_check(const QuantumState& rho,
                                               const HermitianOperator& omega,
                                               double alpha_bits,
                                               double gamma_bits,
                                               const Tolerances& tol) {
  if (gamma_bits > alpha_bits)
    fail(ErrorCode::ParameterOrder, "gamma must not exceed alpha");
  PropositionChainValues out;
  out.lhs = div_trace_alt(rho, omega, alpha_bits, tol);
  const double diff_term = div_trace_primary(rho, omega, gamma_bits, tol);
  const Projector p_alpha =
      spectral_projector(rho.op(), omega.scaled(std::exp2(alpha_bits)),
                         SpectralRelation::GreaterEqual, tol);
  const double omega_term =
      (p_alpha.matrix() * omega.entries()).trace().real();
  out.bound = diff_term + std::exp2(gamma_bits) * omega_term;
  return out;
}

double best_projector_trace(const QuantumState& rho, int rank_budget,
                            const Tolerances& tol) {
  (void)tol;
  if (rank_budget < 1 || rank_budget > rho.dim())
    fail(ErrorCode::RankOutOfRange, "rank budget must lie in [1, dim]");
  RVector vals = hermitian_eigenvalues(rho.matrix());
  std::sort(vals.data(), vals.data() + vals.size(), std::greater<>());
  double sum = 0.0;
  for (int i = 0; i < rank_budget; ++i) sum += vals(i);
  return sum;
}

double best_projector_trace(const WeightedSpectrum& spec,
                            std::uint64_t rank_budget) {
  if (rank_budget < 1)
    fail(ErrorCode::RankOutOfRange, "rank budget must be >= 1");
  double remaining = static_cast<double>(rank_budget);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < spec.size() && remaining > 0.0; ++i) {
    const double count = std::min(remaining, spec.multiplicity(i));
    const double term =
        std::exp2(std::log2(count) + spec.atoms()[i].log2_value);
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    remaining -= count;
  }
  return std::min(sum, 1.0 + 1e-12);
}

}  // namespace qsmooth
