#include "qsmooth/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qsmooth/spectral.hpp"

namespace qsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RVector state_eigenvalues(const QuantumState& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed");
  return solver.eigenvalues();
}

}  // namespace

EntropyValue von_neumann_entropy(const QuantumState& rho,
                                 const Tolerances& tol) {
  if (!rho.normalized())
    fail(ErrorCode::NotNormalized, "von Neumann entropy needs Tr rho = 1");
  const RVector vals = state_eigenvalues(rho);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > tol.entropy_eig) bits -= vals(i) * std::log2(vals(i));
  return entropy_bits(std::max(bits, 0.0));
}

EntropyValue h_min(const BipartiteState& rho_ab, const QuantumState& sigma_b,
                   const Tolerances& tol) {
  if (sigma_b.dim() != rho_ab.dim_b())
    fail(ErrorCode::DimensionMismatch, "sigma_B must act on the B factor");
  if (!sigma_b.normalized())
    fail(ErrorCode::NotNormalized, "sigma_B must be a normalized state");
  const Matrix sigma_full =
      kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  // No finite lambda exists when the B marginal leaks out of supp(sigma_B).
  const Matrix marginal = partial_trace(rho_ab.matrix(), rho_ab.dim_a(),
                                        rho_ab.dim_b(), Subsystem::B);
  const Matrix sigma_supp = support_projector(sigma_b.matrix(), tol);
  const double leak =
      ((identity_matrix(rho_ab.dim_b()) - sigma_supp) * marginal)
          .trace()
          .real();
  if (leak > tol.assertion) return entropy_bits(-kInf);

  const Matrix isqrt = pinv_sqrt_psd(sigma_full, tol);
  Matrix conj = isqrt * rho_ab.matrix() * isqrt;
  conj = ((conj + conj.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(conj, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed");
  const double lambda_star = solver.eigenvalues().maxCoeff();
  if (lambda_star <= 0.0) return entropy_bits(kInf);
  return entropy_bits(-std::log2(lambda_star));
}

EntropyValue h_max(const BipartiteState& rho_ab, const QuantumState& sigma_b,
                   const Tolerances& tol) {
  if (sigma_b.dim() != rho_ab.dim_b())
    fail(ErrorCode::DimensionMismatch, "sigma_B must act on the B factor");
  if (!sigma_b.normalized())
    fail(ErrorCode::NotNormalized, "sigma_B must be a normalized state");
  const Matrix pi = support_projector(rho_ab.matrix(), tol);
  const Matrix sigma_full =
      kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  const double overlap = (pi * sigma_full).trace().real();
  if (overlap <= 0.0) return entropy_bits(-kInf);
  return entropy_bits(std::log2(overlap));
}

EntropyValue h_min_unconditional(const QuantumState& rho,
                                 const Tolerances& tol) {
  (void)tol;
  const double top = state_eigenvalues(rho).maxCoeff();
  if (top <= 0.0) return entropy_bits(kInf);
  return entropy_bits(-std::log2(top));
}

EntropyValue h_max_unconditional(const QuantumState& rho,
                                 const Tolerances& tol) {
  const RVector vals = state_eigenvalues(rho);
  const double top = vals.maxCoeff();
  if (top <= 0.0) return entropy_bits(-kInf);
  long rank = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > tol.rank_rel * top) ++rank;
  return entropy_bits(std::log2(static_cast<double>(rank)));
}

}  // namespace qsmooth
