#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qsmooth/errors.hpp"
#include "qsmooth/tolerances.hpp"

namespace qsmooth {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

Matrix identity_matrix(int dim);
Matrix kron(const Matrix& a, const Matrix& b);

// Dense complex Hermitian matrix with a validated dimension. The ambient
// object for everything else: states, projectors, difference operators.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries,
                             const Tolerances& tol = default_tolerances());

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double trace() const { return entries_.trace().real(); }

  HermitianOperator scaled(double factor) const;

 private:
  Matrix entries_;
};

HermitianOperator hermitian_identity(int dim);
HermitianOperator hermitian_zero(int dim);

// Positive semidefinite operator with trace in [0, 1]. Subnormalized states
// (trace < 1) arise from smoothing; the flag records whether the state was
// validated as normalized.
class QuantumState {
 public:
  explicit QuantumState(HermitianOperator op, bool normalized = true,
                        const Tolerances& tol = default_tolerances());

  static QuantumState diagonal(const RVector& probabilities,
                               const Tolerances& tol = default_tolerances());

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.entries(); }
  double trace() const { return op_.trace(); }
  bool normalized() const { return normalized_; }

 private:
  HermitianOperator op_;
  bool normalized_;
};

// Quantum state together with a declared A|B tensor factorization,
// dimA * dimB == dim. Index convention is row-major over (a, b),
// i.e. basis index = a * dimB + b.
class BipartiteState {
 public:
  BipartiteState(QuantumState state, int dim_a, int dim_b);

  const QuantumState& state() const { return state_; }
  const Matrix& matrix() const { return state_.matrix(); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return state_.dim(); }

 private:
  QuantumState state_;
  int dim_a_;
  int dim_b_;
};

// Orthogonal projector: idempotent Hermitian with eigenvalues in {0, 1}.
class Projector {
 public:
  explicit Projector(HermitianOperator op,
                     const Tolerances& tol = default_tolerances());

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.entries(); }
  // Tr P, the dimension of the projected subspace (real by construction).
  double rank_trace() const { return op_.trace(); }

 private:
  HermitianOperator op_;
};

}  // namespace qsmooth
