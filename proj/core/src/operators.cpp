#include "qsmooth/operators.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace qsmooth {

namespace {

double max_abs_deviation(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

Matrix identity_matrix(int dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator::HermitianOperator(Matrix entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
    fail(ErrorCode::DimensionMismatch,
         "operator must be square with dim >= 1");
  const double dev = max_abs_deviation(entries_, entries_.adjoint());
  if (dev > tol.entry) {
    std::ostringstream msg;
    msg << "max |A - A^dagger| = " << dev;
    fail(ErrorCode::NotHermitian, msg.str());
  }
  // Symmetrize so downstream eigensolves see an exactly Hermitian matrix.
  entries_ = ((entries_ + entries_.adjoint()) / 2.0).eval();
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(entries_ * factor);
}

HermitianOperator hermitian_identity(int dim) {
  return HermitianOperator(identity_matrix(dim));
}

HermitianOperator hermitian_zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

QuantumState::QuantumState(HermitianOperator op, bool normalized,
                           const Tolerances& tol)
    : op_(std::move(op)), normalized_(normalized) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_.entries(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed in state check");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.entry) {
    std::ostringstream msg;
    msg << "min eigenvalue " << min_eig;
    fail(ErrorCode::NotPositive, msg.str());
  }
  const Complex tr = op_.entries().trace();
  if (std::abs(tr.imag()) > tol.entry)
    fail(ErrorCode::NotPositive, "trace has an imaginary part");
  if (tr.real() > 1.0 + tol.entry)
    fail(ErrorCode::NotPositive, "trace exceeds 1");
  if (tr.real() < -tol.entry)
    fail(ErrorCode::NotPositive, "trace is negative");
  if (normalized_ && std::abs(tr.real() - 1.0) > tol.entry)
    fail(ErrorCode::NotNormalized, "normalized state must have unit trace");
}

QuantumState QuantumState::diagonal(const RVector& probabilities,
                                    const Tolerances& tol) {
  Matrix m = Matrix::Zero(probabilities.size(), probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i)
    m(i, i) = probabilities(i);
  const bool normalized = std::abs(probabilities.sum() - 1.0) <= tol.entry;
  return QuantumState(HermitianOperator(m, tol), normalized, tol);
}

BipartiteState::BipartiteState(QuantumState state, int dim_a, int dim_b)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != state_.dim())
    fail(ErrorCode::DimensionMismatch,
         "dimA * dimB must equal the state dimension");
}

Projector::Projector(HermitianOperator op, const Tolerances& tol)
    : op_(std::move(op)) {
  const Matrix& p = op_.entries();
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  if (idem > tol.assertion) {
    std::ostringstream msg;
    msg << "max |P^2 - P| = " << idem;
    fail(ErrorCode::ConstructionFailure, msg.str());
  }
}

}  // namespace qsmooth
