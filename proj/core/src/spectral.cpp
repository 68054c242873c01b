#include "qsmooth/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qsmooth {

namespace {

void require_same_dim(int a, int b) {
  if (a != b) {
    std::ostringstream msg;
    msg << "operator dimensions " << a << " and " << b << " differ";
    fail(ErrorCode::DimensionMismatch, msg.str());
  }
}

struct EigenSystem {
  RVector values;  // ascending, as Eigen produces them
  Matrix vectors;
};

EigenSystem eigensolve(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "SelfAdjointEigenSolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector eigenvalues_only(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "SelfAdjointEigenSolver failed");
  return solver.eigenvalues();
}

void fix_phase(CVector& v, double zero_cutoff) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double mag = std::abs(v(j));
    if (mag > zero_cutoff) {
      v *= std::conj(v(j)) / mag;
      return;
    }
  }
}

bool relation_selects(SpectralRelation rel, double eigenvalue,
                      double zero_cutoff) {
  const bool is_zero = std::abs(eigenvalue) <= zero_cutoff;
  switch (rel) {
    case SpectralRelation::GreaterEqual: return is_zero || eigenvalue > 0.0;
    case SpectralRelation::Greater: return !is_zero && eigenvalue > 0.0;
    case SpectralRelation::LessEqual: return is_zero || eigenvalue < 0.0;
    case SpectralRelation::Less: return !is_zero && eigenvalue < 0.0;
  }
  return false;
}

}  // namespace

std::vector<EigenPair> spectral_decompose(const HermitianOperator& a,
                                          const Tolerances& tol) {
  EigenSystem sys = eigensolve(a.entries());
  // Descending by value; ties keep the solver's original order so diagonal
  // inputs come out in the natural basis order.
  std::vector<Eigen::Index> order(sys.values.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index lhs, Eigen::Index rhs) {
                     return sys.values(lhs) > sys.values(rhs);
                   });
  std::vector<EigenPair> pairs;
  pairs.reserve(sys.values.size());
  for (Eigen::Index i : order) {
    CVector v = sys.vectors.col(i);
    fix_phase(v, tol.zero_eig);
    pairs.push_back({sys.values(i), std::move(v)});
  }
  return pairs;
}

Projector spectral_projector(const HermitianOperator& a,
                             const HermitianOperator& b, SpectralRelation rel,
                             const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim());
  EigenSystem sys = eigensolve(a.entries() - b.entries());
  Matrix p = Matrix::Zero(a.dim(), a.dim());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    if (relation_selects(rel, sys.values(i), tol.zero_eig)) {
      const CVector v = sys.vectors.col(i);
      p.noalias() += v * v.adjoint();
    }
  }
  return Projector(HermitianOperator(p, tol), tol);
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b,
                      const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim());
  (void)tol;
  return eigenvalues_only(a.entries() - b.entries()).cwiseAbs().sum();
}

double trace_distance(const QuantumState& a, const QuantumState& b,
                      const Tolerances& tol) {
  return trace_distance(a.op(), b.op(), tol);
}

double fidelity(const QuantumState& rho, const QuantumState& rho_prime,
                const Tolerances& tol) {
  require_same_dim(rho.dim(), rho_prime.dim());
  const Matrix root = sqrt_psd(rho.matrix(), tol);
  const Matrix inner = root * rho_prime.matrix() * root;
  const RVector vals = eigenvalues_only((inner + inner.adjoint()) / 2.0);
  double f = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    f += std::sqrt(std::max(vals(i), 0.0));
  return f;
}

CVector purify(const QuantumState& rho, const Tolerances& tol) {
  const int d = rho.dim();
  const std::vector<EigenPair> pairs = spectral_decompose(rho.op(), tol);
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double lambda = std::max(pairs[i].value, 0.0);
    if (lambda == 0.0) continue;
    const double amp = std::sqrt(lambda);
    // kron(v_i, e_i): system index varies slowly, reference index fast.
    for (int s = 0; s < d; ++s)
      psi(static_cast<Eigen::Index>(s) * d + i) += amp * pairs[i].vector(s);
  }
  return psi;
}

Matrix partial_trace(const Matrix& x, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 ||
      x.rows() != static_cast<Eigen::Index>(dim_a) * dim_b ||
      x.rows() != x.cols())
    fail(ErrorCode::DimensionMismatch,
         "partial trace needs a square dimA*dimB operator");
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int a = 0; a < dim_a; ++a)
      for (int a2 = 0; a2 < dim_a; ++a2)
        for (int b = 0; b < dim_b; ++b)
          out(a, a2) += x(static_cast<Eigen::Index>(a) * dim_b + b,
                          static_cast<Eigen::Index>(a2) * dim_b + b);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int b2 = 0; b2 < dim_b; ++b2)
      for (int a = 0; a < dim_a; ++a)
        out(b, b2) += x(static_cast<Eigen::Index>(a) * dim_b + b,
                        static_cast<Eigen::Index>(a) * dim_b + b2);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, int dim_a,
                                int dim_b, Subsystem keep) {
  return HermitianOperator(partial_trace(x.entries(), dim_a, dim_b, keep));
}

QuantumState partial_trace(const BipartiteState& rho, Subsystem keep,
                           const Tolerances& tol) {
  Matrix reduced =
      partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep);
  return QuantumState(HermitianOperator(std::move(reduced), tol),
                      rho.state().normalized(), tol);
}

GentleProjectResult gentle_project(const QuantumState& rho,
                                   const HermitianOperator& lambda,
                                   const Tolerances& tol) {
  require_same_dim(rho.dim(), lambda.dim());
  EigenSystem sys = eigensolve(lambda.entries());
  if (sys.values.minCoeff() < -tol.entry ||
      sys.values.maxCoeff() > 1.0 + tol.entry) {
    std::ostringstream msg;
    msg << "Lambda eigenvalues in [" << sys.values.minCoeff() << ", "
        << sys.values.maxCoeff() << "]";
    fail(ErrorCode::LambdaOutOfRange, msg.str());
  }
  RVector clamped = sys.values.cwiseMax(0.0).cwiseMin(1.0).cwiseSqrt();
  const Matrix root =
      sys.vectors * clamped.asDiagonal() * sys.vectors.adjoint();
  Matrix smoothed = root * rho.matrix() * root;
  smoothed = ((smoothed + smoothed.adjoint()) / 2.0).eval();
  const double tr = smoothed.trace().real();
  QuantumState result(HermitianOperator(std::move(smoothed), tol),
                      std::abs(tr - 1.0) <= tol.entry, tol);
  const double dist = trace_distance(rho, result, tol);
  return {std::move(result), dist};
}

Lemma1Values check_lemma1(const HermitianOperator& a,
                          const HermitianOperator& b,
                          const HermitianOperator& p, const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim());
  require_same_dim(a.dim(), p.dim());
  const RVector pvals = eigenvalues_only(p.entries());
  if (pvals.minCoeff() < -tol.entry || pvals.maxCoeff() > 1.0 + tol.entry)
    fail(ErrorCode::POutOfRange, "P must satisfy 0 <= P <= I");
  const Matrix diff = a.entries() - b.entries();
  Lemma1Values out;
  out.lhs = (p.entries() * diff).trace().real();
  out.rhs_upper =
      (spectral_projector(a, b, SpectralRelation::GreaterEqual, tol).matrix() *
       diff)
          .trace()
          .real();
  out.rhs_lower =
      (spectral_projector(a, b, SpectralRelation::LessEqual, tol).matrix() *
       diff)
          .trace()
          .real();
  return out;
}

Lemma2Values check_lemma2(const QuantumState& rho,
                          const HermitianOperator& omega, double gamma, int n,
                          const Tolerances& tol) {
  require_same_dim(rho.dim(), omega.dim());
  if (!rho.normalized())
    fail(ErrorCode::NotNormalized, "Lemma 2 requires Tr rho = 1");
  if (eigenvalues_only(omega.entries()).minCoeff() < -tol.entry)
    fail(ErrorCode::NotPositive, "omega must be positive semidefinite");
  const double scale = std::exp2(-static_cast<double>(n) * gamma);
  const Projector proj = spectral_projector(
      rho.op(), omega.scaled(scale), SpectralRelation::GreaterEqual, tol);
  Lemma2Values out;
  out.trace_value = (proj.matrix() * omega.entries()).trace().real();
  out.bound = std::exp2(static_cast<double>(n) * gamma);
  return out;
}

Matrix sqrt_psd(const Matrix& m, const Tolerances& tol) {
  (void)tol;
  EigenSystem sys = eigensolve(m);
  RVector roots = sys.values.cwiseMax(0.0).cwiseSqrt();
  return sys.vectors * roots.asDiagonal() * sys.vectors.adjoint();
}

Matrix pinv_sqrt_psd(const Matrix& m, const Tolerances& tol) {
  EigenSystem sys = eigensolve(m);
  const double top = sys.values.maxCoeff();
  const double cutoff = top > 0.0 ? tol.rank_rel * top : 0.0;
  RVector inv = RVector::Zero(sys.values.size());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i)
    if (sys.values(i) > cutoff && sys.values(i) > 0.0)
      inv(i) = 1.0 / std::sqrt(sys.values(i));
  return sys.vectors * inv.asDiagonal() * sys.vectors.adjoint();
}

Matrix positive_part(const Matrix& m, const Tolerances& tol) {
  (void)tol;
  EigenSystem sys = eigensolve(m);
  RVector pos = sys.values.cwiseMax(0.0);
  return sys.vectors * pos.asDiagonal() * sys.vectors.adjoint();
}

Matrix support_projector(const Matrix& m, const Tolerances& tol) {
  EigenSystem sys = eigensolve(m);
  const double top = sys.values.cwiseAbs().maxCoeff();
  const double cutoff = tol.rank_rel * top;
  Matrix p = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < sys.values.size(); ++i) {
    if (sys.values(i) > cutoff) {
      const CVector v = sys.vectors.col(i);
      p.noalias() += v * v.adjoint();
    }
  }
  return p;
}

}  // namespace qsmooth
