#include "qsmooth/random_states.hpp"

#include <cmath>
#include <random>

namespace qsmooth {

namespace {

void require_dim(int dim) {
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "dim must be >= 1");
  if (dim > kMaxRandomDim)
    fail(ErrorCode::DimensionTooLarge, "random states are capped at dim 64");
}

// Box-Muller on mt19937_64 output. std::normal_distribution is
// implementation-defined, this is not.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 =
        (static_cast<double>(engine_()) + 1.0) / 18446744073709551616.0;
    const double u2 =
        static_cast<double>(engine_()) / 18446744073709551616.0;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

Matrix ginibre_matrix(std::uint64_t seed, int rows, int cols) {
  if (rows < 1 || cols < 1)
    fail(ErrorCode::DimensionMismatch, "matrix dims must be >= 1");
  if (rows > kMaxRandomDim || cols > kMaxRandomDim)
    fail(ErrorCode::DimensionTooLarge, "random matrices are capped at 64");
  GaussianStream gauss(seed);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss.next(), gauss.next());
  return g;
}

QuantumState random_density(std::uint64_t seed, int dim) {
  require_dim(dim);
  const Matrix g = ginibre_matrix(seed, dim, dim);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return QuantumState(HermitianOperator(std::move(rho)), true);
}

BipartiteState random_bipartite(std::uint64_t seed, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b > kMaxRandomDim)
    fail(ErrorCode::DimensionTooLarge, "joint dimension is capped at 64");
  return BipartiteState(random_density(seed, dim_a * dim_b), dim_a, dim_b);
}

HermitianOperator random_hermitian(std::uint64_t seed, int dim) {
  require_dim(dim);
  const Matrix g = ginibre_matrix(seed, dim, dim);
  return HermitianOperator((g + g.adjoint()) / 2.0);
}

HermitianOperator random_effect(std::uint64_t seed, int dim) {
  require_dim(dim);
  const Matrix g = ginibre_matrix(seed, dim, dim);
  Eigen::SelfAdjointEigenSolver<Matrix> solver((g + g.adjoint()) / 2.0);
  // Squash the O(sqrt(dim)) spread into [0, 1].
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  const double span = std::max(hi - lo, 1e-12);
  RVector squashed = (solver.eigenvalues().array() - lo) / span;
  return HermitianOperator(solver.eigenvectors() * squashed.asDiagonal() *
                           solver.eigenvectors().adjoint());
}

Matrix random_unitary(std::uint64_t seed, int dim) {
  require_dim(dim);
  const Matrix g = ginibre_matrix(seed, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase so the factorization is unique.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t check_index,
                          std::uint64_t trial_index) {
  // splitmix64 over a mixed key: disjoint per-(check, trial) streams.
  std::uint64_t z = master ^ (check_index * 0x9e3779b97f4a7c15ULL) ^
                    (trial_index * 0xbf58476d1ce4e5b9ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qsmooth
