#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qsmooth/random_states.hpp"
#include "qsmooth/smoothing.hpp"
#include "qsmooth/state_spec.hpp"

using namespace qsmooth;

namespace {

double max_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

long numerical_rank(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues().maxCoeff();
  if (top <= 0.0) return 0;
  long rank = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) > 1e-10 * top) ++rank;
  return rank;
}

QuantumState diag_state(std::initializer_list<double> entries) {
  RVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v(i++) = e;
  return QuantumState::diagonal(v);
}

}  // namespace

TEST_CASE("projection_smooth_low: threshold above the top eigenvalue cuts nothing") {
  const QuantumState rho = diag_state({0.75, 0.25});
  // 2^-gamma > ||rho||_inf keeps every eigenvector inside Q.
  const ProjectionSmoothing r = projection_smooth_low(rho, 0.2);
  CHECK(r.delta == doctest::Approx(0.0));
  CHECK((r.rho_tilde.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection_smooth_low: eigen split at threshold 0.5") {
  const QuantumState rho = diag_state({0.75, 0.25});
  const ProjectionSmoothing r = projection_smooth_low(rho, 1.0);
  CHECK(r.delta == doctest::Approx(0.75));
  CHECK(r.rho_tilde.matrix()(0, 0).real() == doctest::Approx(0.0));
  CHECK(r.rho_tilde.matrix()(1, 1).real() == doctest::Approx(0.25));
  CHECK(max_eigenvalue(r.rho_tilde.matrix()) < 0.5);
}

TEST_CASE("projection_smooth_low: huge gamma cuts everything") {
  const QuantumState rho = diag_state({0.75, 0.25});
  const ProjectionSmoothing r = projection_smooth_low(rho, 60.0);
  CHECK(r.delta == doctest::Approx(1.0));
  CHECK(r.rho_tilde.matrix().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection_smooth_high examples") {
  // Threshold at or below the smallest eigenvalue keeps everything.
  const ProjectionSmoothing keep =
      projection_smooth_high(maximally_mixed(4), 2.0);
  CHECK(keep.delta == doctest::Approx(0.0));

  const QuantumState rho = diag_state({0.75, 0.25});
  const ProjectionSmoothing split = projection_smooth_high(rho, 1.0);
  CHECK(split.delta == doctest::Approx(0.25));
  CHECK(split.rho_tilde.matrix()(0, 0).real() == doctest::Approx(0.75));
  CHECK(numerical_rank(split.rho_tilde.matrix()) == 1);
  CHECK(split.projector.rank_trace() <= std::exp2(1.0) + 1e-9);

  const ProjectionSmoothing none =
      projection_smooth_high(diag_state({0.5, 0.5}), 0.0);
  CHECK(none.delta == doctest::Approx(1.0));
}

TEST_CASE("projection smoothing requires a normalized state") {
  const QuantumState sub(
      HermitianOperator(identity_matrix(2) * 0.4), false);
  CHECK_THROWS_AS(projection_smooth_low(sub, 1.0), Error);
  CHECK_THROWS_AS(projection_smooth_high(sub, 1.0), Error);
}

TEST_CASE("norm and rank bounds hold exactly on random states") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const int dim = 2 + static_cast<int>(s % 7);
    const QuantumState rho = random_density(derive_seed(700, 0, s), dim);
    const double gamma = 0.2 + 3.0 * static_cast<double>(s % 13) / 12.0;

    const ProjectionSmoothing low = projection_smooth_low(rho, gamma);
    CHECK(max_eigenvalue(low.rho_tilde.matrix()) < std::exp2(-gamma));
    CHECK(trace_distance(low.rho_tilde, rho) <=
          2.0 * std::sqrt(std::max(low.delta, 0.0)) + 1e-9);
    CHECK(ball_contains(low.rho_tilde, rho,
                        2.0 * std::sqrt(std::max(low.delta, 0.0))));

    const ProjectionSmoothing high = projection_smooth_high(rho, gamma);
    CHECK(static_cast<double>(numerical_rank(high.rho_tilde.matrix())) <=
          std::exp2(gamma) + 1e-9);
    CHECK(trace_distance(high.rho_tilde, rho) <=
          2.0 * std::sqrt(std::max(high.delta, 0.0)) + 1e-9);
  }
}

TEST_CASE("bounds hold on dense i.i.d. tensor powers up to n = 6") {
  RVector probs(2);
  probs << 0.75, 0.25;
  Matrix rho1 = QuantumState::diagonal(probs).matrix();
  Matrix power = rho1;
  for (int n = 1; n <= 6; ++n) {
    const QuantumState rho{HermitianOperator(power)};
    for (double gamma_rate : {0.3, 0.6, 0.9}) {
      const double gamma = gamma_rate * n;
      const ProjectionSmoothing low = projection_smooth_low(rho, gamma);
      CHECK(max_eigenvalue(low.rho_tilde.matrix()) < std::exp2(-gamma));
      const ProjectionSmoothing high = projection_smooth_high(rho, gamma);
      CHECK(static_cast<double>(numerical_rank(high.rho_tilde.matrix())) <=
            std::exp2(gamma) + 1e-9);
    }
    if (n < 6) power = kron(power, rho1);
  }
}

TEST_CASE("ball_contains accepts shrink and rejects trace growth") {
  const QuantumState rho = random_density(801, 3);
  CHECK(ball_contains(rho, rho, 0.0));

  const QuantumState shrunk(HermitianOperator(rho.matrix() * 0.9), false);
  CHECK(ball_contains(shrunk, rho, 0.1 + 1e-12));

  // Orthogonal bump raises the trace and gets rejected even within distance.
  RVector probs(3);
  probs << 0.55, 0.35, 0.0;
  const QuantumState base = QuantumState::diagonal(probs);
  Matrix bumped = base.matrix();
  bumped(2, 2) = 0.1;
  CHECK_FALSE(
      ball_contains(QuantumState(HermitianOperator(bumped), false), base, 0.2));
}
