#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qsmooth/random_states.hpp"

using namespace qsmooth;

TEST_CASE("equal seeds reproduce bit-identical matrices") {
  const Matrix a = ginibre_matrix(1234, 5, 5);
  const Matrix b = ginibre_matrix(1234, 5, 5);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  const QuantumState s1 = random_density(99, 4);
  const QuantumState s2 = random_density(99, 4);
  CHECK((s1.matrix() - s2.matrix()).cwiseAbs().maxCoeff() == 0.0);

  const Matrix c = ginibre_matrix(1235, 5, 5);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random densities are unit trace and full rank") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const QuantumState rho = random_density(derive_seed(1, 2, s), 4);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                                 Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("random effects stay inside [0, I]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const HermitianOperator e = random_effect(derive_seed(2, 3, s), 5);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(e.entries(),
                                                 Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
    CHECK(solver.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("random unitaries are unitary") {
  const Matrix u = random_unitary(77, 6);
  CHECK((u.adjoint() * u - identity_matrix(6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(random_density(1, 65), Error);
  CHECK_THROWS_AS(random_bipartite(1, 8, 9), Error);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(42, 0, 0) != derive_seed(42, 0, 1));
  CHECK(derive_seed(42, 0, 0) != derive_seed(42, 1, 0));
  CHECK(derive_seed(42, 0, 0) != derive_seed(43, 0, 0));
  CHECK(derive_seed(42, 7, 9) == derive_seed(42, 7, 9));
}
