#include <doctest.h>

#include <cmath>

#include "qsmooth/entropy.hpp"
#include "qsmooth/random_states.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/state_spec.hpp"

using namespace qsmooth;

namespace {

QuantumState diag_state(std::initializer_list<double> entries) {
  RVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v(i++) = e;
  return QuantumState::diagonal(v);
}

}  // namespace

TEST_CASE("von Neumann entropy examples") {
  CHECK(von_neumann_entropy(diag_state({1.0, 0.0})).bits ==
        doctest::Approx(0.0));
  CHECK(von_neumann_entropy(maximally_mixed(8)).bits == doctest::Approx(3.0));
  CHECK(von_neumann_entropy(diag_state({0.75, 0.25})).bits ==
        doctest::Approx(0.811278).epsilon(1e-6));
  CHECK_THROWS_AS(
      von_neumann_entropy(QuantumState(
          HermitianOperator(identity_matrix(2) * 0.4), false)),
      Error);
}

TEST_CASE("conditional h_min examples") {
  // Product state: conditioning on the factor gives the unconditional value.
  const QuantumState rho_a = random_density(3, 2);
  const QuantumState sigma_b = random_density(4, 3);
  const BipartiteState product(
      QuantumState(HermitianOperator(kron(rho_a.matrix(), sigma_b.matrix()))),
      2, 3);
  CHECK(h_min(product, sigma_b).bits ==
        doctest::Approx(h_min_unconditional(rho_a).bits).epsilon(1e-9));

  CHECK(h_min(bell_state(), maximally_mixed(2)).bits ==
        doctest::Approx(-1.0).epsilon(1e-9));

  const QuantumState rho = random_density(5, 2);
  CHECK(h_min(BipartiteState(rho, 2, 1), maximally_mixed(1)).bits ==
        doctest::Approx(h_min_unconditional(rho).bits).epsilon(1e-9));
}

TEST_CASE("h_min returns -inf when the marginal leaks out of sigma support") {
  Matrix joint = Matrix::Zero(4, 4);
  joint(1, 1) = 1.0;  // |0>_A (x) |1>_B
  const BipartiteState rho(QuantumState(HermitianOperator(joint)), 2, 2);
  const QuantumState sigma = diag_state({1.0, 0.0});  // supported on |0>_B
  const EntropyValue v = h_min(rho, sigma);
  CHECK(std::isinf(v.bits));
  CHECK(v.bits < 0);
}

TEST_CASE("conditional h_max examples") {
  CHECK(h_max(bell_state(), maximally_mixed(2)).bits ==
        doctest::Approx(-1.0).epsilon(1e-9));

  CHECK(h_max_unconditional(diag_state({0.5, 0.5, 0.0})).bits ==
        doctest::Approx(1.0));

  const QuantumState rho_a = random_density(6, 3);
  const QuantumState sigma_b = random_density(7, 2);
  const BipartiteState product(
      QuantumState(HermitianOperator(kron(rho_a.matrix(), sigma_b.matrix()))),
      3, 2);
  // Full-rank factors: log2(rank(rho_A) * Tr sigma_B) = log2 3.
  CHECK(h_max(product, sigma_b).bits ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-9));

  // Disjoint supports force -inf.
  Matrix joint = Matrix::Zero(4, 4);
  joint(1, 1) = 1.0;
  const EntropyValue v = h_max(BipartiteState(QuantumState(HermitianOperator(joint)), 2, 2),
                               diag_state({1.0, 0.0}));
  CHECK(std::isinf(v.bits));
  CHECK(v.bits < 0);
}

TEST_CASE("unconditional min/max entropies") {
  CHECK(h_min_unconditional(maximally_mixed(4)).bits == doctest::Approx(2.0));
  CHECK(h_max_unconditional(maximally_mixed(4)).bits == doctest::Approx(2.0));
  CHECK(h_min_unconditional(diag_state({1.0, 0.0})).bits ==
        doctest::Approx(0.0));
  CHECK(h_max_unconditional(diag_state({1.0, 0.0})).bits ==
        doctest::Approx(0.0));
  CHECK(h_min_unconditional(diag_state({0.75, 0.25})).bits ==
        doctest::Approx(0.415037).epsilon(1e-6));
  CHECK(h_max_unconditional(diag_state({0.75, 0.25})).bits ==
        doctest::Approx(1.0));
}

TEST_CASE("order chain H_min <= S <= H_max on random states") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int dim = 2 + static_cast<int>(s % 15);
    const QuantumState rho = random_density(derive_seed(500, 0, s), dim);
    const double hmin = h_min_unconditional(rho).bits;
    const double svn = von_neumann_entropy(rho).bits;
    const double hmax = h_max_unconditional(rho).bits;
    CHECK(hmin >= -1e-9);
    CHECK(hmin <= svn + 1e-9);
    CHECK(svn <= hmax + 1e-9);
  }
}

TEST_CASE("unitary invariance of the entropies") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BipartiteState rho = random_bipartite(derive_seed(510, 0, s), 2, 2);
    const QuantumState sigma = random_density(derive_seed(510, 1, s), 2);
    const Matrix ua = random_unitary(derive_seed(510, 2, s), 2);
    const Matrix ub = random_unitary(derive_seed(510, 3, s), 2);
    const Matrix u = kron(ua, ub);
    const BipartiteState rho_u(
        QuantumState(HermitianOperator(u * rho.matrix() * u.adjoint())), 2, 2);
    const QuantumState sigma_u(
        HermitianOperator(ub * sigma.matrix() * ub.adjoint()));
    CHECK(h_min(rho, sigma).bits ==
          doctest::Approx(h_min(rho_u, sigma_u).bits).epsilon(1e-8));
    CHECK(h_max(rho, sigma).bits ==
          doctest::Approx(h_max(rho_u, sigma_u).bits).epsilon(1e-8));
    CHECK(von_neumann_entropy(rho.state()).bits ==
          doctest::Approx(von_neumann_entropy(rho_u.state()).bits)
              .epsilon(1e-8));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const BipartiteState rho = random_bipartite(42, 2, 2);
  CHECK_THROWS_AS(h_min(rho, maximally_mixed(3)), Error);
  CHECK_THROWS_AS(h_max(rho, maximally_mixed(4)), Error);
}

TEST_CASE("conditional entropies insist on a normalized sigma_B") {
  const BipartiteState rho = random_bipartite(43, 2, 2);
  const QuantumState sub(HermitianOperator(identity_matrix(2) * 0.3), false);
  CHECK_THROWS_AS(h_min(rho, sub), Error);
  CHECK_THROWS_AS(h_max(rho, sub), Error);
}
