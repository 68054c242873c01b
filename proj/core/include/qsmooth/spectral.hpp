#pragma once

#include <utility>
#include <vector>

#include "qsmooth/operators.hpp"

namespace qsmooth {

// Which side of the A|B split survives a partial trace.
enum class Subsystem { A, B };

// Relation of the eigenvalues of A - B to zero in a spectral split.
// Eigenvalues with |lambda| <= zero_eig count as zero and belong to the
// non-strict projectors only.
enum class SpectralRelation { GreaterEqual, Greater, LessEqual, Less };

struct EigenPair {
  double value;
  CVector vector;
};

// Full spectral decomposition, eigenvalues sorted descending, eigenvectors
// orthonormal with a deterministic phase (first component above the zero
// cutoff made real positive).
std::vector<EigenPair> spectral_decompose(
    const HermitianOperator& a, const Tolerances& tol = default_tolerances());

// Projector onto the eigenspaces of A - B whose eigenvalues satisfy the
// relation, e.g. {A >= B}. {A >= B} + {A < B} = I.
Projector spectral_projector(const HermitianOperator& a,
                             const HermitianOperator& b, SpectralRelation rel,
                             const Tolerances& tol = default_tolerances());

// Unhalved trace norm of A - B: the sum of absolute eigenvalues of the
// difference.
double trace_distance(const HermitianOperator& a, const HermitianOperator& b,
                      const Tolerances& tol = default_tolerances());
double trace_distance(const QuantumState& a, const QuantumState& b,
                      const Tolerances& tol = default_tolerances());

// F(rho, rho') = Tr sqrt(rho^{1/2} rho' rho^{1/2}).
double fidelity(const QuantumState& rho, const QuantumState& rho_prime,
                const Tolerances& tol = default_tolerances());

// Spectral purification sum_i sqrt(lambda_i) |v_i> (x) |e_i> on a dim^2
// ambient space; tracing out the reference factor (subsystem B) restores
// rho. Norm^2 equals the trace of rho.
CVector purify(const QuantumState& rho,
               const Tolerances& tol = default_tolerances());

Matrix partial_trace(const Matrix& x, int dim_a, int dim_b, Subsystem keep);
HermitianOperator partial_trace(const HermitianOperator& x, int dim_a,
                                int dim_b, Subsystem keep);
QuantumState partial_trace(const BipartiteState& rho, Subsystem keep,
                           const Tolerances& tol = default_tolerances());

struct GentleProjectResult {
  QuantumState smoothed;  // sqrt(Lambda) rho sqrt(Lambda)
  double distance;        // || rho - smoothed ||_1
};

// Gentle measurement: for 0 <= Lambda <= I with Tr(rho Lambda) >= 1 - delta
// the returned distance is at most 2 sqrt(delta), also for subnormalized rho.
GentleProjectResult gentle_project(const QuantumState& rho,
                                   const HermitianOperator& lambda,
                                   const Tolerances& tol = default_tolerances());

struct Lemma1Values {
  double lhs;        // Tr[P (A - B)]
  double rhs_upper;  // Tr[{A >= B} (A - B)]
  double rhs_lower;  // Tr[{A <= B} (A - B)]
};

// Tr[{A <= B}(A-B)] <= Tr[P(A-B)] <= Tr[{A >= B}(A-B)] for any 0 <= P <= I.
Lemma1Values check_lemma1(const HermitianOperator& a,
                          const HermitianOperator& b,
                          const HermitianOperator& p,
                          const Tolerances& tol = default_tolerances());

struct Lemma2Values {
  double trace_value;  // Tr[{rho >= 2^{-n gamma} omega} omega]
  double bound;        // 2^{n gamma}
};

Lemma2Values check_lemma2(const QuantumState& rho,
                          const HermitianOperator& omega, double gamma, int n,
                          const Tolerances& tol = default_tolerances());

// Internal-but-reused PSD matrix kernels.
Matrix sqrt_psd(const Matrix& m, const Tolerances& tol = default_tolerances());
Matrix pinv_sqrt_psd(const Matrix& m,
                     const Tolerances& tol = default_tolerances());
Matrix positive_part(const Matrix& m,
                     const Tolerances& tol = default_tolerances());
Matrix support_projector(const Matrix& m,
                         const Tolerances& tol = default_tolerances());

}  // namespace qsmooth
