#include "qsmooth/smoothing.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "qsmooth/entropy.hpp"
#include "qsmooth/random_states.hpp"

namespace qsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log2_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log2(1.0 + std::exp2(std::min(a, b) - hi));
}

RVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed");
  return solver.eigenvalues();
}

void require_conditional_dims(const BipartiteState& rho_ab,
                              const QuantumState& sigma_b) {
  if (sigma_b.dim() != rho_ab.dim_b())
    fail(ErrorCode::DimensionMismatch, "sigma_B must act on the B factor");
}

QuantumState wrap_state(Matrix m, const Tolerances& tol) {
  m = ((m + m.adjoint()) / 2.0).eval();
  const double tr = m.trace().real();
  return QuantumState(HermitianOperator(std::move(m), tol),
                      std::abs(tr - 1.0) <= tol.entry, tol);
}

}  // namespace

const char* to_string(SmoothingMethod method) {
  switch (method) {
    case SmoothingMethod::ExactClassical: return "exactClassical";
    case SmoothingMethod::Projection: return "projection";
    case SmoothingMethod::AdditiveLemma: return "additiveLemma";
    case SmoothingMethod::ProjectorLemma: return "projectorLemma";
    case SmoothingMethod::Oracle: return "oracle";
  }
  return "unknown";
}

bool ball_contains(const QuantumState& rho_bar, const QuantumState& rho,
                   double epsilon, const Tolerances& tol) {
  if (rho_bar.dim() != rho.dim())
    fail(ErrorCode::DimensionMismatch, "ball membership needs equal dims");
  // Positivity down to -entry is already enforced by the QuantumState type.
  if (trace_distance(rho_bar, rho, tol) > epsilon + tol.assertion) return false;
  return rho_bar.trace() <= rho.trace() + tol.assertion;
}

SmoothingResult smooth_hmin_classical(const WeightedSpectrum& p,
                                      double epsilon, const Tolerances& tol) {
  if (epsilon < 0.0)
    fail(ErrorCode::PreconditionViolated, "epsilon must be nonnegative");
  if (p.size() == 0)
    fail(ErrorCode::NotPositive, "empty spectrum");
  const double total = p.total_mass();
  if (epsilon >= total - tol.assertion)
    fail(ErrorCode::EpsilonTooLarge, "epsilon must stay below the total mass");

  // Cut mass from the top down to a common cap lambda*: the cut
  // sum_i m_i (v_i - lambda) grows as lambda sinks through the sorted
  // values, and the cap solving cut = epsilon lives between two of them.
  const auto& atoms = p.atoms();
  double cum_log2_count = -kInf;  // log2 sum of multiplicities so far
  double cum_mass = 0.0;
  double bits = 0.0;
  bool found = false;
  for (std::size_t k = 0; k < atoms.size() && !found; ++k) {
    cum_log2_count = log2_add(cum_log2_count, atoms[k].log2_multiplicity);
    cum_mass += p.mass(k);
    const bool last = (k + 1 == atoms.size());
    const double boundary_cut =
        last ? cum_mass
             : cum_mass - std::exp2(cum_log2_count + atoms[k + 1].log2_value);
    if (boundary_cut >= epsilon || last) {
      bits = cum_log2_count - std::log2(cum_mass - epsilon);
      found = true;
    }
  }

  const double log2_cap = -bits;
  SmoothingResult result;
  result.value = entropy_bits(bits);
  result.epsilon = epsilon;
  result.method = SmoothingMethod::ExactClassical;

  std::vector<WeightedSpectrum::Atom> capped;
  double capped_count = -kInf;
  double cut_mass = 0.0;
  for (const auto& atom : atoms) {
    if (atom.log2_value > log2_cap) {
      capped_count = log2_add(capped_count, atom.log2_multiplicity);
      cut_mass += std::exp2(atom.log2_multiplicity + atom.log2_value) -
                  std::exp2(atom.log2_multiplicity + log2_cap);
    } else {
      capped.push_back(atom);
    }
  }
  if (capped_count != -kInf) capped.push_back({log2_cap, capped_count});
  result.witness_spectrum =
      WeightedSpectrum::from_atoms(std::move(capped), p.log_domain());
  result.distance = cut_mass;
  return result;
}

SmoothingResult smooth_hmax_classical(const WeightedSpectrum& p,
                                      double epsilon, const Tolerances& tol) {
  if (epsilon < 0.0)
    fail(ErrorCode::PreconditionViolated, "epsilon must be nonnegative");
  if (p.size() == 0)
    fail(ErrorCode::NotPositive, "empty spectrum");
  const double total = p.total_mass();
  if (epsilon >= total - tol.assertion)
    fail(ErrorCode::EpsilonTooLarge, "epsilon must stay below the total mass");

  // Delete whole eigenvalue instances ascending; the support only shrinks
  // when an instance goes entirely, so partial mass removal is useless.
  const auto& atoms = p.atoms();
  double budget = epsilon;
  double deleted_mass = 0.0;
  std::vector<WeightedSpectrum::Atom> kept(atoms.begin(), atoms.end());
  for (std::size_t r = atoms.size(); r-- > 0;) {
    const WeightedSpectrum::Atom& atom = atoms[r];
    const double class_mass =
        std::exp2(atom.log2_multiplicity + atom.log2_value);
    if (class_mass <= budget * (1.0 + 1e-12) + 1e-300) {
      budget -= class_mass;
      deleted_mass += class_mass;
      kept.pop_back();
      continue;
    }
    // Partial class: the count of removable instances, exact while it fits.
    const double log2_removable = std::log2(std::max(budget, 0.0)) -
                                  atom.log2_value;
    double removed_log2;
    if (log2_removable < 52.0) {
      const double j = std::floor(std::exp2(log2_removable) + 1e-9);
      if (j < 1.0) break;
      removed_log2 = std::log2(j);
    } else {
      removed_log2 = log2_removable;
    }
    if (removed_log2 >= atom.log2_multiplicity) break;  // cannot happen; guard
    // remaining = m - j in the log domain
    const double remaining_log2 =
        atom.log2_multiplicity +
        std::log2(1.0 - std::exp2(removed_log2 - atom.log2_multiplicity));
    deleted_mass += std::exp2(removed_log2 + atom.log2_value);
    kept.back().log2_multiplicity = remaining_log2;
    break;
  }
  if (kept.empty())
    fail(ErrorCode::EpsilonTooLarge, "deletion emptied the spectrum");

  WeightedSpectrum witness =
      WeightedSpectrum::from_atoms(std::move(kept), p.log_domain());
  SmoothingResult result;
  result.value = entropy_bits(witness.log2_support_count());
  result.epsilon = epsilon;
  result.method = SmoothingMethod::ExactClassical;
  result.distance = deleted_mass;
  result.witness_spectrum = std::move(witness);
  return result;
}

SmoothingResult smooth_hmin_unconditional(const QuantumState& rho,
                                          double epsilon,
                                          const Tolerances& tol) {
  const std::vector<EigenPair> pairs = spectral_decompose(rho.op(), tol);
  std::vector<double> probs;
  probs.reserve(pairs.size());
  for (const EigenPair& pair : pairs) probs.push_back(std::max(pair.value, 0.0));
  const WeightedSpectrum spec = WeightedSpectrum::from_probabilities(probs, tol);

  SmoothingResult result = smooth_hmin_classical(spec, epsilon, tol);
  const double cap = std::exp2(-result.value.bits);
  Matrix witness = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double kept = std::min(probs[i], cap);
    if (kept > 0.0)
      witness.noalias() += kept * (pairs[i].vector * pairs[i].vector.adjoint());
  }
  result.witness = wrap_state(std::move(witness), tol);
  result.distance = trace_distance(*result.witness, rho, tol);
  return result;
}

SmoothingResult smooth_hmax_unconditional(const QuantumState& rho,
                                          double epsilon,
                                          const Tolerances& tol) {
  const std::vector<EigenPair> pairs = spectral_decompose(rho.op(), tol);
  std::vector<double> probs;
  probs.reserve(pairs.size());
  for (const EigenPair& pair : pairs) probs.push_back(std::max(pair.value, 0.0));
  const WeightedSpectrum spec = WeightedSpectrum::from_probabilities(probs, tol);

  SmoothingResult result = smooth_hmax_classical(spec, epsilon, tol);
  const long support_before =
      std::lround(std::exp2(spec.log2_support_count()));
  const long support_after = std::lround(
      std::exp2(result.witness_spectrum->log2_support_count()));
  long to_delete = support_before - support_after;

  // pairs are sorted by eigenvalue descending, so the last positive entries
  // are the smallest instances; dropping from the tail is the deterministic
  // tie-break.
  std::vector<double> kept(probs);
  for (std::size_t i = pairs.size(); i-- > 0 && to_delete > 0;) {
    if (kept[i] > 0.0) {
      kept[i] = 0.0;
      --to_delete;
    }
  }
  Matrix witness = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (kept[i] > 0.0)
      witness.noalias() +=
          kept[i] * (pairs[i].vector * pairs[i].vector.adjoint());
  result.witness = wrap_state(std::move(witness), tol);
  result.distance = trace_distance(*result.witness, rho, tol);
  return result;
}

ProjectionSmoothing projection_smooth_low(const QuantumState& rho,
                                          double gamma_bits,
                                          const Tolerances& tol) {
  if (!rho.normalized())
    fail(ErrorCode::NotNormalized, "projection smoothing needs Tr rho = 1");
  const HermitianOperator threshold =
      hermitian_identity(rho.dim()).scaled(std::exp2(-gamma_bits));
  const Projector q =
      spectral_projector(rho.op(), threshold, SpectralRelation::Less, tol);
  Matrix smoothed = q.matrix() * rho.matrix() * q.matrix();
  const double kept = smoothed.trace().real();
  ProjectionSmoothing out{wrap_state(std::move(smoothed), tol),
                          std::clamp(1.0 - kept, 0.0, 1.0), q};
  return out;
}

ProjectionSmoothing projection_smooth_high(const QuantumState& rho,
                                           double gamma_bits,
                                           const Tolerances& tol) {
  if (!rho.normalized())
    fail(ErrorCode::NotNormalized, "projection smoothing needs Tr rho = 1");
  const HermitianOperator threshold =
      hermitian_identity(rho.dim()).scaled(std::exp2(-gamma_bits));
  const Projector p = spectral_projector(rho.op(), threshold,
                                         SpectralRelation::GreaterEqual, tol);
  Matrix smoothed = p.matrix() * rho.matrix() * p.matrix();
  const double kept = smoothed.trace().real();
  ProjectionSmoothing out{wrap_state(std::move(smoothed), tol),
                          std::clamp(1.0 - kept, 0.0, 1.0), p};
  return out;
}

SmoothingResult additive_lemma_smooth(const BipartiteState& rho_ab,
                                      const QuantumState& sigma_b,
                                      double lambda_bits,
                                      const HermitianOperator& delta_ab,
                                      const Tolerances& tol) {
  require_conditional_dims(rho_ab, sigma_b);
  if (delta_ab.dim() != rho_ab.dim())
    fail(ErrorCode::DimensionMismatch, "Delta must act on the joint space");
  if (hermitian_eigenvalues(delta_ab.entries()).minCoeff() < -tol.entry)
    fail(ErrorCode::NotPositive, "Delta must be positive semidefinite");

  const int d = rho_ab.dim();
  const Matrix alpha = std::exp2(-lambda_bits) *
                       kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  const Matrix beta = alpha + delta_ab.entries();
  const double worst =
      hermitian_eigenvalues(beta - rho_ab.matrix()).minCoeff();
  if (worst < -tol.assertion) {
    std::ostringstream msg;
    msg << "rho_AB <= 2^-lambda I(x)sigma_B + Delta fails by " << -worst;
    fail(ErrorCode::PreconditionViolated, msg.str());
  }

  const Matrix t_op = sqrt_psd(alpha, tol) * pinv_sqrt_psd(beta, tol);
  const Matrix t_bar = (t_op + t_op.adjoint()) / 2.0;
  const double t_top = hermitian_eigenvalues(t_bar).maxCoeff();
  if (t_top > 1.0 + tol.assertion) {
    std::ostringstream msg;
    msg << "(T + T^dagger)/2 <= I fails, top eigenvalue " << t_top;
    fail(ErrorCode::ConstructionFailure, msg.str());
  }

  // Purify, act with T (x) I_R on the system half, trace the reference out.
  // With the purification reshaped to a d x d matrix M (system row index,
  // reference column index), T (x) I_R |Psi> is vec(T M) and the reduced
  // state is (T M)(T M)^dagger.
  const CVector psi = purify(rho_ab.state(), tol);
  Matrix m(d, d);
  for (int s = 0; s < d; ++s)
    for (int r = 0; r < d; ++r)
      m(s, r) = psi(static_cast<Eigen::Index>(s) * d + r);
  const Matrix tm = t_op * m;
  Matrix witness_m = tm * tm.adjoint();

  QuantumState witness = wrap_state(std::move(witness_m), tol);
  SmoothingResult result;
  result.method = SmoothingMethod::AdditiveLemma;
  result.epsilon =
      std::sqrt(8.0 * std::max(delta_ab.trace(), 0.0));
  result.distance = trace_distance(witness, rho_ab.state(), tol);
  result.value =
      h_min(BipartiteState(witness, rho_ab.dim_a(), rho_ab.dim_b()), sigma_b,
            tol);
  result.witness = std::move(witness);
  return result;
}

SmoothingResult projector_lemma_smooth(const BipartiteState& rho_ab,
                                       const QuantumState& sigma_b,
                                       double lambda_bits,
                                       const Tolerances& tol) {
  require_conditional_dims(rho_ab, sigma_b);
  const Matrix shifted =
      rho_ab.matrix() -
      std::exp2(-lambda_bits) *
          kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(shifted);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "eigensolve failed");

  // Strictly positive part and the matching strict projector share the same
  // eigenvectors, so Tr(P rho) >= Tr(Delta+) holds exactly.
  Matrix delta_plus = Matrix::Zero(rho_ab.dim(), rho_ab.dim());
  Matrix projector = Matrix::Zero(rho_ab.dim(), rho_ab.dim());
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()(i);
    if (ev > tol.zero_eig) {
      const CVector v = solver.eigenvectors().col(i);
      delta_plus.noalias() += ev * (v * v.adjoint());
      projector.noalias() += v * v.adjoint();
    }
  }
  const double excess = (projector * rho_ab.matrix()).trace().real();

  SmoothingResult result = additive_lemma_smooth(
      rho_ab, sigma_b, lambda_bits, HermitianOperator(delta_plus, tol), tol);
  result.method = SmoothingMethod::ProjectorLemma;
  result.epsilon = std::sqrt(8.0 * std::max(excess, 0.0));
  return result;
}

SmoothingResult smooth_hmin_conditional_lower(const BipartiteState& rho_ab,
                                              const QuantumState& sigma_b,
                                              double epsilon,
                                              const Tolerances& tol) {
  require_conditional_dims(rho_ab, sigma_b);
  if (epsilon < 0.0)
    fail(ErrorCode::PreconditionViolated, "epsilon must be nonnegative");
  const double budget = epsilon * epsilon / 8.0;

  const Matrix sigma_full =
      kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  auto excess_at = [&](double lambda_bits) {
    const Matrix shifted =
        rho_ab.matrix() - std::exp2(-lambda_bits) * sigma_full;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(shifted);
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::DecompositionFailure, "eigensolve failed");
    double excess = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      if (solver.eigenvalues()(i) > tol.zero_eig) {
        const CVector v = solver.eigenvectors().col(i);
        excess += (v.adjoint() * rho_ab.matrix() * v).value().real();
      }
    }
    return excess;
  };
  auto feasible = [&](double lambda_bits) {
    return excess_at(lambda_bits) <= budget;
  };

  const EntropyValue hmin = h_min(rho_ab, sigma_b, tol);
  double lo = hmin.finite()
                  ? hmin.bits - 1e-3
                  : -(std::log2(static_cast<double>(rho_ab.dim())) + 60.0);
  if (!feasible(lo)) {
    // Support-deficient sigma_B can leave nothing certifiable.
    for (int i = 0; i < 8 && !feasible(lo); ++i) lo -= 8.0;
    if (!feasible(lo)) {
      SmoothingResult none;
      none.value = entropy_bits(-kInf);
      none.epsilon = epsilon;
      none.method = SmoothingMethod::ProjectorLemma;
      return none;
    }
  }
  double hi = lo + 0.5;
  int guard = 0;
  while (feasible(hi) && guard++ < 200) {
    lo = hi;
    hi += 0.5 * static_cast<double>(guard);
  }
  while (hi - lo > 1e-4) {
    const double mid = (hi + lo) / 2.0;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }

  SmoothingResult result = projector_lemma_smooth(rho_ab, sigma_b, lo, tol);
  result.epsilon = epsilon;
  return result;
}

namespace {

// Projection of w onto {x : ||x||_1 <= radius} (soft threshold).
RVector project_l1_ball(const RVector& w, double radius) {
  double norm1 = w.cwiseAbs().sum();
  if (norm1 <= radius) return w;
  std::vector<double> mags(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) mags[i] = std::abs(w(i));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double acc = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    acc += mags[k];
    const double candidate = (acc - radius) / static_cast<double>(k + 1);
    if (k + 1 == mags.size() || candidate >= mags[k + 1]) {
      tau = candidate;
      break;
    }
  }
  RVector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double mag = std::max(std::abs(w(i)) - tau, 0.0);
    out(i) = w(i) == 0.0 ? 0.0 : (w(i) > 0.0 ? mag : -mag);
  }
  return out;
}

// Dykstra projection of w onto {||x||_1 <= radius} intersect {sum x <= cap}.
RVector project_ball_constraints(RVector w, double radius, double cap) {
  RVector p = RVector::Zero(w.size());
  RVector q = RVector::Zero(w.size());
  for (int iter = 0; iter < 64; ++iter) {
    const RVector y = project_l1_ball(w + p, radius);
    p = (w + p) - y;
    const double excess = y.sum() + q.sum() - cap;
    RVector z = y + q;
    if (excess > 0.0)
      z.array() -= excess / static_cast<double>(w.size());
    q = (y + q) - z;
    if ((z - w).cwiseAbs().maxCoeff() < 1e-14) return z;
    w = z;
  }
  return w;
}

struct OracleContext {
  const Matrix* rho;
  const Matrix* sigma_full;  // I_A (x) sigma_B
  double epsilon;
  double trace_cap;
  const Tolerances* tol;
};

Matrix project_psd(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((x + x.adjoint()) / 2.0);
  RVector clamped = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() * clamped.asDiagonal() *
         solver.eigenvectors().adjoint();
}

Matrix project_below(const Matrix& x, const Matrix& cap) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((x - cap) + (x - cap).adjoint()) / 2.0);
  RVector clamped = solver.eigenvalues().cwiseMin(0.0);
  return cap + solver.eigenvectors() * clamped.asDiagonal() *
                   solver.eigenvectors().adjoint();
}

Matrix project_ball(const OracleContext& ctx, const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((x - *ctx.rho) + (x - *ctx.rho).adjoint()) / 2.0);
  const RVector w = project_ball_constraints(
      solver.eigenvalues(), ctx.epsilon,
      ctx.trace_cap - ctx.rho->trace().real());
  return *ctx.rho + solver.eigenvectors() * w.asDiagonal() *
                        solver.eigenvectors().adjoint();
}

double oracle_residual(const OracleContext& ctx, const Matrix& x,
                       double lambda) {
  const double psd =
      std::max(0.0, -hermitian_eigenvalues((x + x.adjoint()) / 2.0).minCoeff());
  const double cap = std::max(
      0.0, hermitian_eigenvalues(x - lambda * (*ctx.sigma_full)).maxCoeff());
  return std::max(psd, cap);
}

// Alternating projections onto {psd} -> {<= lambda I sigma} -> {ball};
// the iterate is ball-feasible on exit, so the residual is the psd + cap
// violation only.
bool pocs_feasible(const OracleContext& ctx, Matrix x, double lambda,
                   int max_iterations, double feas_tol, Matrix* found) {
  const Matrix cap_op = lambda * (*ctx.sigma_full);
  double previous = kInf;
  int stale = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    x = project_psd(x);
    x = project_below(x, cap_op);
    x = project_ball(ctx, x);
    const double residual = oracle_residual(ctx, x, lambda);
    if (residual <= feas_tol) {
      *found = x;
      return true;
    }
    if (residual > previous - 1e-13) {
      if (++stale >= 16) return false;  // converged to a positive gap
    } else {
      stale = 0;
    }
    previous = residual;
  }
  return false;
}

}  // namespace

SmoothingResult smooth_hmin_conditional_oracle(const BipartiteState& rho_ab,
                                               const QuantumState& sigma_b,
                                               double epsilon,
                                               const OracleOptions& options,
                                               const Tolerances& tol) {
  require_conditional_dims(rho_ab, sigma_b);
  if (rho_ab.dim() > options.max_dim)
    fail(ErrorCode::DimensionTooLarge, "oracle is desk-scale only");
  if (epsilon < 0.0)
    fail(ErrorCode::PreconditionViolated, "epsilon must be nonnegative");

  const Matrix sigma_full =
      kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());
  OracleContext ctx{&rho_ab.matrix(), &sigma_full, epsilon,
                    rho_ab.state().trace(), &tol};

  auto achieved_bits = [&](const QuantumState& witness) {
    return h_min(BipartiteState(witness, rho_ab.dim_a(), rho_ab.dim_b()),
                 sigma_b, tol)
        .bits;
  };

  // Clean a raw iterate into a certified ball member, then report the exact
  // entropy it achieves.
  auto sanitize = [&](const Matrix& x) -> QuantumState {
    Matrix w = project_psd(x);
    const double tr = w.trace().real();
    if (tr > ctx.trace_cap && tr > 0.0) w *= ctx.trace_cap / tr;
    QuantumState candidate = wrap_state(std::move(w), tol);
    const double dist = trace_distance(candidate, rho_ab.state(), tol);
    if (dist > epsilon && dist > 0.0) {
      const double shrink = epsilon * (1.0 - 1e-12) / dist;
      Matrix mixed =
          rho_ab.matrix() + shrink * (candidate.matrix() - rho_ab.matrix());
      candidate = wrap_state(std::move(mixed), tol);
    }
    return candidate;
  };

  // The certified lemma witness seeds the search; the oracle can then never
  // fall below the lower bound.
  SmoothingResult lower =
      smooth_hmin_conditional_lower(rho_ab, sigma_b, epsilon, tol);
  QuantumState best = lower.witness ? *lower.witness : rho_ab.state();
  double best_bits = achieved_bits(best);
  {
    const double rho_bits = achieved_bits(rho_ab.state());
    if (rho_bits > best_bits) {
      best = rho_ab.state();
      best_bits = rho_bits;
    }
  }
  bool any_feasible = std::isfinite(best_bits);

  auto try_feasible = [&](double bits) -> bool {
    if (best_bits >= bits) return true;  // the stored witness already certifies
    const double lambda = std::exp2(-bits);
    // Cheap certificates first: the lemma construction, then the capped state.
    {
      SmoothingResult lemma = projector_lemma_smooth(rho_ab, sigma_b, bits, tol);
      if (lemma.epsilon <= epsilon && lemma.witness) {
        const double got = achieved_bits(*lemma.witness);
        if (got > best_bits) {
          best = *lemma.witness;
          best_bits = got;
          any_feasible = true;
        }
        if (got >= bits) return true;
      }
    }
    std::vector<Matrix> starts;
    starts.push_back(best.matrix());
    starts.push_back(rho_ab.matrix());
    starts.push_back(project_below(rho_ab.matrix(), lambda * sigma_full));
    const int random_starts = std::max(0, options.restarts -
                                              static_cast<int>(starts.size()));
    for (int r = 0; r < random_starts; ++r) {
      const Matrix noise =
          ginibre_matrix(derive_seed(options.seed, 0xb0c5, r), rho_ab.dim(),
                         rho_ab.dim());
      const Matrix herm = (noise + noise.adjoint()) / 2.0;
      starts.push_back(rho_ab.matrix() +
                       (epsilon / 2.0) * herm / std::max(1.0, herm.norm()));
    }
    for (const Matrix& start : starts) {
      Matrix found;
      if (pocs_feasible(ctx, start, lambda, options.max_iterations,
                        options.feasibility_tol, &found)) {
        const QuantumState witness = sanitize(found);
        const double got = achieved_bits(witness);
        if (got > best_bits) {
          best = witness;
          best_bits = got;
          any_feasible = true;
        }
        if (got >= bits - 2.0 * options.bits_resolution) return true;
      }
    }
    return false;
  };

  if (epsilon > 0.0) {
    double lo = std::isfinite(best_bits)
                    ? best_bits
                    : -(std::log2(static_cast<double>(rho_ab.dim())) + 60.0);
    const double mass_floor =
        std::max(rho_ab.state().trace() - epsilon, 1e-15);
    double hi = std::log2(static_cast<double>(rho_ab.dim_a())) -
                std::log2(mass_floor) + 0.01;
    if (hi < lo) hi = lo + options.bits_resolution;
    while (hi - lo > options.bits_resolution) {
      const double mid = (hi + lo) / 2.0;
      if (try_feasible(mid))
        lo = std::max(mid, best_bits);
      else
        hi = mid;
      if (hi < lo) hi = lo;
    }
  }

  if (!any_feasible)
    fail(ErrorCode::NonConvergence,
         "no feasible smoothing found; sigma_B support is too small");

  SmoothingResult result;
  result.value = entropy_bits(best_bits);
  result.epsilon = epsilon;
  result.method = SmoothingMethod::Oracle;
  result.distance = trace_distance(best, rho_ab.state(), tol);
  result.witness = std::move(best);
  return result;
}

SmoothingResult smooth_hmax_conditional_upper(const BipartiteState& rho_ab,
                                              const QuantumState& sigma_b,
                                              double epsilon,
                                              const Tolerances& tol) {
  require_conditional_dims(rho_ab, sigma_b);
  if (epsilon < 0.0)
    fail(ErrorCode::PreconditionViolated, "epsilon must be nonnegative");
  if (!rho_ab.state().normalized())
    fail(ErrorCode::NotNormalized, "hmax smoothing needs Tr rho = 1");

  const Matrix sigma_full =
      kron(identity_matrix(rho_ab.dim_a()), sigma_b.matrix());

  // Generalized-eigenvalue range of rho against I (x) sigma fixes the sweep.
  const Matrix isqrt = pinv_sqrt_psd(sigma_full, tol);
  const RVector gen =
      hermitian_eigenvalues(isqrt * rho_ab.matrix() * isqrt);
  double top = gen.maxCoeff();
  double bottom = top;
  for (Eigen::Index i = 0; i < gen.size(); ++i)
    if (gen(i) > tol.rank_rel * top) bottom = std::min(bottom, gen(i));
  if (top <= 0.0)
    fail(ErrorCode::NoFeasibleGamma, "state has no weight against sigma_B");
  const double gamma_lo = -std::log2(top) - 0.5;
  const double gamma_hi = -std::log2(bottom) + 0.5;
  const int steps = 600;

  SmoothingResult result;
  result.epsilon = epsilon;
  result.method = SmoothingMethod::Projection;
  result.value = entropy_bits(kInf);
  bool any = false;

  for (int s = steps; s >= 0; --s) {
    const double gamma =
        gamma_lo + (gamma_hi - gamma_lo) * static_cast<double>(s) /
                       static_cast<double>(steps);
    const HermitianOperator threshold(std::exp2(-gamma) * sigma_full, tol);
    const Projector p = spectral_projector(rho_ab.state().op(), threshold,
                                           SpectralRelation::GreaterEqual, tol);
    Matrix smoothed = p.matrix() * rho_ab.matrix() * p.matrix();
    QuantumState candidate = wrap_state(std::move(smoothed), tol);
    if (candidate.trace() <= tol.rank_rel) continue;
    if (!ball_contains(candidate, rho_ab.state(), epsilon, tol)) continue;
    const EntropyValue value =
        h_max(BipartiteState(candidate, rho_ab.dim_a(), rho_ab.dim_b()),
              sigma_b, tol);
    if (!std::isfinite(value.bits)) continue;
    if (value.bits > gamma + tol.assertion)
      fail(ErrorCode::ConstructionFailure,
           "projection value exceeded the Lemma 2 cap");
    if (value.bits < result.value.bits) {
      result.value = value;
      result.witness = candidate;
      result.distance = trace_distance(candidate, rho_ab.state(), tol);
      any = true;
    }
  }
  if (!any)
    fail(ErrorCode::NoFeasibleGamma,
         "no projection candidate stayed inside the ball");
  return result;
}

}  // namespace qsmooth
