#include "qsmooth/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

#include "qsmooth/entropy.hpp"
#include "qsmooth/operators.hpp"
#include "qsmooth/random_states.hpp"
#include "qsmooth/smoothing.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/spectrum_rates.hpp"
#include "qsmooth/state_spec.hpp"
#include "qsmooth/weighted_spectrum.hpp"

namespace qsmooth {

namespace {

struct CheckSpec {
  const char* name;
  // Caps the requested trial count for expensive checks.
  long (*cap)(long requested);
  // Returns the worst margin over the allowed bound for one trial
  // (positive = violation); the battery counts trials with margin > shift.
  std::function<double(std::uint64_t trial_seed, long trial_index)> run;
};

long cap_full(long t) { return t; }
long cap_500(long t) { return std::min<long>(t, 500); }
long cap_100(long t) { return std::min<long>(t, 100); }
long cap_25(long t) { return std::min<long>(t, 25); }
long cap_oracle(long t) { return std::max<long>(1, std::min<long>(t / 50, 20)); }
long cap_once(long) { return 1; }

double uniform01(std::uint64_t seed) {
  return static_cast<double>(derive_seed(seed, 0x11, 0) >> 11) /
         9007199254740992.0;  // 2^53
}

int pick_dim(std::uint64_t seed, int lo, int hi) {
  return lo + static_cast<int>(derive_seed(seed, 0x22, 0) %
                               static_cast<std::uint64_t>(hi - lo + 1));
}

double unit_interval(std::uint64_t seed, double lo, double hi) {
  return lo + (hi - lo) * uniform01(seed);
}

RVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Random PSD operator with O(1) eigenvalues.
HermitianOperator random_psd(std::uint64_t seed, int dim) {
  const Matrix g = ginibre_matrix(seed, dim, dim);
  return HermitianOperator(g * g.adjoint() / static_cast<double>(2 * dim));
}

QuantumState subnormalized(const QuantumState& rho, double scale) {
  return QuantumState(HermitianOperator(rho.matrix() * scale), false);
}

Matrix tensor_power(const Matrix& m, int n) {
  Matrix out = m;
  for (int i = 1; i < n; ++i) out = kron(out, m);
  return out;
}

// ---- individual checks -----------------------------------------------------

double check_lemma1_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const HermitianOperator a = random_hermitian(derive_seed(s, 1, 0), dim);
  const HermitianOperator b = random_hermitian(derive_seed(s, 2, 0), dim);
  const HermitianOperator p = random_effect(derive_seed(s, 3, 0), dim);
  const Lemma1Values v = check_lemma1(a, b, p);
  return std::max(v.lhs - v.rhs_upper, v.rhs_lower - v.lhs) - 1e-9;
}

double check_lemma2_trial(std::uint64_t s, long t) {
  const int dim = pick_dim(s, 2, 8);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const HermitianOperator omega = random_psd(derive_seed(s, 2, 0), dim);
  const double gamma = unit_interval(derive_seed(s, 3, 0), -2.0, 2.0);
  const int n = 1 + static_cast<int>(t % 3);
  const Lemma2Values v = check_lemma2(rho, omega, gamma, n);
  return v.trace_value - v.bound - 1e-9;
}

double check_lemma2_conditional_trial(std::uint64_t s, long t) {
  const int db = 2 + static_cast<int>(t % 3);
  const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, db);
  const QuantumState rho_b = partial_trace(rho, Subsystem::B);
  const double gamma = unit_interval(derive_seed(s, 2, 0), -2.0, 2.0);
  const Matrix cond = kron(identity_matrix(2), rho_b.matrix());
  const Projector p =
      spectral_projector(rho.state().op(),
                         HermitianOperator(cond * std::exp2(-gamma)),
                         SpectralRelation::GreaterEqual);
  const double lhs = (p.matrix() * cond).trace().real();
  return lhs - std::exp2(gamma) - 1e-9;
}

double check_corollary1_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const HermitianOperator a = random_hermitian(derive_seed(s, 1, 0), dim);
  const double eps = unit_interval(derive_seed(s, 2, 0), 0.01, 0.5);
  HermitianOperator d = random_hermitian(derive_seed(s, 3, 0), dim);
  const double norm1 = hermitian_eigenvalues(d.entries()).cwiseAbs().sum();
  d = d.scaled(eps * uniform01(derive_seed(s, 4, 0)) / norm1);
  const HermitianOperator b(a.entries() - d.entries());
  const HermitianOperator p = random_effect(derive_seed(s, 5, 0), dim);
  const double lhs = (p.entries() * (a.entries() - b.entries())).trace().real();
  return lhs - eps - 1e-9;
}

double check_fidelity_chain_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const QuantumState rho2 = random_density(derive_seed(s, 2, 0), dim);
  const double f = fidelity(rho, rho2);
  const double half_dist = 0.5 * trace_distance(rho, rho2);
  const double mid = std::sqrt(std::max(1.0 - f * f, 0.0));
  const double outer = std::sqrt(std::max(2.0 * (1.0 - f), 0.0));
  return std::max(half_dist - mid, mid - outer) - 1e-8;
}

double check_gentle_trial(std::uint64_t s, long t) {
  const int dim = pick_dim(s, 2, 8);
  QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  if (t % 3 == 2) rho = subnormalized(rho, 0.9);  // the lemma's last sentence
  const HermitianOperator lambda = random_effect(derive_seed(s, 2, 0), dim);
  const double overlap = (rho.matrix() * lambda.entries()).trace().real();
  const double delta = std::max(1.0 - overlap, 0.0);
  const GentleProjectResult out = gentle_project(rho, lambda);
  return out.distance - 2.0 * std::sqrt(delta) - 1e-8;
}

double check_projector_algebra_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const HermitianOperator a = random_hermitian(derive_seed(s, 1, 0), dim);
  const HermitianOperator b = random_hermitian(derive_seed(s, 2, 0), dim);
  const Projector ge = spectral_projector(a, b, SpectralRelation::GreaterEqual);
  const Projector lt = spectral_projector(a, b, SpectralRelation::Less);
  const double completeness =
      (ge.matrix() + lt.matrix() - identity_matrix(dim)).cwiseAbs().maxCoeff();
  const double idem =
      (ge.matrix() * ge.matrix() - ge.matrix()).cwiseAbs().maxCoeff();
  return std::max(completeness, idem) - 1e-9;
}

double check_metric_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 6);
  const HermitianOperator a = random_hermitian(derive_seed(s, 1, 0), dim);
  const HermitianOperator b = random_hermitian(derive_seed(s, 2, 0), dim);
  const HermitianOperator c = random_hermitian(derive_seed(s, 3, 0), dim);
  const double ab = trace_distance(a, b);
  const double ba = trace_distance(b, a);
  const double ac = trace_distance(a, c);
  const double cb = trace_distance(c, b);
  return std::max(std::abs(ab - ba), ab - (ac + cb)) - 1e-9;
}

double check_entropy_chain_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 16);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const double hmin = h_min_unconditional(rho).bits;
  const double svn = von_neumann_entropy(rho).bits;
  const double hmax = h_max_unconditional(rho).bits;
  return std::max({hmin - svn, svn - hmax, -hmin}) - 1e-9;
}

double check_unitary_invariance_trial(std::uint64_t s, long) {
  const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, 2);
  const QuantumState sigma = random_density(derive_seed(s, 2, 0), 2);
  const Matrix ua = random_unitary(derive_seed(s, 3, 0), 2);
  const Matrix ub = random_unitary(derive_seed(s, 4, 0), 2);
  const Matrix u = kron(ua, ub);
  const BipartiteState rho_u(
      QuantumState(HermitianOperator(u * rho.matrix() * u.adjoint())), 2, 2);
  const QuantumState sigma_u(
      HermitianOperator(ub * sigma.matrix() * ub.adjoint()));
  double worst = std::abs(von_neumann_entropy(rho.state()).bits -
                          von_neumann_entropy(rho_u.state()).bits);
  worst = std::max(worst, std::abs(h_min(rho, sigma).bits -
                                   h_min(rho_u, sigma_u).bits));
  worst = std::max(worst, std::abs(h_max(rho, sigma).bits -
                                   h_max(rho_u, sigma_u).bits));
  return worst - 1e-8;
}

double check_trivial_b_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const BipartiteState as_bipartite(rho, dim, 1);
  const QuantumState sigma_b = maximally_mixed(1);
  const double dmin =
      std::abs(h_min(as_bipartite, sigma_b).bits - h_min_unconditional(rho).bits);
  const double dmax =
      std::abs(h_max(as_bipartite, sigma_b).bits - h_max_unconditional(rho).bits);
  return std::max(dmin, dmax) - 1e-9;
}

double check_witness_validity_trial(std::uint64_t s, long t) {
  const int dim = pick_dim(s, 2, 6);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const double eps = (t % 2 == 0) ? 0.05 : 0.1;
  double worst = -1.0;
  {
    const SmoothingResult r = smooth_hmin_unconditional(rho, eps);
    worst = std::max(worst, r.distance - eps);
    worst = std::max(worst, r.witness->trace() - rho.trace());
    worst = std::max(worst,
                     std::abs(h_min_unconditional(*r.witness).bits - r.value.bits));
    worst = std::max(worst, h_min_unconditional(rho).bits - r.value.bits);
  }
  {
    const SmoothingResult r = smooth_hmax_unconditional(rho, eps);
    worst = std::max(worst, r.distance - eps);
    worst = std::max(worst, r.witness->trace() - rho.trace());
    worst = std::max(worst,
                     std::abs(h_max_unconditional(*r.witness).bits - r.value.bits));
    worst = std::max(worst, r.value.bits - h_max_unconditional(rho).bits);
  }
  return worst - 1e-9;
}

double check_monotone_eps_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 6);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const double grid[] = {0.02, 0.05, 0.1, 0.2};
  double worst = -1.0;
  double prev_min = -1e300, prev_max = 1e300;
  for (double eps : grid) {
    const double vmin = smooth_hmin_unconditional(rho, eps).value.bits;
    const double vmax = smooth_hmax_unconditional(rho, eps).value.bits;
    worst = std::max(worst, prev_min - vmin);
    worst = std::max(worst, vmax - prev_max);
    prev_min = vmin;
    prev_max = vmax;
  }
  return worst - 1e-9;
}

double check_additive_lemma_trial(std::uint64_t s, long) {
  const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, 2);
  const QuantumState sigma_b = partial_trace(rho, Subsystem::B);
  const double hmin = h_min(rho, sigma_b).bits;
  const double lambda = hmin + uniform01(derive_seed(s, 2, 0));

  const Matrix alpha =
      std::exp2(-lambda) * kron(identity_matrix(2), sigma_b.matrix());
  const HermitianOperator delta(positive_part(rho.matrix() - alpha));
  const SmoothingResult r = additive_lemma_smooth(rho, sigma_b, lambda, delta);

  // Re-derive the proof-internal contraction bound.
  const Matrix beta = alpha + delta.entries();
  const Matrix t_op = sqrt_psd(alpha) * pinv_sqrt_psd(beta);
  const double t_top =
      hermitian_eigenvalues((t_op + t_op.adjoint()) / 2.0).maxCoeff();

  double worst = (lambda - r.value.bits) - 1e-6;
  worst = std::max(worst,
                   r.distance - std::sqrt(8.0 * delta.trace()) - 1e-8);
  worst = std::max(worst, (t_top - 1.0) - 1e-9);
  return worst;
}

double check_projector_lemma_trial(std::uint64_t s, long) {
  const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, 2);
  const QuantumState sigma_b = partial_trace(rho, Subsystem::B);
  const double hmin = h_min(rho, sigma_b).bits;
  double worst = -1.0;
  double prev_eps = -1.0;
  for (int k = 0; k <= 4; ++k) {
    const double lambda = hmin + 0.5 * static_cast<double>(k);
    const SmoothingResult r = projector_lemma_smooth(rho, sigma_b, lambda);
    worst = std::max(worst, (lambda - r.value.bits) - 1e-6);
    worst = std::max(worst, (r.distance - r.epsilon) - 1e-8);
    worst = std::max(worst, (prev_eps - r.epsilon) - 1e-9);  // monotone in lambda
    prev_eps = r.epsilon;
  }
  return worst;
}

double check_projection_bounds_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const double gamma =
      unit_interval(derive_seed(s, 2, 0), 0.0, std::log2(dim) + 1.0);
  double worst = -1.0;
  {
    const ProjectionSmoothing low = projection_smooth_low(rho, gamma);
    const double norm_inf =
        hermitian_eigenvalues(low.rho_tilde.matrix()).maxCoeff();
    worst = std::max(worst, norm_inf - std::exp2(-gamma));
    worst = std::max(worst,
                     trace_distance(low.rho_tilde, rho) -
                         2.0 * std::sqrt(std::max(low.delta, 0.0)) - 1e-9);
  }
  {
    const ProjectionSmoothing high = projection_smooth_high(rho, gamma);
    const RVector vals = hermitian_eigenvalues(high.rho_tilde.matrix());
    const double top = vals.maxCoeff();
    long rank = 0;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals(i) > 1e-10 * std::max(top, 1e-300)) ++rank;
    worst = std::max(worst,
                     static_cast<double>(rank) - std::exp2(gamma) - 1e-9);
    worst = std::max(worst,
                     trace_distance(high.rho_tilde, rho) -
                         2.0 * std::sqrt(std::max(high.delta, 0.0)) - 1e-9);
  }
  return worst;
}

double check_oracle_sandwich_trial(std::uint64_t s, long t) {
  const double eps = 0.1;
  if (t % 2 == 0) {
    const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, 2);
    const QuantumState sigma_b = partial_trace(rho, Subsystem::B);
    const SmoothingResult lower =
        smooth_hmin_conditional_lower(rho, sigma_b, eps);
    OracleOptions opt;
    opt.seed = derive_seed(s, 2, 0);
    const SmoothingResult oracle =
        smooth_hmin_conditional_oracle(rho, sigma_b, eps, opt);
    return (lower.value.bits - oracle.value.bits) - 1e-3;
  }
  // Trivial B: the oracle must land on the exact classical value.
  const int dim = pick_dim(s, 2, 4);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const BipartiteState as_bipartite(rho, dim, 1);
  OracleOptions opt;
  opt.seed = derive_seed(s, 2, 0);
  const SmoothingResult oracle = smooth_hmin_conditional_oracle(
      as_bipartite, maximally_mixed(1), eps, opt);
  const SmoothingResult exact = smooth_hmin_unconditional(rho, eps);
  return std::abs(oracle.value.bits - exact.value.bits) - 1e-3;
}

double check_oracle_diag_trial(std::uint64_t s, long t) {
  const int dim = pick_dim(s, 2, 4);
  const double eps = (t % 2 == 0) ? 0.05 : 0.1;
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const SmoothingResult exact = smooth_hmin_unconditional(rho, eps);
  OracleOptions opt;
  opt.seed = derive_seed(s, 2, 0);
  const SmoothingResult oracle = smooth_hmin_conditional_oracle(
      BipartiteState(rho, dim, 1), maximally_mixed(1), eps, opt);
  return std::abs(exact.value.bits - oracle.value.bits) - 1e-3;
}

double check_dense_fastpath_trial(std::uint64_t s, long) {
  const double p = unit_interval(derive_seed(s, 1, 0), 0.55, 0.95);
  const std::vector<double> base{p, 1.0 - p};
  const double eps = unit_interval(derive_seed(s, 2, 0), 0.03, 0.12);
  Matrix rho1(2, 2);
  rho1 << p, 0, 0, 1.0 - p;
  double worst = -1.0;
  for (int n = 1; n <= 6; ++n) {
    const QuantumState dense(HermitianOperator(tensor_power(rho1, n)));
    const WeightedSpectrum spec = iid_spectrum(base, n);
    worst = std::max(worst,
                     std::abs(smooth_hmin_unconditional(dense, eps).value.bits -
                              smooth_hmin_classical(spec, eps).value.bits));
    worst = std::max(worst,
                     std::abs(smooth_hmax_unconditional(dense, eps).value.bits -
                              smooth_hmax_classical(spec, eps).value.bits));
    for (double gamma : {0.3, 0.7, 1.3}) {
      const double dense_trace = div_trace_alt(
          dense, hermitian_identity(dense.dim()),
          -static_cast<double>(n) * gamma);
      worst = std::max(worst,
                       std::abs(dense_trace -
                                spectral_trace_gamma(spec, gamma, n)));
    }
  }
  return worst - 1e-9;
}

double check_iid_mass_trial(std::uint64_t s, long t) {
  const int d = 2 + static_cast<int>(t % 2);
  std::vector<double> base(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    base[i] = 0.1 + uniform01(derive_seed(s, 10 + i, 0));
    sum += base[i];
  }
  for (double& b : base) b /= sum;
  const long ns[] = {50, 200, 1000};
  double worst = -1.0;
  for (long n : ns)
    worst = std::max(worst,
                     std::abs(iid_spectrum(base, n).total_mass() - 1.0));
  return worst - 1e-9;
}

double check_rate_trend_trial(std::uint64_t, long) {
  const std::vector<double> base{0.75, 0.25};
  const double svn = shannon_entropy_bits(base);
  const std::vector<long> ns{100, 1000, 10000};
  const std::vector<double> eps{0.01};
  const std::vector<RateScanRow> rows = rate_scan(base, ns, eps);
  double worst = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(svn - rows[i].hmin_rate) -
                                std::abs(svn - rows[i - 1].hmin_rate));
    worst = std::max(worst, std::abs(svn - rows[i].hmax_rate) -
                                std::abs(svn - rows[i - 1].hmax_rate));
  }
  worst = std::max(worst, std::abs(rows.back().hmin_rate - svn) - 0.05);
  worst = std::max(worst, std::abs(rows.back().hmax_rate - svn) - 0.05);
  return worst;
}

double check_monotone_grids_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 6);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const HermitianOperator omega = random_psd(derive_seed(s, 2, 0), dim);
  double worst = -1.0;
  double prev = 2.0;
  for (double a = -2.0; a <= 2.0; a += 0.25) {
    const double v = div_trace_alt(rho, omega, a);
    worst = std::max(worst, v - prev);  // non-increasing in alpha
    prev = v;
  }
  const std::vector<double> base{0.7, 0.2, 0.1};
  const WeightedSpectrum spec = iid_spectrum(base, 5);
  prev = -1.0;
  for (double g = 0.0; g <= 3.0; g += 0.2) {
    const double v = spectral_trace_gamma(spec, g, 5);
    worst = std::max(worst, prev - v);  // non-decreasing in gamma
    prev = v;
  }
  const BipartiteState rho_ab = random_bipartite(derive_seed(s, 3, 0), 2, 2);
  prev = -1.0;
  for (double g = -2.0; g <= 3.0; g += 0.25) {
    const double v = conditional_trace(rho_ab, g);
    worst = std::max(worst, prev - v);
    prev = v;
  }
  return worst - 1e-9;
}

double check_proposition_chain_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 6);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const HermitianOperator omega = random_psd(derive_seed(s, 2, 0), dim);
  const double gamma = unit_interval(derive_seed(s, 3, 0), -2.0, 1.0);
  const double alpha =
      gamma + unit_interval(derive_seed(s, 4, 0), 0.0, 2.0);
  const PropositionChainValues v =
      proposition_chain_check(rho, omega, alpha, gamma);
  return v.lhs - v.bound - 1e-9;
}

double check_definition_equivalence_trial(std::uint64_t, long) {
  const std::vector<double> base{0.75, 0.25};
  std::vector<double> grid;
  for (double g = 0.30; g <= 1.3000001; g += 0.01) grid.push_back(g);
  const std::vector<long> ns{1000};
  const RateProfile alt =
      rate_profile(iid_family_alt(base), ns, grid, 0.01, 0.99);
  const RateProfile primary =
      rate_profile(iid_family_primary(base), ns, grid, 0.01, 0.99);
  const double step = 0.01;
  double worst =
      std::abs(alt.lower_bracket - primary.lower_bracket) - step - 1e-9;
  worst = std::max(
      worst, std::abs(alt.upper_bracket - primary.upper_bracket) - step - 1e-9);
  return worst;
}

double check_compress_bound_trial(std::uint64_t, long) {
  const std::vector<double> base{0.75, 0.25};
  auto top_mass = [&](long n) {
    const std::uint64_t budget =
        static_cast<std::uint64_t>(std::floor(std::exp2(0.6 * n)));
    return best_projector_trace(iid_spectrum(base, n), budget);
  };
  const double at10 = top_mass(10);
  const double at20 = top_mass(20);
  double worst = at20 - 0.9;
  worst = std::max(worst, at20 - at10);  // must decrease with n
  return worst;
}

double check_upsilon_zero_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 6);
  const QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  const double top = hermitian_eigenvalues(rho.matrix()).maxCoeff();
  const double alpha = -std::log2(top) - 0.1;  // threshold above ||rho||_inf
  double worst = upsilon_trace(rho.op(), alpha) - 1e-12;
  const double alpha_low = -std::log2(top) + 0.5;
  worst = std::max(worst, -upsilon_trace(rho.op(), alpha_low));  // now positive
  return worst;
}

double check_purify_trial(std::uint64_t s, long t) {
  const int dim = pick_dim(s, 2, 6);
  QuantumState rho = random_density(derive_seed(s, 1, 0), dim);
  if (t % 3 == 2) rho = subnormalized(rho, 0.8);
  const CVector psi = purify(rho);
  const Matrix full = psi * psi.adjoint();
  const Matrix reduced = partial_trace(full, dim, dim, Subsystem::A);
  double worst = (reduced - rho.matrix()).cwiseAbs().maxCoeff();
  worst = std::max(worst, std::abs(psi.squaredNorm() - rho.trace()));
  return worst - 1e-9;
}

double check_spectral_reconstruction_trial(std::uint64_t s, long) {
  const int dim = pick_dim(s, 2, 8);
  const HermitianOperator a = random_hermitian(derive_seed(s, 1, 0), dim);
  const std::vector<EigenPair> pairs = spectral_decompose(a);
  Matrix rebuilt = Matrix::Zero(dim, dim);
  double ortho = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    rebuilt.noalias() +=
        pairs[i].value * (pairs[i].vector * pairs[i].vector.adjoint());
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const double overlap = std::abs(pairs[i].vector.dot(pairs[j].vector));
      ortho = std::max(ortho, std::abs(overlap - (i == j ? 1.0 : 0.0)));
    }
    if (i + 1 < pairs.size() && pairs[i].value < pairs[i + 1].value)
      return 1.0;  // descending order broken
  }
  const double rebuild_dev = (rebuilt - a.entries()).cwiseAbs().maxCoeff();
  return std::max(rebuild_dev, ortho) - 1e-9;
}

double check_vn_bracketing_trial(std::uint64_t, long) {
  const std::vector<double> base{0.75, 0.25};
  const double svn = shannon_entropy_bits(base);
  std::vector<double> grid;
  for (double g = svn - 0.3; g <= svn + 0.3000001; g += 0.01) grid.push_back(g);
  const std::vector<long> ns{10000};
  const RateProfile profile =
      rate_profile(iid_family_alt(base), ns, grid, 0.01, 0.99);
  double worst = profile.lower_bracket - 0.05 - svn;
  worst = std::max(worst, svn - (profile.upper_bracket + 0.05));
  worst = std::max(worst, profile.lower_bracket - profile.upper_bracket);
  return worst;
}

const CheckSpec kChecks[] = {
    {"lemma1_upper_lower", cap_full, check_lemma1_trial},
    {"lemma2_state", cap_full, check_lemma2_trial},
    {"lemma2_conditional", cap_full, check_lemma2_conditional_trial},
    {"corollary1", cap_full, check_corollary1_trial},
    {"fidelity_chain", cap_full, check_fidelity_chain_trial},
    {"gentle_measurement", cap_full, check_gentle_trial},
    {"projector_algebra", cap_full, check_projector_algebra_trial},
    {"trace_distance_metric", cap_full, check_metric_trial},
    {"entropy_order_chain", cap_full, check_entropy_chain_trial},
    {"entropy_unitary_invariance", cap_full, check_unitary_invariance_trial},
    {"conditional_trivial_b", cap_full, check_trivial_b_trial},
    {"smoothing_witness_validity", cap_500, check_witness_validity_trial},
    {"smoothing_monotone_eps", cap_100, check_monotone_eps_trial},
    {"additive_lemma_contract", cap_500, check_additive_lemma_trial},
    {"projector_lemma_contract", cap_500, check_projector_lemma_trial},
    {"projection_bounds", cap_500, check_projection_bounds_trial},
    {"oracle_sandwich", cap_oracle, check_oracle_sandwich_trial},
    {"oracle_diag_reduction", cap_oracle, check_oracle_diag_trial},
    {"dense_fastpath_agreement", cap_25, check_dense_fastpath_trial},
    {"iid_mass_conservation", cap_100, check_iid_mass_trial},
    {"iid_rate_trend", cap_once, check_rate_trend_trial},
    {"monotone_grids", cap_100, check_monotone_grids_trial},
    {"proposition_chain", cap_500, check_proposition_chain_trial},
    {"definition_equivalence", cap_once, check_definition_equivalence_trial},
    {"compress_bound", cap_once, check_compress_bound_trial},
    {"upsilon_zero", cap_100, check_upsilon_zero_trial},
    {"purify_reconstruction", cap_100, check_purify_trial},
    {"spectral_reconstruction", cap_100, check_spectral_reconstruction_trial},
    {"vn_bracketing", cap_once, check_vn_bracketing_trial},
};

}  // namespace

namespace {

CheckResult run_check_rows(const CheckSpec& check, std::uint64_t check_index,
                           std::uint64_t seed, long trials, double shift) {
  CheckResult row;
  row.name = check.name;
  row.trials = trials;
  row.worst_slack = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(seed, check_index, static_cast<std::uint64_t>(t));
    double slack;
    try {
      slack = check.run(trial_seed, t);
    } catch (const Error&) {
      slack = std::numeric_limits<double>::infinity();
    }
    row.worst_slack = std::max(row.worst_slack, slack);
    if (slack > shift) ++row.failures;
  }
  return row;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  if (options.trials < 1)
    fail(ErrorCode::PreconditionViolated, "trials must be >= 1");
  const double shift = options.corrupt_tolerance ? -1e9 : 0.0;
  std::vector<CheckResult> results;
  std::uint64_t check_index = 0;
  for (const CheckSpec& check : kChecks) {
    results.push_back(run_check_rows(check, check_index, options.seed,
                                     check.cap(options.trials), shift));
    ++check_index;
  }
  return results;
}

CheckResult run_named_check(const std::string& name, std::uint64_t seed,
                            long trials) {
  std::uint64_t check_index = 0;
  for (const CheckSpec& check : kChecks) {
    if (name == check.name)
      return run_check_rows(check, check_index, seed, trials, 0.0);
    ++check_index;
  }
  fail(ErrorCode::BadSpec, "unknown check '" + name + "'");
}

long total_failures(const std::vector<CheckResult>& results) {
  long total = 0;
  for (const CheckResult& row : results) total += row.failures;
  return total;
}

}  // namespace qsmooth
