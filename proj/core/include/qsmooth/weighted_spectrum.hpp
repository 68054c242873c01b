#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsmooth/operators.hpp"

namespace qsmooth {

// Multiset of (eigenvalue, multiplicity) pairs stored in base-2 logs so that
// spectra of n-fold product states stay representable at n in the thousands
// (0.5^1100 already underflows a double; binomial counts overflow near
// n = 1030). Atoms are sorted by value descending and merged when equal
// within a relative 1e-12. Also represents plain classical distributions
// (all multiplicities 1). Zero-probability atoms are dropped; support counts
// refer to the stored atoms only.
class WeightedSpectrum {
 public:
  struct Atom {
    double log2_value;
    double log2_multiplicity;
  };

  WeightedSpectrum() = default;

  // Probabilities / eigenvalues with multiplicity 1 each; entries <= the
  // zero cutoff are dropped, equal values merge into one atom.
  static WeightedSpectrum from_probabilities(
      std::span<const double> probabilities,
      const Tolerances& tol = default_tolerances());

  static WeightedSpectrum from_atoms(std::vector<Atom> atoms, bool log_domain);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool log_domain() const { return log_domain_; }

  double value(std::size_t i) const;         // may underflow to 0 in log domain
  double multiplicity(std::size_t i) const;  // may overflow to inf in log domain
  double mass(std::size_t i) const;          // multiplicity * value, always sane

  double total_mass() const;          // compensated sum of atom masses
  double log2_support_count() const;  // log2 of the summed multiplicities
  double max_log2_value() const;
  double min_log2_value() const;

 private:
  std::vector<Atom> atoms_;  // sorted by log2_value descending
  bool log_domain_ = false;
};

// Exact spectrum of rho^{(x) n} given the base eigenvalues, via type classes
// keyed by occupation counts of the distinct base eigenvalues. Multiplicity
// of the class (k_1..k_m) is multinomial(n; k) * prod_j c_j^{k_j} with c_j
// the number of base eigenvalues equal to v_j.
WeightedSpectrum iid_spectrum(std::span<const double> base_eigenvalues,
                              long n,
                              const Tolerances& tol = default_tolerances());

// Tr[{rho_n >= 2^{-n gamma} I} rho_n]: the mass of atoms at or above the
// threshold. Non-decreasing in gamma.
double spectral_trace_gamma(const WeightedSpectrum& spec, double gamma,
                            long n);

// Tr[{rho_n >= 2^{-n gamma} I} (rho_n - 2^{-n gamma} I)]: the positive-part
// trace of the shifted spectrum. Non-decreasing in gamma.
double spectral_diff_trace_gamma(const WeightedSpectrum& spec, double gamma,
                                 long n);

// Exact multinomial coefficient n! / prod k_j! while it fits 128 bits;
// cross-check for the log-gamma path.
std::optional<unsigned __int128> multinomial_exact(
    long n, std::span<const long> counts);

double log2_multinomial(long n, std::span<const long> counts);

struct RateScanRow {
  long n;
  double epsilon;
  double hmin_rate;  // smooth H_min(rho^{(x)n}) / n, bits
  double hmax_rate;  // smooth H_max(rho^{(x)n}) / n, bits
};

// Smooth-entropy rates of the i.i.d. family over an (n, epsilon) grid.
std::vector<RateScanRow> rate_scan(std::span<const double> base_eigenvalues,
                                   std::span<const long> n_list,
                                   std::span<const double> epsilon_list,
                                   const Tolerances& tol = default_tolerances());

// Shannon entropy of a probability vector in bits.
double shannon_entropy_bits(std::span<const double> probabilities);

}  // namespace qsmooth
