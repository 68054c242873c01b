#include "qsmooth/weighted_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsmooth/smoothing.hpp"

namespace qsmooth {

namespace {

constexpr double kLog2RelMerge = 1.4427e-12;  // log2(1 + 1e-12)
constexpr std::size_t kMaxClasses = 10'000'000;

// log2(2^a + 2^b) without leaving the log domain.
double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

double kahan_total(const std::vector<double>& terms) {
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double y = t - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace

WeightedSpectrum WeightedSpectrum::from_probabilities(
    std::span<const double> probabilities, const Tolerances& tol) {
  std::vector<Atom> atoms;
  for (double p : probabilities) {
    if (p < -tol.entry)
      fail(ErrorCode::NotPositive, "spectrum entries must be nonnegative");
    if (p > 0.0) atoms.push_back({std::log2(p), 0.0});
  }
  return from_atoms(std::move(atoms), false);
}

WeightedSpectrum WeightedSpectrum::from_atoms(std::vector<Atom> atoms,
                                              bool log_domain) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.log2_value > b.log2_value;
  });
  std::vector<Atom> merged;
  for (const Atom& atom : atoms) {
    if (!merged.empty() &&
        merged.back().log2_value - atom.log2_value <= kLog2RelMerge) {
      merged.back().log2_multiplicity =
          log2_add(merged.back().log2_multiplicity, atom.log2_multiplicity);
    } else {
      merged.push_back(atom);
    }
  }
  WeightedSpectrum spec;
  spec.atoms_ = std::move(merged);
  spec.log_domain_ = log_domain;
  return spec;
}

double WeightedSpectrum::value(std::size_t i) const {
  return std::exp2(atoms_[i].log2_value);
}

double WeightedSpectrum::multiplicity(std::size_t i) const {
  return std::exp2(atoms_[i].log2_multiplicity);
}

double WeightedSpectrum::mass(std::size_t i) const {
  return std::exp2(atoms_[i].log2_value + atoms_[i].log2_multiplicity);
}

double WeightedSpectrum::total_mass() const {
  std::vector<double> terms;
  terms.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) terms.push_back(mass(i));
  return kahan_total(terms);
}

double WeightedSpectrum::log2_support_count() const {
  double acc = -std::numeric_limits<double>::infinity();
  for (const Atom& atom : atoms_) acc = log2_add(acc, atom.log2_multiplicity);
  return acc;
}

double WeightedSpectrum::max_log2_value() const {
  return atoms_.empty() ? -std::numeric_limits<double>::infinity()
                        : atoms_.front().log2_value;
}

double WeightedSpectrum::min_log2_value() const {
  return atoms_.empty() ? -std::numeric_limits<double>::infinity()
                        : atoms_.back().log2_value;
}

double log2_multinomial(long n, std::span<const long> counts) {
  double bits = std::lgamma(static_cast<double>(n) + 1.0);
  long total = 0;
  for (long k : counts) {
    bits -= std::lgamma(static_cast<double>(k) + 1.0);
    total += k;
  }
  if (total != n)
    fail(ErrorCode::PreconditionViolated, "counts must sum to n");
  return bits / std::log(2.0);
}

std::optional<unsigned __int128> multinomial_exact(
    long n, std::span<const long> counts) {
  unsigned __int128 result = 1;
  long remaining = n;
  for (long k : counts) {
    // result *= C(remaining, k), built up factor by factor; each partial
    // product of a binomial prefix is itself a binomial, so the divisions
    // stay exact.
    long kk = std::min(k, remaining - k);
    if (kk < 0) return std::nullopt;
    unsigned __int128 binom = 1;
    for (long i = 1; i <= kk; ++i) {
      const unsigned __int128 factor =
          static_cast<unsigned __int128>(remaining - kk + i);
      const unsigned __int128 next = binom * factor;
      if (next / factor != binom) return std::nullopt;  // overflow
      binom = next / static_cast<unsigned __int128>(i);
    }
    const unsigned __int128 next = result * binom;
    if (binom != 0 && next / binom != result) return std::nullopt;
    result = next;
    remaining -= k;
  }
  return result;
}

WeightedSpectrum iid_spectrum(std::span<const double> base_eigenvalues,
                              long n, const Tolerances& tol) {
  if (n < 1) fail(ErrorCode::PreconditionViolated, "n must be >= 1");
  double sum = 0.0;
  for (double p : base_eigenvalues) {
    if (p < -tol.entry)
      fail(ErrorCode::NotPositive, "base eigenvalues must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol.entry)
    fail(ErrorCode::NotNormalized, "base eigenvalues must sum to 1");

  // Distinct base values with their copy counts.
  std::vector<double> sorted(base_eigenvalues.begin(), base_eigenvalues.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> values;
  std::vector<long> copies;
  for (double p : sorted) {
    if (p <= 0.0) continue;
    if (!values.empty() && values.back() - p <= 1e-12 * values.back()) {
      ++copies.back();
    } else {
      values.push_back(p);
      copies.push_back(1);
    }
  }
  const std::size_t m = values.size();
  if (m == 0) fail(ErrorCode::NotPositive, "no positive base eigenvalues");

  // Number of compositions of n into m parts: C(n + m - 1, m - 1).
  double class_count = 1.0;
  for (std::size_t j = 1; j < m; ++j)
    class_count *= static_cast<double>(n + j) / static_cast<double>(j);
  if (class_count > static_cast<double>(kMaxClasses)) {
    std::ostringstream msg;
    msg << "about " << class_count << " type classes exceed the budget";
    fail(ErrorCode::TooManyClasses, msg.str());
  }

  std::vector<double> log2_values(m), log2_copies(m);
  for (std::size_t j = 0; j < m; ++j) {
    log2_values[j] = std::log2(values[j]);
    log2_copies[j] = std::log2(static_cast<double>(copies[j]));
  }

  std::vector<WeightedSpectrum::Atom> atoms;
  std::vector<long> occupation(m, 0);
  // Lexicographic recursion over occupation counts (k_1 .. k_m), sum = n.
  auto enumerate = [&](auto&& self, std::size_t j, long left) -> void {
    if (j + 1 == m) {
      occupation[j] = left;
      double log2_value = 0.0;
      double log2_mult = log2_multinomial(n, occupation);
      for (std::size_t t = 0; t < m; ++t) {
        log2_value += static_cast<double>(occupation[t]) * log2_values[t];
        log2_mult += static_cast<double>(occupation[t]) * log2_copies[t];
      }
      atoms.push_back({log2_value, log2_mult});
      return;
    }
    for (long k = 0; k <= left; ++k) {
      occupation[j] = k;
      self(self, j + 1, left - k);
    }
  };
  enumerate(enumerate, 0, n);

  return WeightedSpectrum::from_atoms(std::move(atoms), n > 100);
}

double spectral_trace_gamma(const WeightedSpectrum& spec, double gamma,
                            long n) {
  const double log2_threshold = -static_cast<double>(n) * gamma;
  std::vector<double> terms;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.atoms()[i].log2_value >= log2_threshold - 1e-9)
      terms.push_back(spec.mass(i));
    else
      break;  // atoms are sorted descending
  }
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double y = t - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

double spectral_diff_trace_gamma(const WeightedSpectrum& spec, double gamma,
                                 long n) {
  const double log2_threshold = -static_cast<double>(n) * gamma;
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const WeightedSpectrum::Atom& atom = spec.atoms()[i];
    if (atom.log2_value < log2_threshold - 1e-9) break;
    const double term =
        spec.mass(i) -
        std::exp2(atom.log2_multiplicity + log2_threshold);
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return std::max(sum, 0.0);
}

std::vector<RateScanRow> rate_scan(std::span<const double> base_eigenvalues,
                                   std::span<const long> n_list,
                                   std::span<const double> epsilon_list,
                                   const Tolerances& tol) {
  std::vector<RateScanRow> rows;
  for (long n : n_list) {
    const WeightedSpectrum spec = iid_spectrum(base_eigenvalues, n, tol);
    for (double eps : epsilon_list) {
      RateScanRow row;
      row.n = n;
      row.epsilon = eps;
      row.hmin_rate =
          smooth_hmin_classical(spec, eps, tol).value.bits / static_cast<double>(n);
      row.hmax_rate =
          smooth_hmax_classical(spec, eps, tol).value.bits / static_cast<double>(n);
      rows.push_back(row);
    }
  }
  return rows;
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double bits = 0.0;
  for (double p : probabilities)
    if (p > 0.0) bits -= p * std::log2(p);
  return bits;
}

}  // namespace qsmooth
