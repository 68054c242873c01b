// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one pass/fail line each. Exit code 0 iff all pass.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsmooth/entropy.hpp"
#include "qsmooth/operators.hpp"
#include "qsmooth/random_states.hpp"
#include "qsmooth/smoothing.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/spectrum_rates.hpp"
#include "qsmooth/state_spec.hpp"
#include "qsmooth/verify.hpp"
#include "qsmooth/weighted_spectrum.hpp"

using namespace qsmooth;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail << '\n';
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// A1/A2: i.i.d. (0.75, 0.25), eps = 0.01; rates within 0.05 of the binary
// entropy at n = 10^4 and monotonically closer over the decade scan.
void criterion_a1_a2() {
  const std::vector<double> base{0.75, 0.25};
  const double target = shannon_entropy_bits(base);  // 0.811278
  const std::vector<long> ns{100, 1000, 10000};
  const std::vector<double> eps{0.01};

  Timer t1;
  std::vector<double> hmin_rates;
  for (long n : ns)
    hmin_rates.push_back(
        smooth_hmin_classical(iid_spectrum(base, n), 0.01).value.bits / n);
  const double hmin_elapsed = t1.seconds();

  bool a1 = std::abs(hmin_rates.back() - target) <= 0.05;
  for (std::size_t i = 1; i < hmin_rates.size(); ++i)
    a1 = a1 && (std::abs(hmin_rates[i] - target) <
                std::abs(hmin_rates[i - 1] - target));
  a1 = a1 && hmin_elapsed <= 5.0;
  report("A1", a1,
         "hmin_rate(1e4) = " + fmt(hmin_rates.back()) + ", target " +
             fmt(target) + ", monotone over n = 1e2,1e3,1e4, elapsed " +
             fmt(hmin_elapsed) + "s (cap 5s)");

  Timer t2;
  std::vector<double> hmax_rates;
  for (long n : ns)
    hmax_rates.push_back(
        smooth_hmax_classical(iid_spectrum(base, n), 0.01).value.bits / n);
  const double hmax_elapsed = t2.seconds();

  bool a2 = std::abs(hmax_rates.back() - target) <= 0.05;
  for (std::size_t i = 1; i < hmax_rates.size(); ++i)
    a2 = a2 && (std::abs(hmax_rates[i] - target) <
                std::abs(hmax_rates[i - 1] - target));
  a2 = a2 && hmax_elapsed <= 5.0;
  report("A2", a2,
         "hmax_rate(1e4) = " + fmt(hmax_rates.back()) + ", target " +
             fmt(target) + ", mirrored monotone trend, elapsed " +
             fmt(hmax_elapsed) + "s (cap 5s)");
}

// A3: dense rho^{(x)n} path and the WeightedSpectrum path agree to 1e-9
// for n <= 6, d = 2.
void criterion_a3() {
  double worst = 0.0;
  for (double p : {0.6, 0.75, 0.9}) {
    const std::vector<double> base{p, 1.0 - p};
    Matrix rho1 = Matrix::Zero(2, 2);
    rho1(0, 0) = p;
    rho1(1, 1) = 1.0 - p;
    Matrix power = rho1;
    for (int n = 1; n <= 6; ++n) {
      const QuantumState dense{HermitianOperator(power)};
      const WeightedSpectrum spec = iid_spectrum(base, n);
      for (double eps : {0.01, 0.1}) {
        worst = std::max(
            worst, std::abs(smooth_hmin_unconditional(dense, eps).value.bits -
                            smooth_hmin_classical(spec, eps).value.bits));
        worst = std::max(
            worst, std::abs(smooth_hmax_unconditional(dense, eps).value.bits -
                            smooth_hmax_classical(spec, eps).value.bits));
      }
      for (double gamma : {0.3, 0.7, 1.3}) {
        const double dense_trace =
            div_trace_alt(dense, hermitian_identity(dense.dim()),
                          -static_cast<double>(n) * gamma);
        worst = std::max(worst, std::abs(dense_trace -
                                         spectral_trace_gamma(spec, gamma, n)));
      }
      if (n < 6) power = kron(power, rho1);
    }
  }
  report("A3", worst <= 1e-9,
         "dense vs fast-path worst deviation " + fmt(worst) + " (cap 1e-9)");
}

// A4: the lemma battery, 1000 seeded trials per check at dim <= 8.
void criterion_a4() {
  Timer timer;
  const std::array<const char*, 6> names{
      "lemma1_upper_lower", "lemma2_state",       "lemma2_conditional",
      "corollary1",         "fidelity_chain", "gentle_measurement"};
  long failures = 0;
  std::string detail;
  for (const char* name : names) {
    const CheckResult row = run_named_check(name, 42, 1000);
    failures += row.failures;
    detail += std::string(name) + "=" + std::to_string(row.failures) + " ";
  }
  const double elapsed = timer.seconds();
  report("A4", failures == 0 && elapsed <= 60.0,
         "failures: " + detail + "elapsed " + fmt(elapsed) + "s (cap 60s)");
}

// A5: conditional smoothing lemma contracts, 500 seeded 2x2 trials.
void criterion_a5() {
  const CheckResult additive = run_named_check("additive_lemma_contract", 42, 500);
  const CheckResult projector =
      run_named_check("projector_lemma_contract", 42, 500);
  report("A5", additive.failures == 0 && projector.failures == 0,
         "additive failures " + std::to_string(additive.failures) +
             ", projector failures " + std::to_string(projector.failures) +
             ", worst slacks " + fmt(additive.worst_slack) + " / " +
             fmt(projector.worst_slack));
}

// A6: oracle sandwich on 200 conditional instances plus 200 trivial-B
// classical matches (the check alternates between the two).
void criterion_a6() {
  const CheckResult row = run_named_check("oracle_sandwich", 42, 400);
  report("A6", row.failures == 0,
         "failures " + std::to_string(row.failures) + " over " +
             std::to_string(row.trials) + " trials, worst slack " +
             fmt(row.worst_slack));
}

// A7: projection-smoothing norm/rank bounds, 500 random instances plus all
// dense i.i.d. instances n <= 6.
void criterion_a7() {
  const CheckResult row = run_named_check("projection_bounds", 42, 500);
  bool dense_ok = true;
  Matrix rho1 = Matrix::Zero(2, 2);
  rho1(0, 0) = 0.75;
  rho1(1, 1) = 0.25;
  Matrix power = rho1;
  for (int n = 1; n <= 6; ++n) {
    const QuantumState rho{HermitianOperator(power)};
    for (double rate : {0.2, 0.5, 0.8, 1.0}) {
      const double gamma = rate * n;
      const ProjectionSmoothing low = projection_smooth_low(rho, gamma);
      const ProjectionSmoothing high = projection_smooth_high(rho, gamma);
      const auto low_pairs = spectral_decompose(low.rho_tilde.op());
      dense_ok = dense_ok && low_pairs.front().value < std::exp2(-gamma);
      long rank = 0;
      for (const auto& pair : spectral_decompose(high.rho_tilde.op()))
        if (pair.value > 1e-10 * std::max(high.rho_tilde.trace(), 1e-300))
          ++rank;
      dense_ok = dense_ok && static_cast<double>(rank) <= std::exp2(gamma) + 1e-9;
    }
    if (n < 6) power = kron(power, rho1);
  }
  report("A7", row.failures == 0 && dense_ok,
         "random failures " + std::to_string(row.failures) +
             ", dense i.i.d. bounds " + (dense_ok ? "hold" : "violated"));
}

// A8: bracket agreement of the two divergence functionals at n = 10^3 on a
// 0.01-bit grid, plus 500 random proposition-chain trials.
void criterion_a8() {
  const CheckResult equivalence = run_named_check("definition_equivalence", 42, 1);
  const CheckResult chain = run_named_check("proposition_chain", 42, 500);
  report("A8", equivalence.failures == 0 && chain.failures == 0,
         "bracket check failures " + std::to_string(equivalence.failures) +
             ", chain failures " + std::to_string(chain.failures));
}

// A9: compress bound at R = 0.6 < S for n = 10, 20.
void criterion_a9() {
  const std::vector<double> base{0.75, 0.25};
  const double at10 = best_projector_trace(
      iid_spectrum(base, 10),
      static_cast<std::uint64_t>(std::floor(std::exp2(6.0))));
  const double at20 = best_projector_trace(
      iid_spectrum(base, 20),
      static_cast<std::uint64_t>(std::floor(std::exp2(12.0))));
  report("A9", at20 <= 0.9 && at20 < at10,
         "top-mass(n=10) = " + fmt(at10) + ", top-mass(n=20) = " + fmt(at20) +
             " (cap 0.9, decreasing)");
}

// A10: `verify --seed 42 --trials 1000 --no-timestamp` twice: byte-identical
// CSV, exit code 0.
void criterion_a10() {
  const char* cli = std::getenv("QSMOOTH_CLI");
  if (cli == nullptr) {
    report("A10", false, "QSMOOTH_CLI not set");
    return;
  }
  auto run_once = [&](std::string& out) {
    const std::string command = std::string(cli) +
                                " verify --seed 42 --trials 1000"
                                " --no-timestamp 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return -1;
    std::array<char, 4096> buffer;
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
      out.append(buffer.data(), n);
    return WEXITSTATUS(pclose(pipe));
  };
  std::string first, second;
  const int code1 = run_once(first);
  const int code2 = run_once(second);
  report("A10", code1 == 0 && code2 == 0 && !first.empty() && first == second,
         "exit codes " + std::to_string(code1) + "/" + std::to_string(code2) +
             ", byte-identical: " + (first == second ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion_a1_a2();
  criterion_a3();
  criterion_a4();
  criterion_a5();
  criterion_a6();
  criterion_a7();
  criterion_a8();
  criterion_a9();
  criterion_a10();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(g_failures) +
                                      " CRITERIA FAILED")
            << '\n';
  return g_failures == 0 ? 0 : 1;
}
