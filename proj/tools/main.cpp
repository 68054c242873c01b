// qsmooth CLI: entropy / smoothing / convergence / rate-scan experiments with
// deterministic seeded CSV output.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsmooth/entropy.hpp"
#include "qsmooth/errors.hpp"
#include "qsmooth/operator_json.hpp"
#include "qsmooth/operators.hpp"
#include "qsmooth/random_states.hpp"
#include "qsmooth/smoothing.hpp"
#include "qsmooth/spectral.hpp"
#include "qsmooth/spectrum_rates.hpp"
#include "qsmooth/state_spec.hpp"
#include "qsmooth/verify.hpp"
#include "qsmooth/weighted_spectrum.hpp"

namespace {

using namespace qsmooth;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DecompositionFailure:
    case ErrorCode::NonConvergence:
    case ErrorCode::ConstructionFailure:
    case ErrorCode::NoFeasibleGamma:
      return kExitNumerical;
    default:
      return kExitBadInput;
  }
}

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

struct OutputOptions {
  std::string path;  // empty: stdout
  bool header = true;
  bool timestamp = true;
};

struct RunReport {
  std::string command;
  std::string parameters;  // the flag list as invoked
  std::string header;
  std::vector<std::string> rows;
  long checks_failed = 0;
  double elapsed_seconds = 0.0;
};

void emit(const RunReport& report, const OutputOptions& options) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!options.path.empty()) {
    file.open(options.path);
    if (!file) fail(ErrorCode::BadSpec, "cannot open " + options.path);
    out = &file;
  }
  if (options.timestamp) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&now));
    *out << "# qsmooth " << report.command;
    if (!report.parameters.empty()) *out << ' ' << report.parameters;
    *out << ' ' << stamp << " elapsed " << fmt(report.elapsed_seconds)
         << "s\n";
  }
  if (options.header && !report.header.empty()) *out << report.header << '\n';
  for (const std::string& row : report.rows) *out << row << '\n';
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorCode::BadSpec, "bad number '" + item + "'");
    }
  }
  if (values.empty()) fail(ErrorCode::BadSpec, "empty list");
  return values;
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> values;
  for (double v : parse_doubles(text)) values.push_back(static_cast<long>(v));
  return values;
}

std::vector<double> parse_gamma_grid(const std::string& text) {
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
      step <= 0 || hi < lo)
    fail(ErrorCode::BadSpec, "--gamma-grid expects lo:hi:step");
  std::vector<double> grid;
  for (double g = lo; g <= hi + step * 1e-9; g += step) grid.push_back(g);
  return grid;
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

// Conditional inputs: a bipartite state plus sigma_B (default: the B
// marginal).
struct ConditionalInput {
  BipartiteState rho;
  QuantumState sigma;
};

ConditionalInput conditional_input(const ResolvedState& state,
                                   const std::string& sigma_spec,
                                   std::uint64_t seed) {
  if (!state.is_bipartite())
    fail(ErrorCode::BadSpec, "conditional quantities need a bipartite state");
  const BipartiteState& rho = *state.bipartite;
  if (sigma_spec.empty())
    return {rho, partial_trace(rho, Subsystem::B)};
  const ResolvedState sigma =
      resolve_state(StateSpec::parse(sigma_spec, seed + 1));
  return {rho, sigma.as_state()};
}

// ---- subcommands ------------------------------------------------------------

RunReport run_entropy(const ResolvedState& state, const std::string& sigma_spec,
                      std::uint64_t seed) {
  RunReport report;
  report.command = "entropy";
  report.header = "quantity,bits";
  if (state.is_iid()) {
    const WeightedSpectrum spec =
        WeightedSpectrum::from_probabilities(state.iid_base);
    report.rows.push_back("S," + fmt(shannon_entropy_bits(state.iid_base)));
    report.rows.push_back(
        "Hmin," + fmt(-spec.max_log2_value()));
    report.rows.push_back("Hmax," + fmt(spec.log2_support_count()));
    return report;
  }
  if (state.is_bipartite() || !sigma_spec.empty()) {
    const ConditionalInput in = conditional_input(state, sigma_spec, seed);
    report.rows.push_back("S," +
                          fmt(von_neumann_entropy(in.rho.state()).bits));
    report.rows.push_back("Hmin," + fmt(h_min(in.rho, in.sigma).bits));
    report.rows.push_back("Hmax," + fmt(h_max(in.rho, in.sigma).bits));
    return report;
  }
  const QuantumState& rho = state.as_state();
  report.rows.push_back("S," + fmt(von_neumann_entropy(rho).bits));
  report.rows.push_back("Hmin," + fmt(h_min_unconditional(rho).bits));
  report.rows.push_back("Hmax," + fmt(h_max_unconditional(rho).bits));
  return report;
}

RunReport run_smooth(const ResolvedState& state, const std::string& sigma_spec,
                     const std::vector<double>& eps_list,
                     const std::string& mode, bool conditional,
                     const std::string& witness_path, std::uint64_t seed) {
  if (mode != "min" && mode != "max")
    fail(ErrorCode::BadSpec, "--mode must be min or max");
  for (double eps : eps_list) {
    if (eps < 0.0 || eps >= 1.0)
      fail(ErrorCode::BadSpec, "--eps values must lie in [0, 1)");
  }
  RunReport report;
  report.command = "smooth";
  std::optional<QuantumState> last_witness;
  std::optional<std::pair<int, int>> witness_dims;

  if (conditional) {
    const ConditionalInput in = conditional_input(state, sigma_spec, seed);
    const bool with_oracle = mode == "min" && in.rho.dim() <= 9;
    report.header = with_oracle ? "epsilon,bits,method,distance,oracle_bits"
                                : "epsilon,bits,method,distance";
    for (double eps : eps_list) {
      if (eps <= 0.0)
        fail(ErrorCode::BadSpec, "conditional smoothing needs eps > 0");
      SmoothingResult r =
          mode == "min"
              ? smooth_hmin_conditional_lower(in.rho, in.sigma, eps)
              : smooth_hmax_conditional_upper(in.rho, in.sigma, eps);
      std::string row = fmt(eps) + "," + fmt(r.value.bits) + "," +
                        to_string(r.method) + "," + fmt(r.distance);
      if (with_oracle) {
        OracleOptions opt;
        opt.seed = seed;
        row += "," + fmt(smooth_hmin_conditional_oracle(in.rho, in.sigma, eps,
                                                        opt)
                             .value.bits);
      }
      report.rows.push_back(std::move(row));
      if (r.witness) {
        last_witness = r.witness;
        witness_dims = {in.rho.dim_a(), in.rho.dim_b()};
      }
    }
  } else if (state.is_iid()) {
    report.header = "epsilon,bits,method,distance";
    const WeightedSpectrum spec =
        WeightedSpectrum::from_probabilities(state.iid_base);
    for (double eps : eps_list) {
      const SmoothingResult r = mode == "min"
                                    ? smooth_hmin_classical(spec, eps)
                                    : smooth_hmax_classical(spec, eps);
      report.rows.push_back(fmt(eps) + "," + fmt(r.value.bits) + "," +
                            to_string(r.method) + "," + fmt(r.distance));
    }
  } else {
    report.header = "epsilon,bits,method,distance";
    const QuantumState& rho = state.as_state();
    for (double eps : eps_list) {
      const SmoothingResult r = mode == "min"
                                    ? smooth_hmin_unconditional(rho, eps)
                                    : smooth_hmax_unconditional(rho, eps);
      report.rows.push_back(fmt(eps) + "," + fmt(r.value.bits) + "," +
                            to_string(r.method) + "," + fmt(r.distance));
      if (r.witness) last_witness = r.witness;
    }
  }

  if (!witness_path.empty() && last_witness) {
    if (witness_dims)
      write_operator_json_file(witness_path, last_witness->matrix(),
                               witness_dims->first, witness_dims->second);
    else
      write_operator_json_file(witness_path, last_witness->matrix());
  }
  return report;
}

RunReport run_converge(const ResolvedState& state,
                       const std::vector<long>& n_list,
                       const std::vector<double>& eps_list) {
  if (!state.is_iid())
    fail(ErrorCode::BadSpec, "converge needs --state iid:p1,p2,...");
  RunReport report;
  report.command = "converge";
  report.header = "n,epsilon,hmin_rate,hmax_rate,svn";
  const double svn = shannon_entropy_bits(state.iid_base);
  for (const RateScanRow& row : rate_scan(state.iid_base, n_list, eps_list)) {
    report.rows.push_back(std::to_string(row.n) + "," + fmt(row.epsilon) +
                          "," + fmt(row.hmin_rate) + "," + fmt(row.hmax_rate) +
                          "," + fmt(svn));
  }
  return report;
}

RunReport run_rate_scan(const ResolvedState& state,
                        const std::vector<long>& n_list,
                        const std::vector<double>& grid, double t_low,
                        double t_high, bool conditional) {
  RunReport report;
  report.command = "rate-scan";
  report.header = "n,gamma,trace";

  TraceFamily family;
  if (state.is_iid()) {
    family = iid_family_alt(state.iid_base);
  } else if (conditional) {
    const BipartiteState base = *state.bipartite;
    for (long n : n_list) {
      double dense_dim = std::pow(static_cast<double>(base.dim()), n);
      if (dense_dim > 256.0)
        fail(ErrorCode::DimensionTooLarge,
             "dense tensor powers are capped at total dimension 256");
    }
    family = [base](long n, double gamma) {
      Matrix joint = base.matrix();
      int da = base.dim_a(), db = base.dim_b();
      for (long i = 1; i < n; ++i) {
        joint = kron(joint, base.matrix());
        da *= base.dim_a();
        db *= base.dim_b();
      }
      // Tensor powers of an A|B split interleave factors; sort the basis so
      // all A factors come first. Equivalent: permutation similarity, which
      // conditional_trace needs to see the right marginal.
      // Build index permutation for n copies of (a_i, b_i).
      const int dim = static_cast<int>(joint.rows());
      std::vector<int> perm(dim);
      const int base_a = base.dim_a(), base_b = base.dim_b();
      for (int idx = 0; idx < dim; ++idx) {
        // digits of idx in mixed radix (a1 b1 a2 b2 ... an bn)
        int rest = idx, a_part = 0, b_part = 0;
        std::vector<int> digits(2 * n);
        for (long f = 2 * n - 1; f >= 0; --f) {
          const int radix = (f % 2 == 0) ? base_a : base_b;
          digits[f] = rest % radix;
          rest /= radix;
        }
        for (long f = 0; f < 2 * n; f += 2) a_part = a_part * base_a + digits[f];
        for (long f = 1; f < 2 * n; f += 2) b_part = b_part * base_b + digits[f];
        perm[idx] = a_part * db + b_part;
      }
      Matrix sorted(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) sorted(perm[i], perm[j]) = joint(i, j);
      const BipartiteState power(
          QuantumState(HermitianOperator(std::move(sorted))), da, db);
      return conditional_trace(power, static_cast<double>(n) * gamma);
    };
  } else {
    const QuantumState base = state.as_state();
    for (long n : n_list) {
      double dense_dim = std::pow(static_cast<double>(base.dim()), n);
      if (dense_dim > 256.0)
        fail(ErrorCode::DimensionTooLarge,
             "dense tensor powers are capped at total dimension 256");
    }
    family = [base](long n, double gamma) {
      Matrix power = base.matrix();
      for (long i = 1; i < n; ++i) power = kron(power, base.matrix());
      const QuantumState rho_n{HermitianOperator(std::move(power))};
      return div_trace_alt(rho_n, hermitian_identity(rho_n.dim()),
                           -static_cast<double>(n) * gamma);
    };
  }

  const RateProfile profile = rate_profile(family, n_list, grid, t_low, t_high);
  for (const RateProfile::Row& row : profile.rows)
    report.rows.push_back(std::to_string(row.n) + "," + fmt(row.gamma) + "," +
                          fmt(row.trace));
  report.rows.push_back("lowerBracket," + fmt(profile.lower_bracket));
  report.rows.push_back("upperBracket," + fmt(profile.upper_bracket));
  return report;
}

RunReport run_verify(std::uint64_t seed, long trials, bool corrupt) {
  RunReport report;
  report.command = "verify";
  report.header = "check,trials,failures,worstSlack";
  VerifyOptions options;
  options.seed = seed;
  options.trials = trials;
  options.corrupt_tolerance = corrupt;
  const std::vector<CheckResult> results = run_verification(options);
  for (const CheckResult& row : results)
    report.rows.push_back(row.name + "," + std::to_string(row.trials) + "," +
                          std::to_string(row.failures) + "," +
                          fmt(row.worst_slack));
  report.checks_failed = total_failures(results);
  return report;
}

RunReport run_oracle_compare(std::uint64_t seed, long trials, double eps) {
  RunReport report;
  report.command = "oracle-compare";
  report.header = "trial,epsilon,lower_bits,oracle_bits,gap";
  for (long t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, 0x0c, t);
    const BipartiteState rho = random_bipartite(derive_seed(s, 1, 0), 2, 2);
    const QuantumState sigma_b = partial_trace(rho, Subsystem::B);
    const SmoothingResult lower =
        smooth_hmin_conditional_lower(rho, sigma_b, eps);
    OracleOptions opt;
    opt.seed = derive_seed(s, 2, 0);
    const SmoothingResult oracle =
        smooth_hmin_conditional_oracle(rho, sigma_b, eps, opt);
    report.rows.push_back(std::to_string(t) + "," + fmt(eps) + "," +
                          fmt(lower.value.bits) + "," +
                          fmt(oracle.value.bits) + "," +
                          fmt(oracle.value.bits - lower.value.bits));
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth min/max entropies and information-spectrum functionals "
               "for finite-dimensional quantum states"};
  app.require_subcommand(1);

  std::string state_spec, sigma_spec, out_path, witness_path;
  std::string eps_text = "0.01", n_text = "1", gamma_grid_text,
              thresholds_text = "0.01,0.99", mode = "min";
  std::uint64_t seed = 42;
  long trials = 1000;
  bool no_header = false, no_timestamp = false, conditional = false,
       corrupt = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_flag("--no-header", no_header, "omit the CSV header row");
    cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp line");
    cmd->add_option("--seed", seed, "seed for random state specs");
  };

  CLI::App* entropy_cmd =
      app.add_subcommand("entropy", "non-smooth entropies of a state");
  entropy_cmd->add_option("--state", state_spec, "state spec")->required();
  entropy_cmd->add_option("--sigma", sigma_spec, "sigma_B spec");
  add_common(entropy_cmd);

  CLI::App* smooth_cmd =
      app.add_subcommand("smooth", "smooth entropies over an epsilon list");
  smooth_cmd->add_option("--state", state_spec, "state spec")->required();
  smooth_cmd->add_option("--sigma", sigma_spec, "sigma_B spec");
  smooth_cmd->add_option("--eps", eps_text, "epsilon list")->required();
  smooth_cmd->add_option("--mode", mode, "min or max")->required();
  smooth_cmd->add_flag("--conditional", conditional,
                       "conditional smoothing (bipartite state)");
  smooth_cmd->add_option("--json-witness", witness_path,
                         "dump the last witness as operator JSON");
  add_common(smooth_cmd);

  CLI::App* converge_cmd = app.add_subcommand(
      "converge", "smooth-entropy rates of an i.i.d. family");
  converge_cmd->add_option("--state", state_spec, "iid:p1,p2,...")->required();
  converge_cmd->add_option("--n", n_text, "n list")->required();
  converge_cmd->add_option("--eps", eps_text, "epsilon list")->required();
  add_common(converge_cmd);

  CLI::App* scan_cmd = app.add_subcommand(
      "rate-scan", "finite-n spectral trace profile and brackets");
  scan_cmd->add_option("--state", state_spec, "state spec")->required();
  scan_cmd->add_option("--n", n_text, "n list")->required();
  scan_cmd->add_option("--gamma-grid", gamma_grid_text, "lo:hi:step")
      ->required();
  scan_cmd->add_option("--thresholds", thresholds_text, "tLow,tHigh");
  scan_cmd->add_flag("--conditional", conditional,
                     "conditional family (dense tensor powers)");
  add_common(scan_cmd);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the seeded verification battery");
  verify_cmd->add_option("--trials", trials, "trials per check");
  verify_cmd
      ->add_flag("--corrupt-tolerance", corrupt,
                 "self-test hook: force every check to fail")
      ->group("");  // hidden
  add_common(verify_cmd);

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-compare", "lemma lower bound vs oracle on seeded instances");
  oracle_cmd->add_option("--trials", trials, "instance count");
  oracle_cmd->add_option("--eps", eps_text, "single epsilon");
  add_common(oracle_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    Timer timer;
    RunReport report;
    if (app.got_subcommand(entropy_cmd)) {
      report = run_entropy(resolve_state(StateSpec::parse(state_spec, seed)),
                           sigma_spec, seed);
    } else if (app.got_subcommand(smooth_cmd)) {
      report = run_smooth(resolve_state(StateSpec::parse(state_spec, seed)),
                          sigma_spec, parse_doubles(eps_text), mode,
                          conditional, witness_path, seed);
    } else if (app.got_subcommand(converge_cmd)) {
      report = run_converge(resolve_state(StateSpec::parse(state_spec, seed)),
                            parse_longs(n_text), parse_doubles(eps_text));
    } else if (app.got_subcommand(scan_cmd)) {
      const std::vector<double> thresholds = parse_doubles(thresholds_text);
      if (thresholds.size() != 2)
        fail(ErrorCode::BadSpec, "--thresholds expects tLow,tHigh");
      report = run_rate_scan(resolve_state(StateSpec::parse(state_spec, seed)),
                             parse_longs(n_text),
                             parse_gamma_grid(gamma_grid_text), thresholds[0],
                             thresholds[1], conditional);
    } else if (app.got_subcommand(verify_cmd)) {
      report = run_verify(seed, trials, corrupt);
    } else if (app.got_subcommand(oracle_cmd)) {
      const std::vector<double> eps = parse_doubles(eps_text);
      report = run_oracle_compare(seed, trials, eps.at(0));
    }
    report.elapsed_seconds = timer.seconds();
    for (int i = 2; i < argc; ++i) {
      if (i > 2) report.parameters += ' ';
      report.parameters += argv[i];
    }

    OutputOptions options;
    options.path = out_path;
    options.header = !no_header;
    options.timestamp = !no_timestamp;
    emit(report, options);
    if (report.command == "verify" && report.checks_failed > 0)
      return kExitVerifyFailed;
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
