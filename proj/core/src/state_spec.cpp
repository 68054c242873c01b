#include "qsmooth/state_spec.hpp"

#include <cmath>
#include <sstream>

#include "qsmooth/operator_json.hpp"
#include "qsmooth/random_states.hpp"

namespace qsmooth {

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) fail(ErrorCode::BadSpec, "bad number: " + item);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::BadSpec, "bad number: " + item);
    }
  }
  if (values.empty()) fail(ErrorCode::BadSpec, "empty number list");
  return values;
}

bool has_prefix(const std::string& text, const std::string& prefix,
                std::string* rest) {
  if (text.rfind(prefix, 0) != 0) return false;
  *rest = text.substr(prefix.size());
  return true;
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

StateSpec StateSpec::parse(const std::string& text, std::uint64_t seed) {
  StateSpec spec;
  spec.seed = seed;
  std::string rest;
  if (has_prefix(text, "file:", &rest)) {
    spec.kind = Kind::File;
    spec.payload = rest;
  } else if (ends_with(text, ".json")) {
    spec.kind = Kind::File;
    spec.payload = text;
  } else if (has_prefix(text, "iid:", &rest)) {
    spec.kind = Kind::IidBase;
    spec.payload = rest;
  } else if (has_prefix(text, "random-bipartite:", &rest)) {
    spec.kind = Kind::RandomBipartite;
    spec.payload = rest;
  } else if (has_prefix(text, "random:", &rest)) {
    spec.kind = Kind::RandomDensity;
    spec.payload = rest;
  } else {
    spec.kind = Kind::Named;
    spec.payload = text;
  }
  return spec;
}

QuantumState qubit_state(double p) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::BadSpec, "qubit:p needs p in [0, 1]");
  RVector diag(2);
  diag << p, 1.0 - p;
  return QuantumState::diagonal(diag);
}

QuantumState maximally_mixed(int dim) {
  if (dim < 1 || dim > kMaxRandomDim)
    fail(ErrorCode::BadSpec, "maxmix:d needs 1 <= d <= 64");
  return QuantumState(
      HermitianOperator(identity_matrix(dim) / static_cast<double>(dim)));
}

BipartiteState bell_state() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return BipartiteState(QuantumState(HermitianOperator(psi * psi.adjoint())),
                        2, 2);
}

BipartiteState ghz3_state() {
  CVector psi = CVector::Zero(8);
  psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
  return BipartiteState(QuantumState(HermitianOperator(psi * psi.adjoint())),
                        2, 4);
}

const QuantumState& ResolvedState::as_state() const {
  if (state) return *state;
  if (bipartite) return bipartite->state();
  fail(ErrorCode::BadSpec, "spec resolves to an i.i.d. base, not a state");
}

ResolvedState resolve_state(const StateSpec& spec) {
  ResolvedState out;
  switch (spec.kind) {
    case StateSpec::Kind::File: {
      const OperatorJson loaded = read_operator_json_file(spec.payload);
      QuantumState state(
          HermitianOperator(loaded.entries),
          std::abs(loaded.entries.trace().real() - 1.0) <= 1e-10);
      if (loaded.dim_a)
        out.bipartite = BipartiteState(state, *loaded.dim_a, *loaded.dim_b);
      else
        out.state = state;
      return out;
    }
    case StateSpec::Kind::IidBase: {
      out.iid_base = parse_double_list(spec.payload);
      double sum = 0.0;
      for (double p : out.iid_base) {
        if (p < 0.0) fail(ErrorCode::BadSpec, "iid base entries must be >= 0");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-10)
        fail(ErrorCode::BadSpec, "iid base must sum to 1");
      return out;
    }
    case StateSpec::Kind::RandomDensity: {
      const std::vector<double> params = parse_double_list(spec.payload);
      if (params.size() != 1)
        fail(ErrorCode::BadSpec, "random:d takes one dimension");
      out.state = random_density(spec.seed, static_cast<int>(params[0]));
      return out;
    }
    case StateSpec::Kind::RandomBipartite: {
      std::string payload = spec.payload;
      const std::size_t x = payload.find('x');
      if (x == std::string::npos)
        fail(ErrorCode::BadSpec, "random-bipartite:dAxdB, e.g. 2x2");
      int da = 0, db = 0;
      try {
        da = std::stoi(payload.substr(0, x));
        db = std::stoi(payload.substr(x + 1));
      } catch (const std::exception&) {
        fail(ErrorCode::BadSpec, "random-bipartite:dAxdB, e.g. 2x2");
      }
      out.bipartite = random_bipartite(spec.seed, da, db);
      return out;
    }
    case StateSpec::Kind::Named: {
      std::string rest;
      if (spec.payload == "bell") {
        out.bipartite = bell_state();
      } else if (spec.payload == "ghz3") {
        out.bipartite = ghz3_state();
      } else if (has_prefix(spec.payload, "maxmix:", &rest)) {
        try {
          out.state = maximally_mixed(std::stoi(rest));
        } catch (const Error&) {
          throw;
        } catch (const std::exception&) {
          fail(ErrorCode::BadSpec, "maxmix:d needs an integer dimension");
        }
      } else if (has_prefix(spec.payload, "qubit:", &rest)) {
        try {
          out.state = qubit_state(std::stod(rest));
        } catch (const Error&) {
          throw;
        } catch (const std::exception&) {
          fail(ErrorCode::BadSpec, "qubit:p needs a probability");
        }
      } else {
        fail(ErrorCode::BadSpec, "unknown state '" + spec.payload +
                                     "'; known: bell, ghz3, maxmix:d, qubit:p");
      }
      return out;
    }
  }
  fail(ErrorCode::BadSpec, "unhandled spec kind");
}

}  // namespace qsmooth
