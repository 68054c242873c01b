#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsmooth/operators.hpp"

namespace qsmooth {

// Textual state specifications accepted by the CLI:
//   bell                    two-qubit |Phi+><Phi+|, split 2 x 2
//   ghz3                    three-qubit GHZ, split 2 x 4 (first qubit vs rest)
//   maxmix:d                I/d
//   qubit:p                 diag(p, 1-p)
//   iid:p1,p2,...           i.i.d. base eigenvalues (fast-path families)
//   random:d                seeded Ginibre density matrix, dim d
//   random-bipartite:dAxdB  seeded Ginibre bipartite state
//   file:path (or *.json)   operator JSON file
struct StateSpec {
  enum class Kind { File, Named, RandomDensity, RandomBipartite, IidBase };

  Kind kind = Kind::Named;
  std::string payload;
  std::uint64_t seed = 0;

  static StateSpec parse(const std::string& text, std::uint64_t seed);
};

// A resolved spec is exactly one of: a plain state, a bipartite state, or an
// i.i.d. eigenvalue base.
struct ResolvedState {
  std::optional<QuantumState> state;
  std::optional<BipartiteState> bipartite;
  std::vector<double> iid_base;

  bool is_iid() const { return !iid_base.empty(); }
  bool is_bipartite() const { return bipartite.has_value(); }
  // The plain state, reducing a bipartite spec to its joint state.
  const QuantumState& as_state() const;
};

ResolvedState resolve_state(const StateSpec& spec);

QuantumState qubit_state(double p);
QuantumState maximally_mixed(int dim);
BipartiteState bell_state();
BipartiteState ghz3_state();

}  // namespace qsmooth
