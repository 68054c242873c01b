#pragma once

namespace qsmooth {

// Central tolerance record. Every numerical cutoff in the library routes
// through one of these knobs so conditioning studies can vary them in one
// place.
//
//   entry       : max entrywise deviation accepted when validating stored
//                 operators (hermiticity, positivity, trace checks).
//   assertion   : slack granted to inequality checks that are exact in
//                 infinite precision (lemma contracts, projector algebra).
//   zero_eig    : |lambda| at or below this counts as an exact zero when a
//                 spectral split assigns eigenvectors to {>=},{>},{<=},{<}.
//   rank_rel    : relative cutoff for support/rank decisions, applied as
//                 lambda > rank_rel * lambda_max.
//   entropy_eig : eigenvalues at or below this are skipped in -sum p log p.
struct Tolerances {
  double entry = 1e-10;
  double assertion = 1e-9;
  double zero_eig = 1e-10;
  double rank_rel = 1e-10;
  double entropy_eig = 1e-12;
};

const Tolerances& default_tolerances();

}  // namespace qsmooth
