#include "qsmooth/tolerances.hpp"

namespace qsmooth {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace qsmooth
