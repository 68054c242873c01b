#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qsmooth/operators.hpp"

namespace qsmooth {

// Operator JSON format:
//   {"dim": d, "re": [[...d x d...]], "im": [[...d x d...]]}
// row-major, decimal floats; bipartite operators add "dimA" and "dimB".
// "im" may be omitted for real operators.

struct OperatorJson {
  Matrix entries;
  std::optional<int> dim_a;
  std::optional<int> dim_b;
};

OperatorJson read_operator_json(std::istream& in);
OperatorJson read_operator_json_file(const std::string& path);

void write_operator_json(std::ostream& out, const Matrix& entries,
                         std::optional<int> dim_a = std::nullopt,
                         std::optional<int> dim_b = std::nullopt);
void write_operator_json_file(const std::string& path, const Matrix& entries,
                              std::optional<int> dim_a = std::nullopt,
                              std::optional<int> dim_b = std::nullopt);

}  // namespace qsmooth
