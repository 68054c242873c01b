#include "qsmooth/operator_json.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace qsmooth {

namespace {

using nlohmann::json;

Eigen::MatrixXd read_real_matrix(const json& j, const char* key, int dim) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  if (!j.contains(key)) return m;
  const json& rows = j.at(key);
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    fail(ErrorCode::BadSpec, std::string(key) + " must be a dim x dim array");
  for (int i = 0; i < dim; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(ErrorCode::BadSpec, std::string(key) + " must be a dim x dim array");
    for (int k = 0; k < dim; ++k) m(i, k) = row.at(k).get<double>();
  }
  return m;
}

}  // namespace

OperatorJson read_operator_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::BadSpec, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("dim") || !j.at("dim").is_number_integer())
    fail(ErrorCode::BadSpec, "missing integer field 'dim'");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) fail(ErrorCode::BadSpec, "dim must be >= 1");

  OperatorJson out;
  const Eigen::MatrixXd re = read_real_matrix(j, "re", dim);
  const Eigen::MatrixXd im = read_real_matrix(j, "im", dim);
  out.entries = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  if (j.contains("dimA")) out.dim_a = j.at("dimA").get<int>();
  if (j.contains("dimB")) out.dim_b = j.at("dimB").get<int>();
  if (out.dim_a.has_value() != out.dim_b.has_value())
    fail(ErrorCode::BadSpec, "dimA and dimB must appear together");
  if (out.dim_a && *out.dim_a * *out.dim_b != dim)
    fail(ErrorCode::BadSpec, "dimA * dimB must equal dim");
  return out;
}

OperatorJson read_operator_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadSpec, "cannot open " + path);
  return read_operator_json(in);
}

void write_operator_json(std::ostream& out, const Matrix& entries,
                         std::optional<int> dim_a, std::optional<int> dim_b) {
  const int dim = static_cast<int>(entries.rows());
  json j;
  j["dim"] = dim;
  json re = json::array(), im = json::array();
  for (int i = 0; i < dim; ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int k = 0; k < dim; ++k) {
      re_row.push_back(entries(i, k).real());
      im_row.push_back(entries(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  if (dim_a) j["dimA"] = *dim_a;
  if (dim_b) j["dimB"] = *dim_b;
  out << j.dump(1) << '\n';
}

void write_operator_json_file(const std::string& path, const Matrix& entries,
                              std::optional<int> dim_a,
                              std::optional<int> dim_b) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::BadSpec, "cannot open " + path + " for writing");
  write_operator_json(out, entries, dim_a, dim_b);
}

}  // namespace qsmooth
