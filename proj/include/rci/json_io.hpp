#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "rci/error.hpp"
#include "rci/linalg.hpp"

namespace rci {

using Json = nlohmann::ordered_json;

namespace json_io {

inline double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "expected a finite number");
  return v;
}

inline Json from_vector(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Vector to_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number_at(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

/// Row-major array of arrays. A matrix with zero columns is written as n
/// empty rows so that its row count survives.
inline Json from_matrix(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix to_matrix(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw ParseError(path + "[0]", "expected an array of numbers");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError(rp, "expected an array of numbers");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(rp, "ragged matrix: expected " + std::to_string(cols) + " entries, got " +
                               std::to_string(row.size()));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = number_at(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing required field");
  return *it;
}

}  // namespace json_io
}  // namespace rci
