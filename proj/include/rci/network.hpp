#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rci/error.hpp"
#include "rci/json_io.hpp"
#include "rci/linalg.hpp"
#include "rci/zonotope.hpp"

namespace rci {

/// x_i+ = A_ii x_i + B_ii u_i + (couplings) + d_i with x_i in Gx, u_i in Gu,
/// d_i in Gd.
struct Subsystem {
  std::string id;
  Matrix A;
  Matrix B;
  Zonotope Gx;
  Zonotope Gu;
  Zonotope Gd;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
};

/// Influence of subsystem `from` (j) on subsystem `to` (i): A_ij x_j + B_ij u_j.
/// Omitted blocks are zero; the optionals remember whether they were given.
struct Coupling {
  std::string from;
  std::string to;
  std::optional<Matrix> A;
  std::optional<Matrix> B;
};

class NetworkSystem {
 public:
  NetworkSystem() = default;

  /// Validates on construction; throws ParseError with a JSON-style path.
  NetworkSystem(std::vector<Subsystem> subsystems, std::vector<Coupling> couplings,
                Json metadata = nullptr)
      : subsystems_(std::move(subsystems)),
        couplings_(std::move(couplings)),
        metadata_(std::move(metadata)) {
    validate();
  }

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  const Json& metadata() const { return metadata_; }
  int size() const { return static_cast<int>(subsystems_.size()); }
  const Subsystem& operator[](int i) const { return subsystems_[i]; }

  int index_of(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown subsystem id '" + id + "'");
    return it->second;
  }

  /// Indices into couplings() of the couplings acting on subsystem i, in
  /// declaration order.
  const std::vector<int>& incoming(int i) const { return incoming_[i]; }

  /// A_ij, zero when absent.
  Matrix coupling_A(const Coupling& c) const {
    if (c.A) return *c.A;
    return Matrix::Zero(subsystems_[index_of(c.to)].state_dim(),
                        subsystems_[index_of(c.from)].state_dim());
  }

  /// B_ij, zero when absent.
  Matrix coupling_B(const Coupling& c) const {
    if (c.B) return *c.B;
    return Matrix::Zero(subsystems_[index_of(c.to)].state_dim(),
                        subsystems_[index_of(c.from)].input_dim());
  }

  int total_states() const {
    int n = 0;
    for (const auto& s : subsystems_) n += s.state_dim();
    return n;
  }

 private:
  void validate() {
    index_.clear();
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
      const auto& s = subsystems_[i];
      const std::string path = "$.subsystems[" + std::to_string(i) + "]";
      if (s.id.empty()) throw ParseError(path + ".id", "must be a non-empty string");
      if (!index_.emplace(s.id, static_cast<int>(i)).second) {
        throw ParseError(path + ".id", "duplicate subsystem id '" + s.id + "'");
      }
      const auto n = s.A.rows();
      if (n < 1 || s.A.cols() != n) throw ParseError(path + ".A", "must be a non-empty square matrix");
      if (s.B.rows() != n) {
        throw ParseError(path + ".B", "must have " + std::to_string(n) + " rows to match A");
      }
      if (s.B.cols() < 1) throw ParseError(path + ".B", "must have at least one column");
      auto check_set = [&](const Zonotope& z, const char* key, Eigen::Index dim) {
        if (z.dim() != dim) {
          throw ParseError(path + "." + key, "dimension " + std::to_string(z.dim()) + ", expected " +
                                                 std::to_string(dim));
        }
        if (!z.is_centered()) throw ParseError(path + "." + key + ".center", "must be zero");
      };
      check_set(s.Gx, "Gx", n);
      check_set(s.Gu, "Gu", s.B.cols());
      check_set(s.Gd, "Gd", n);
    }
    incoming_.assign(subsystems_.size(), {});
    for (std::size_t c = 0; c < couplings_.size(); ++c) {
      const auto& cp = couplings_[c];
      const std::string path = "$.couplings[" + std::to_string(c) + "]";
      const auto from = index_.find(cp.from);
      if (from == index_.end()) throw ParseError(path + ".from", "dangling reference to '" + cp.from + "'");
      const auto to = index_.find(cp.to);
      if (to == index_.end()) throw ParseError(path + ".to", "dangling reference to '" + cp.to + "'");
      if (from->second == to->second) throw ParseError(path, "self-coupling on '" + cp.to + "'");
      const auto& sj = subsystems_[from->second];
      const auto& si = subsystems_[to->second];
      if (cp.A && (cp.A->rows() != si.state_dim() || cp.A->cols() != sj.state_dim())) {
        throw ParseError(path + ".A", "must be " + std::to_string(si.state_dim()) + "x" +
                                          std::to_string(sj.state_dim()));
      }
      if (cp.B && (cp.B->rows() != si.state_dim() || cp.B->cols() != sj.input_dim())) {
        throw ParseError(path + ".B", "must be " + std::to_string(si.state_dim()) + "x" +
                                          std::to_string(sj.input_dim()));
      }
      incoming_[to->second].push_back(static_cast<int>(c));
    }
  }

  std::vector<Subsystem> subsystems_;
  std::vector<Coupling> couplings_;
  Json metadata_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> incoming_;
};

inline Json to_json(const NetworkSystem& net) {
  Json doc;
  Json subs = Json::array();
  for (const auto& s : net.subsystems()) {
    Json j;
    j["id"] = s.id;
    j["A"] = json_io::from_matrix(s.A);
    j["B"] = json_io::from_matrix(s.B);
    j["Gx"] = to_json(s.Gx);
    j["Gu"] = to_json(s.Gu);
    j["Gd"] = to_json(s.Gd);
    subs.push_back(std::move(j));
  }
  doc["subsystems"] = std::move(subs);
  Json cps = Json::array();
  for (const auto& c : net.couplings()) {
    Json j;
    j["from"] = c.from;
    j["to"] = c.to;
    if (c.A) j["A"] = json_io::from_matrix(*c.A);
    if (c.B) j["B"] = json_io::from_matrix(*c.B);
    cps.push_back(std::move(j));
  }
  doc["couplings"] = std::move(cps);
  if (!net.metadata().is_null()) doc["metadata"] = net.metadata();
  return doc;
}

inline std::string serialize_network(const NetworkSystem& net, int indent = 1) {
  return to_json(net).dump(indent);
}

namespace detail {

inline void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ParseError(path + "." + it.key(), "unknown field");
  }
}

inline Matrix matrix_field(const Json& obj, const char* key, const std::string& path) {
  const std::string p = path + "." + key;
  Matrix m = json_io::to_matrix(json_io::require(obj, key, path), p);
  if (m.rows() == 0) throw ParseError(p, "must have at least one row");
  return m;
}

}  // namespace detail

inline NetworkSystem network_from_json(const Json& doc) {
  using json_io::require;
  if (!doc.is_object()) throw ParseError("$", "expected a JSON object");
  detail::reject_unknown_keys(doc, {"subsystems", "couplings", "metadata"}, "$");
  const Json& subs = require(doc, "subsystems", "$");
  if (!subs.is_array()) throw ParseError("$.subsystems", "expected an array");

  std::vector<Subsystem> subsystems;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string path = "$.subsystems[" + std::to_string(i) + "]";
    const Json& js = subs[i];
    if (!js.is_object()) throw ParseError(path, "expected an object");
    detail::reject_unknown_keys(js, {"id", "A", "B", "Gx", "Gu", "Gd"}, path);
    Subsystem s;
    const Json& id = require(js, "id", path);
    if (!id.is_string()) throw ParseError(path + ".id", "expected a string");
    s.id = id.get<std::string>();
    s.A = detail::matrix_field(js, "A", path);
    s.B = detail::matrix_field(js, "B", path);
    s.Gx = zonotope_from_json(require(js, "Gx", path), path + ".Gx");
    s.Gu = zonotope_from_json(require(js, "Gu", path), path + ".Gu");
    s.Gd = zonotope_from_json(require(js, "Gd", path), path + ".Gd");
    subsystems.push_back(std::move(s));
  }

  std::vector<Coupling> couplings;
  if (const auto it = doc.find("couplings"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("$.couplings", "expected an array");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const std::string path = "$.couplings[" + std::to_string(c) + "]";
      const Json& jc = (*it)[c];
      if (!jc.is_object()) throw ParseError(path, "expected an object");
      detail::reject_unknown_keys(jc, {"from", "to", "A", "B"}, path);
      Coupling cp;
      const Json& from = require(jc, "from", path);
      const Json& to = require(jc, "to", path);
      if (!from.is_string()) throw ParseError(path + ".from", "expected a string");
      if (!to.is_string()) throw ParseError(path + ".to", "expected a string");
      cp.from = from.get<std::string>();
      cp.to = to.get<std::string>();
      if (jc.contains("A")) cp.A = detail::matrix_field(jc, "A", path);
      if (jc.contains("B")) cp.B = detail::matrix_field(jc, "B", path);
      couplings.push_back(std::move(cp));
    }
  }
  Json metadata = doc.contains("metadata") ? doc["metadata"] : Json(nullptr);
  return NetworkSystem(std::move(subsystems), std::move(couplings), std::move(metadata));
}

inline NetworkSystem parse_network(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON: ") + e.what());
  }
  return network_from_json(doc);
}

/// The network stacked into one system x+ = A x + B u + d.
struct Aggregate {
  Matrix A;
  Matrix B;
  Zonotope Gx;
  Zonotope Gu;
  Zonotope Gd;
  std::vector<int> state_offset;  // first state row of each subsystem
  std::vector<int> input_offset;
};

inline Aggregate aggregate(const NetworkSystem& net) {
  Aggregate agg;
  int n = 0;
  int m = 0;
  for (const auto& s : net.subsystems()) {
    agg.state_offset.push_back(n);
    agg.input_offset.push_back(m);
    n += s.state_dim();
    m += s.input_dim();
  }
  agg.A = Matrix::Zero(n, n);
  agg.B = Matrix::Zero(n, m);
  Matrix gx(0, 0), gu(0, 0), gd(0, 0);
  for (int i = 0; i < net.size(); ++i) {
    const auto& s = net[i];
    agg.A.block(agg.state_offset[i], agg.state_offset[i], s.state_dim(), s.state_dim()) = s.A;
    agg.B.block(agg.state_offset[i], agg.input_offset[i], s.state_dim(), s.input_dim()) = s.B;
    gx = blkdiag(gx, s.Gx.generators());
    gu = blkdiag(gu, s.Gu.generators());
    gd = blkdiag(gd, s.Gd.generators());
  }
  for (const auto& c : net.couplings()) {
    const int i = net.index_of(c.to);
    const int j = net.index_of(c.from);
    const auto& si = net[i];
    const auto& sj = net[j];
    if (c.A) agg.A.block(agg.state_offset[i], agg.state_offset[j], si.state_dim(), sj.state_dim()) += *c.A;
    if (c.B) agg.B.block(agg.state_offset[i], agg.input_offset[j], si.state_dim(), sj.input_dim()) += *c.B;
  }
  agg.Gx = Zonotope(gx);
  agg.Gu = Zonotope(gu);
  agg.Gd = Zonotope(gd);
  return agg;
}

}  // namespace rci
