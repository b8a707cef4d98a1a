#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "rci/containment.hpp"
#include "rci/lp.hpp"
#include "rci/simplex.hpp"
#include "rci/zonotope.hpp"

namespace rci {

inline constexpr double kResidualTol = 1e-6;

/// RCI set Z(0, T) with action set Z(0, M).
struct RciContract {
  Matrix T;
  Matrix M;
  int k = 0;
  double residual = 0.0;   // max |[AT + BM, Gd] - [0, T]|
  double objective = 0.0;  // ||T||_1

  Zonotope rci_set() const { return Zonotope(T); }
  Zonotope action_set() const { return Zonotope(M); }
};

inline Json to_json(const RciContract& c) {
  Json j;
  j["T"] = json_io::from_matrix(c.T);
  j["M"] = json_io::from_matrix(c.M);
  j["k"] = c.k;
  j["residual"] = c.residual;
  j["objective"] = c.objective;
  return j;
}

inline RciContract contract_from_json(const Json& j, const std::string& path) {
  using json_io::require;
  RciContract c;
  c.T = json_io::to_matrix(require(j, "T", path), path + ".T");
  c.M = json_io::to_matrix(require(j, "M", path), path + ".M");
  const Json& k = require(j, "k", path);
  if (!k.is_number_integer() || k.get<int>() < 1) throw ParseError(path + ".k", "expected an integer >= 1");
  c.k = k.get<int>();
  c.residual = json_io::number_at(require(j, "residual", path), path + ".residual");
  c.objective = json_io::number_at(require(j, "objective", path), path + ".objective");
  if (c.T.cols() != c.k) throw ParseError(path + ".T", "column count differs from k");
  if (c.M.cols() != c.k) throw ParseError(path + ".M", "column count differs from k");
  return c;
}

/// Max-abs violation of [AT + BM, Gd] = [0, T].
inline double fixed_point_residual(const Matrix& a, const Matrix& b, const Matrix& gd,
                                   const Matrix& t, const Matrix& m) {
  const Eigen::Index n = a.rows();
  const Eigen::Index k = t.cols();
  const Eigen::Index p = gd.cols();
  Matrix lhs(n, k + p);
  lhs << a * t + b * m, gd;
  Matrix rhs(n, k + p);
  rhs << Matrix::Zero(n, p), t;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

/// The synthesis LP for a fixed number of generators k, with its layout.
struct RciLp {
  lp::LpProblem problem;
  lp::VarMatrix T;
  lp::VarMatrix M;
  ContainmentBlock state_block;
  ContainmentBlock input_block;
  lp::VarBlock l1;
};

namespace detail {

inline void check_single_dims(const Matrix& a, const Matrix& b, const Zonotope& gx,
                              const Zonotope& gu, const Zonotope& gd) {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionError("A must be square");
  if (b.rows() != n) throw DimensionError("B must have as many rows as A");
  if (gx.dim() != n) throw DimensionError("state constraint dimension differs from A");
  if (gd.dim() != n) throw DimensionError("disturbance dimension differs from A");
  if (gu.dim() != b.cols()) throw DimensionError("input constraint dimension differs from B columns");
  if (!gx.is_centered() || !gu.is_centered() || !gd.is_centered()) {
    throw Error("constraint and disturbance zonotopes must be centered at the origin");
  }
}

}  // namespace detail

/// minimize ||T||_1  s.t.  [AT + BM, Gd] = [0, T],  Z(0,T) in Gx,  Z(0,M) in Gu.
///
/// The fixed-point equation is emitted column by column for every (k, p):
/// column c of the left side is (AT + BM)_c for c < k and Gd_{c-k}
/// otherwise; column c of the right side is 0 for c < p and T_{c-p}
/// otherwise. Columns where both sides are data become constant rows, which
/// makes k < p with a nonzero leading Gd column infeasible at solve time.
inline RciLp build_rci_lp(const Matrix& a, const Matrix& b, const Zonotope& gx, const Zonotope& gu,
                          const Zonotope& gd, int k) {
  detail::check_single_dims(a, b, gx, gu, gd);
  if (k < 1) throw Error("build_rci_lp: k must be >= 1");
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(b.cols());
  const int p = gd.num_generators();
  const Matrix& g = gd.generators();

  RciLp out;
  auto& prob = out.problem;
  out.T = prob.add_matrix("T", n, k);
  out.M = prob.add_matrix("M", m, k);

  for (int c = 0; c < k + p; ++c) {
    for (int r = 0; r < n; ++r) {
      std::vector<lp::Term> terms;
      double constant = 0.0;
      if (c < k) {
        for (int l = 0; l < n; ++l) {
          if (a(r, l) != 0.0) terms.push_back({out.T(l, c), a(r, l)});
        }
        for (int l = 0; l < m; ++l) {
          if (b(r, l) != 0.0) terms.push_back({out.M(l, c), b(r, l)});
        }
      } else {
        constant += g(r, c - k);
      }
      if (c >= p) terms.push_back({out.T(r, c - p), -1.0});
      prob.add_equality(std::move(terms), -constant);
    }
  }

  out.state_block = add_containment(prob, out.T, gx.generators(), "gamma_x");
  out.input_block = add_containment(prob, out.M, gu.generators(), "gamma_u");
  out.l1 = lp::add_l1_objective(prob, out.T.block());
  return out;
}

/// Algorithm-1 escalation failed for every k in range.
class AllKInfeasible : public Error {
 public:
  explicit AllKInfeasible(std::vector<std::pair<int, lp::Status>> attempts)
      : Error(describe(attempts)), attempts_(std::move(attempts)) {}

  const std::vector<std::pair<int, lp::Status>>& attempts() const { return attempts_; }

 private:
  static std::string describe(const std::vector<std::pair<int, lp::Status>>& attempts) {
    std::string s = "no feasible RCI parameterization for k in [";
    if (!attempts.empty()) {
      s += std::to_string(attempts.front().first) + ", " + std::to_string(attempts.back().first);
    }
    s += "]";
    if (!attempts.empty()) s += std::string("; last status ") + lp::to_string(attempts.back().second);
    return s;
  }

  std::vector<std::pair<int, lp::Status>> attempts_;
};

/// Default upper end of the k escalation for state dimension n and
/// disturbance order p.
inline int default_k_max(int n, int p) { return std::max(4 * n, p + 2 * n); }

struct SingleOptions {
  int k_start = 1;
  int k_max = 0;  // 0 -> default_k_max
  /// Keep scanning up to k_max and return the smallest objective instead of
  /// the first feasible k.
  bool scan_all = false;
  double feas_tol = lp::kDefaultFeasTol;
};

/// Solves the LP for one k. Infeasible and failed solves come back as
/// nullopt with `status` set; a NumericalFailure is retried once with a 10x
/// looser feasibility tolerance.
inline std::optional<RciContract> try_single_k(const Matrix& a, const Matrix& b, const Zonotope& gx,
                                               const Zonotope& gu, const Zonotope& gd, int k,
                                               double feas_tol, lp::Status& status) {
  const RciLp rlp = build_rci_lp(a, b, gx, gu, gd, k);
  auto sol = lp::solve(rlp.problem, feas_tol);
  if (sol.status == lp::Status::NumericalFailure) sol = lp::solve(rlp.problem, 10.0 * feas_tol);
  status = sol.status;
  if (!sol.optimal()) return std::nullopt;

  RciContract c;
  c.k = k;
  c.T = sol.matrix(rlp.T);
  c.M = sol.matrix(rlp.M);
  c.residual = fixed_point_residual(a, b, gd.generators(), c.T, c.M);
  c.objective = entrywise_l1(c.T);
  if (c.residual > kResidualTol) {
    status = lp::Status::NumericalFailure;
    return std::nullopt;
  }
  return c;
}

/// Smallest k in [k_start, k_max] whose synthesis LP is feasible.
inline RciContract synth_single(const Matrix& a, const Matrix& b, const Zonotope& gx,
                                const Zonotope& gu, const Zonotope& gd,
                                const SingleOptions& opts = {}) {
  detail::check_single_dims(a, b, gx, gu, gd);
  const int k_max = opts.k_max > 0 ? opts.k_max
                                   : default_k_max(static_cast<int>(a.rows()), gd.num_generators());
  if (opts.k_start < 1 || k_max < opts.k_start) throw Error("synth_single: invalid k range");

  std::vector<std::pair<int, lp::Status>> attempts;
  std::optional<RciContract> best;
  for (int k = opts.k_start; k <= k_max; ++k) {
    lp::Status status{};
    auto c = try_single_k(a, b, gx, gu, gd, k, opts.feas_tol, status);
    attempts.emplace_back(k, status);
    if (!c) continue;
    if (!opts.scan_all) return *c;
    if (!best || c->objective < best->objective - 1e-9) best = std::move(c);
  }
  if (best) return *best;
  throw AllKInfeasible(std::move(attempts));
}

}  // namespace rci
