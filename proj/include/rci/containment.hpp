#pragma once

#include <optional>
#include <string>
#include <variant>

#include "rci/lp.hpp"
#include "rci/simplex.hpp"
#include "rci/zonotope.hpp"

namespace rci {

/// Generator matrix of the inner set in a containment constraint: either
/// fixed data (verification) or decision variables (synthesis).
using InnerGenerators = std::variant<Matrix, lp::VarMatrix>;

/// Constraint rows certifying Z(0, X) subset of Z(0, Y):
///   X = Y * Gamma,  sum_j |Gamma_ij| <= 1 for every row i.
/// Gamma is split as Gamma+ - Gamma- with both parts nonnegative, which is
/// the same feasible set as bounding |Gamma| by a Lambda with unit row sums.
struct ContainmentBlock {
  int dim = 0;
  int inner_cols = 0;   // k_in
  int outer_cols = 0;   // k_out; Gamma is k_out x k_in
  lp::VarMatrix gamma_pos;
  lp::VarMatrix gamma_neg;
  int first_equality = 0;  // n * k_in rows of X = Y Gamma
  int first_row_sum = 0;   // k_out rows of the norm bound

  /// Gamma recovered from a solved problem.
  Matrix gamma(const lp::LpSolution& s) const { return s.matrix(gamma_pos) - s.matrix(gamma_neg); }
};

/// Appends the containment rows for `inner` in Z(0, outer) to `p`.
inline ContainmentBlock add_containment(lp::LpProblem& p, const InnerGenerators& inner,
                                        const Matrix& outer, const std::string& tag = "gamma") {
  const int n = static_cast<int>(outer.rows());
  int k_in = 0;
  if (const auto* m = std::get_if<Matrix>(&inner)) {
    if (m->rows() != n) throw DimensionError("containment: inner and outer dimension differ");
    k_in = static_cast<int>(m->cols());
  } else {
    const auto& v = std::get<lp::VarMatrix>(inner);
    if (v.rows != n) throw DimensionError("containment: inner and outer dimension differ");
    k_in = v.cols;
  }
  const int k_out = static_cast<int>(outer.cols());

  ContainmentBlock blk;
  blk.dim = n;
  blk.inner_cols = k_in;
  blk.outer_cols = k_out;
  blk.gamma_pos = p.add_matrix(tag + "_pos", k_out, k_in, 0.0, lp::kInf);
  blk.gamma_neg = p.add_matrix(tag + "_neg", k_out, k_in, 0.0, lp::kInf);

  blk.first_equality = p.num_equalities();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < k_in; ++c) {
      std::vector<lp::Term> terms;
      double rhs = 0.0;
      if (const auto* m = std::get_if<Matrix>(&inner)) {
        rhs = (*m)(r, c);
      } else {
        terms.push_back({std::get<lp::VarMatrix>(inner)(r, c), 1.0});
      }
      // X(r,c) - sum_l Y(r,l) Gamma(l,c) = 0
      for (int l = 0; l < k_out; ++l) {
        const double y = outer(r, l);
        if (y == 0.0) continue;
        terms.push_back({blk.gamma_pos(l, c), -y});
        terms.push_back({blk.gamma_neg(l, c), y});
      }
      if (std::holds_alternative<Matrix>(inner)) {
        for (auto& t : terms) t.coef = -t.coef;
      }
      p.add_equality(std::move(terms), rhs);
    }
  }

  blk.first_row_sum = p.num_inequalities();
  for (int l = 0; l < k_out; ++l) {
    std::vector<lp::Term> terms;
    terms.reserve(2 * k_in);
    for (int c = 0; c < k_in; ++c) {
      terms.push_back({blk.gamma_pos(l, c), 1.0});
      terms.push_back({blk.gamma_neg(l, c), 1.0});
    }
    p.add_inequality(std::move(terms), 1.0);
  }
  return blk;
}

/// A standalone feasibility LP for Z(inner) subset of Z(outer).
struct ContainmentLp {
  lp::LpProblem problem;
  ContainmentBlock block;
};

/// Both zonotopes must be centered at the origin.
inline ContainmentLp containment_block(const Zonotope& inner, const Zonotope& outer) {
  if (inner.dim() != outer.dim()) {
    throw DimensionError("containment_block: dimensions " + std::to_string(inner.dim()) + " and " +
                         std::to_string(outer.dim()));
  }
  if (!inner.is_centered() || !outer.is_centered()) {
    throw Error("containment_block: zonotopes must be centered at the origin");
  }
  ContainmentLp out;
  out.block = add_containment(out.problem, inner.generators(), outer.generators());
  return out;
}

/// True when the containment LP is feasible (sufficient for inclusion).
inline bool is_subset(const Zonotope& inner, const Zonotope& outer,
                      double feas_tol = lp::kDefaultFeasTol) {
  const auto c = containment_block(inner, outer);
  const auto sol = lp::solve(c.problem, feas_tol);
  if (sol.status == lp::Status::NumericalFailure) {
    throw SolverError("is_subset: LP solver failed");
  }
  return sol.optimal();
}

/// Smallest t with x - c = H b, ||b||_inf <= t, and a minimizing b.
/// Empty when x - c is outside the range of H.
struct LatentFit {
  double t = 0.0;
  Vector b;
};

inline std::optional<LatentFit> min_latent_norm(const Matrix& h, const Vector& target,
                                                bool tie_break = false) {
  if (h.rows() != target.size()) {
    throw DimensionError("min_latent_norm: dimension mismatch");
  }
  const int n = static_cast<int>(h.rows());
  const int k = static_cast<int>(h.cols());
  lp::LpProblem p;
  const lp::VarBlock b = p.add_variables("b", k);
  const lp::VarBlock t = p.add_variables("t", 1, 0.0, lp::kInf);
  for (int r = 0; r < n; ++r) {
    std::vector<lp::Term> terms;
    for (int c = 0; c < k; ++c) terms.push_back({b[c], h(r, c)});
    p.add_equality(std::move(terms), target(r));
  }
  for (int c = 0; c < k; ++c) {
    p.add_inequality({{b[c], 1.0}, {t[0], -1.0}}, 0.0);
    p.add_inequality({{b[c], -1.0}, {t[0], -1.0}}, 0.0);
  }
  p.set_objective(t[0], 1.0);
  if (tie_break) lp::add_lexicographic_regularizer(p, b);
  const auto sol = lp::solve(p);
  if (sol.status == lp::Status::Infeasible) return std::nullopt;
  if (!sol.optimal()) {
    throw SolverError(std::string("min_latent_norm: LP returned ") + lp::to_string(sol.status));
  }
  LatentFit fit;
  fit.t = sol.value(t[0]);
  fit.b = sol.primal.segment(b.start, k);
  return fit;
}

/// Point membership with tolerance `tol` on the latent bound.
inline bool contains_point(const Zonotope& z, const Vector& x, double tol = 1e-7) {
  if (z.dim() != x.size()) {
    throw DimensionError("contains_point: dimension mismatch");
  }
  const auto fit = min_latent_norm(z.generators(), x - z.center());
  return fit.has_value() && fit->t <= 1.0 + tol;
}

}  // namespace rci
