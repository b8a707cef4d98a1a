#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rci/linalg.hpp"
#include "rci/lp.hpp"

namespace rci::lp {

struct SolveOptions {
  double feas_tol = kDefaultFeasTol;
  double opt_tol = kDefaultOptTol;
  /// 0 selects a limit proportional to the problem size.
  int max_iterations = 0;
};

namespace detail {

/// Dense bounded-variable primal simplex on the full tableau B^-1 [A | I_art].
///
/// Inequalities get a nonnegative slack; rows whose starting residual cannot
/// be absorbed by a slack get an artificial. Phase 1 minimizes the sum of
/// artificials, phase 2 the user objective with artificials fixed at zero.
/// Pricing is Dantzig with a Harris ratio test; a run of degenerate pivots
/// switches to Bland's rule until progress resumes. The tableau is rebuilt
/// from an LU factorization of the basis every kRefactorEvery pivots and
/// before optimality is declared.
class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& p, const SolveOptions& opt) : problem_(p), opt_(opt) {
    build();
  }

  LpSolution run() {
    LpSolution sol;
    const int limit = opt_.max_iterations > 0 ? opt_.max_iterations : 50 * (m_ + n_) + 1000;

    if (n_art_ > 0) {
      set_phase1_costs();
      const auto phase1 = iterate(limit);
      sol.iterations = iterations_;
      if (phase1 != Outcome::Optimal) {
        sol.status = Status::NumericalFailure;
        return sol;
      }
      double infeas = 0.0;
      for (int j = n_struct_ + n_slack_; j < n_; ++j) infeas = std::max(infeas, std::abs(x_(j)));
      if (infeas > opt_.feas_tol) {
        sol.status = Status::Infeasible;
        return sol;
      }
      for (int j = n_struct_ + n_slack_; j < n_; ++j) {
        lo_(j) = 0.0;
        up_(j) = 0.0;
        if (pos_[j] < 0) {
          x_(j) = 0.0;
          state_[j] = NonBasic::Fixed;
        }
      }
    }

    set_phase2_costs();
    const auto phase2 = iterate(limit);
    sol.iterations = iterations_;
    if (phase2 == Outcome::Unbounded) {
      sol.status = Status::Unbounded;
      return sol;
    }
    if (phase2 != Outcome::Optimal) {
      sol.status = Status::NumericalFailure;
      return sol;
    }

    sol.primal = x_.head(n_struct_);
    if (!verify(sol.primal)) {
      sol.status = Status::NumericalFailure;
      sol.primal.resize(0);
      return sol;
    }
    sol.status = Status::Optimal;
    double obj = 0.0;
    for (int j = 0; j < n_struct_; ++j) obj += problem_.objective()[j] * sol.primal(j);
    sol.objective = obj;
    return sol;
  }

 private:
  enum class NonBasic : std::uint8_t { Basic, AtLower, AtUpper, Free, Fixed };
  enum class Outcome { Optimal, Unbounded, IterationLimit, Singular };

  static constexpr int kRefactorEvery = 100;
  static constexpr int kDegenerateSwitch = 50;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kHarrisTol = 1e-9;

  void build() {
    n_struct_ = problem_.num_variables();
    n_slack_ = problem_.num_inequalities();
    const int n_eq = problem_.num_equalities();
    m_ = n_eq + n_slack_;

    // Starting point of the structural variables.
    Vector xs(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
      const double lo = problem_.lower()[j];
      const double up = problem_.upper()[j];
      if (std::isfinite(lo)) xs(j) = lo;
      else if (std::isfinite(up)) xs(j) = up;
      else xs(j) = 0.0;
    }

    // Row residuals at that point decide where artificials are needed.
    std::vector<double> resid(m_);
    for (int r = 0; r < m_; ++r) {
      const Row& row = r < n_eq ? problem_.equalities()[r] : problem_.inequalities()[r - n_eq];
      double s = 0.0;
      for (const auto& t : row.terms) s += t.coef * xs(t.var);
      resid[r] = row.rhs - s;
    }
    std::vector<int> art_row;
    for (int r = 0; r < m_; ++r) {
      if (r < n_eq || resid[r] < 0.0) art_row.push_back(r);
    }
    n_art_ = static_cast<int>(art_row.size());
    n_ = n_struct_ + n_slack_ + n_art_;

    a_ = Matrix::Zero(m_, n_);
    b_ = Vector::Zero(m_);
    for (int r = 0; r < m_; ++r) {
      const Row& row = r < n_eq ? problem_.equalities()[r] : problem_.inequalities()[r - n_eq];
      for (const auto& t : row.terms) a_(r, t.var) = t.coef;
      b_(r) = row.rhs;
    }
    for (int s = 0; s < n_slack_; ++s) a_(n_eq + s, n_struct_ + s) = 1.0;

    lo_.resize(n_);
    up_.resize(n_);
    x_ = Vector::Zero(n_);
    state_.assign(n_, NonBasic::AtLower);
    pos_.assign(n_, -1);
    basis_.assign(m_, -1);

    for (int j = 0; j < n_struct_; ++j) {
      lo_(j) = problem_.lower()[j];
      up_(j) = problem_.upper()[j];
      x_(j) = xs(j);
      state_[j] = initial_state(j);
    }
    for (int s = 0; s < n_slack_; ++s) {
      const int j = n_struct_ + s;
      lo_(j) = 0.0;
      up_(j) = kInf;
    }
    for (int a = 0; a < n_art_; ++a) {
      const int r = art_row[a];
      const int j = n_struct_ + n_slack_ + a;
      a_(r, j) = resid[r] >= 0.0 ? 1.0 : -1.0;
      lo_(j) = 0.0;
      up_(j) = kInf;
      x_(j) = std::abs(resid[r]);
      make_basic(j, r);
    }
    for (int r = n_eq; r < m_; ++r) {
      if (basis_[r] < 0) {
        const int j = n_struct_ + (r - n_eq);
        x_(j) = resid[r];
        make_basic(j, r);
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (pos_[j] < 0 && state_[j] == NonBasic::Basic) state_[j] = NonBasic::AtLower;
    }
  }

  NonBasic initial_state(int j) const {
    if (lo_(j) == up_(j)) return NonBasic::Fixed;
    if (std::isfinite(lo_(j))) return NonBasic::AtLower;
    if (std::isfinite(up_(j))) return NonBasic::AtUpper;
    return NonBasic::Free;
  }

  void make_basic(int j, int r) {
    basis_[r] = j;
    pos_[j] = r;
    state_[j] = NonBasic::Basic;
  }

  void set_phase1_costs() {
    cost_ = Vector::Zero(n_);
    for (int j = n_struct_ + n_slack_; j < n_; ++j) cost_(j) = 1.0;
  }

  void set_phase2_costs() {
    cost_ = Vector::Zero(n_);
    for (int j = 0; j < n_struct_; ++j) cost_(j) = problem_.objective()[j];
  }

  /// Rebuilds tableau, basic values and reduced costs from the basis.
  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) {
      tab_.resize(0, n_);
      d_ = cost_;
      return true;
    }
    Matrix basis_mat(m_, m_);
    for (int r = 0; r < m_; ++r) basis_mat.col(r) = a_.col(basis_[r]);
    Eigen::PartialPivLU<Matrix> lu(basis_mat);
    // Cheap singularity screen on the U factor.
    const Vector diag = lu.matrixLU().diagonal().cwiseAbs();
    if (diag.minCoeff() < 1e-13 * std::max(1.0, diag.maxCoeff())) return false;
    tab_.noalias() = lu.solve(a_);
    Vector rhs = b_;
    for (int j = 0; j < n_; ++j) {
      if (pos_[j] < 0 && x_(j) != 0.0) rhs.noalias() -= a_.col(j) * x_(j);
    }
    const Vector xb = lu.solve(rhs);
    for (int r = 0; r < m_; ++r) x_(basis_[r]) = xb(r);
    Vector cb(m_);
    for (int r = 0; r < m_; ++r) cb(r) = cost_(basis_[r]);
    d_ = cost_;
    d_.noalias() -= tab_.transpose() * cb;
    for (int r = 0; r < m_; ++r) d_(basis_[r]) = 0.0;
    return true;
  }

  Outcome iterate(int limit) {
    if (!refactor()) return Outcome::Singular;
    bool bland = false;
    int degenerate_run = 0;
    bool verified_optimal = false;

    while (true) {
      if (iterations_ >= limit) return Outcome::IterationLimit;
      if (since_refactor_ >= kRefactorEvery) {
        if (!refactor()) return Outcome::Singular;
      }

      int q = -1;
      double dir = 0.0;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        const NonBasic st = state_[j];
        if (st == NonBasic::Basic || st == NonBasic::Fixed) continue;
        const double dj = d_(j);
        double cand_dir = 0.0;
        if ((st == NonBasic::AtLower || st == NonBasic::Free) && dj < -opt_.opt_tol) cand_dir = 1.0;
        else if ((st == NonBasic::AtUpper || st == NonBasic::Free) && dj > opt_.opt_tol) cand_dir = -1.0;
        if (cand_dir == 0.0) continue;
        if (bland) {
          q = j;
          dir = cand_dir;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
          dir = cand_dir;
        }
      }

      if (q < 0) {
        // Confirm against a fresh factorization before trusting optimality.
        if (since_refactor_ == 0 || verified_optimal) return Outcome::Optimal;
        if (!refactor()) return Outcome::Singular;
        verified_optimal = true;
        continue;
      }
      verified_optimal = false;

      // Ratio test.
      const double flip = up_(q) - lo_(q);
      int leave = -1;
      double theta = kInf;
      if (bland) {
        for (int r = 0; r < m_; ++r) {
          const double alpha = dir * tab_(r, q);
          double ratio = kInf;
          const int jb = basis_[r];
          if (alpha > kPivotTol && std::isfinite(lo_(jb))) ratio = std::max(0.0, (x_(jb) - lo_(jb)) / alpha);
          else if (alpha < -kPivotTol && std::isfinite(up_(jb))) ratio = std::max(0.0, (up_(jb) - x_(jb)) / -alpha);
          if (ratio < theta || (ratio == theta && leave >= 0 && jb < basis_[leave])) {
            theta = ratio;
            leave = r;
          }
        }
      } else {
        double bound = kInf;
        for (int r = 0; r < m_; ++r) {
          const double alpha = dir * tab_(r, q);
          const int jb = basis_[r];
          if (alpha > kPivotTol && std::isfinite(lo_(jb))) {
            bound = std::min(bound, (x_(jb) - lo_(jb) + kHarrisTol) / alpha);
          } else if (alpha < -kPivotTol && std::isfinite(up_(jb))) {
            bound = std::min(bound, (up_(jb) - x_(jb) + kHarrisTol) / -alpha);
          }
        }
        double best_alpha = 0.0;
        for (int r = 0; r < m_; ++r) {
          const double alpha = dir * tab_(r, q);
          const int jb = basis_[r];
          double ratio = kInf;
          if (alpha > kPivotTol && std::isfinite(lo_(jb))) ratio = (x_(jb) - lo_(jb)) / alpha;
          else if (alpha < -kPivotTol && std::isfinite(up_(jb))) ratio = (up_(jb) - x_(jb)) / -alpha;
          else continue;
          if (ratio <= bound && std::abs(alpha) > best_alpha) {
            best_alpha = std::abs(alpha);
            leave = r;
            theta = std::max(0.0, ratio);
          }
        }
      }

      if (flip <= theta) {
        if (!std::isfinite(flip)) return Outcome::Unbounded;
        // Bound flip of the entering variable, no basis change.
        apply_step(q, dir, flip);
        x_(q) = dir > 0 ? up_(q) : lo_(q);
        state_[q] = dir > 0 ? NonBasic::AtUpper : NonBasic::AtLower;
        ++iterations_;
        degenerate_run = 0;
        bland = false;
        continue;
      }
      if (leave < 0) return Outcome::Unbounded;

      const int jl = basis_[leave];
      const double alpha_l = dir * tab_(leave, q);
      apply_step(q, dir, theta);
      if (alpha_l > 0) {
        x_(jl) = lo_(jl);
        state_[jl] = lo_(jl) == up_(jl) ? NonBasic::Fixed : NonBasic::AtLower;
      } else {
        x_(jl) = up_(jl);
        state_[jl] = NonBasic::AtUpper;
      }
      pos_[jl] = -1;
      pivot(leave, q);
      ++iterations_;
      ++since_refactor_;

      if (theta < 1e-12) {
        if (++degenerate_run > kDegenerateSwitch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  void apply_step(int q, double dir, double theta) {
    if (theta == 0.0) return;
    x_(q) += dir * theta;
    for (int r = 0; r < m_; ++r) {
      const double t = tab_(r, q);
      if (t != 0.0) x_(basis_[r]) -= dir * t * theta;
    }
  }

  void pivot(int r, int q) {
    const double piv = tab_(r, q);
    tab_.row(r) /= piv;
    Vector colq = tab_.col(q);
    colq(r) = 0.0;
    const Eigen::RowVectorXd prow = tab_.row(r);
    for (int i = 0; i < m_; ++i) {
      if (colq(i) != 0.0) tab_.row(i).noalias() -= colq(i) * prow;
    }
    const double dq = d_(q);
    d_.noalias() -= dq * prow.transpose();
    d_(q) = 0.0;
    basis_[r] = q;
    pos_[q] = r;
    state_[q] = NonBasic::Basic;
  }

  /// Residual contract of LpSolution, checked on the original rows.
  bool verify(const Vector& x) const {
    const double tol = opt_.feas_tol;
    for (int j = 0; j < n_struct_; ++j) {
      if (x(j) < problem_.lower()[j] - tol || x(j) > problem_.upper()[j] + tol) return false;
    }
    for (const auto& row : problem_.equalities()) {
      double s = 0.0;
      for (const auto& t : row.terms) s += t.coef * x(t.var);
      if (std::abs(s - row.rhs) > tol) return false;
    }
    for (const auto& row : problem_.inequalities()) {
      double s = 0.0;
      for (const auto& t : row.terms) s += t.coef * x(t.var);
      if (s - row.rhs > tol) return false;
    }
    return true;
  }

  const LpProblem& problem_;
  SolveOptions opt_;
  int m_ = 0;
  int n_ = 0;
  int n_struct_ = 0;
  int n_slack_ = 0;
  int n_art_ = 0;
  Matrix a_;
  Vector b_;
  Matrix tab_;
  Vector lo_, up_, x_, cost_, d_;
  std::vector<NonBasic> state_;
  std::vector<int> pos_;
  std::vector<int> basis_;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace detail

/// Solves `p`. Never throws on numerical trouble; that is reported through
/// Status::NumericalFailure. Reentrant: distinct problems may be solved
/// concurrently.
inline LpSolution solve(const LpProblem& p, const SolveOptions& opt) {
  p.validate();
  detail::DenseSimplex simplex(p, opt);
  return simplex.run();
}

inline LpSolution solve(const LpProblem& p, double feas_tol = kDefaultFeasTol) {
  SolveOptions opt;
  opt.feas_tol = feas_tol;
  return solve(p, opt);
}

}  // namespace rci::lp
