#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "rci/lp.hpp"
#include "rci/random.hpp"
#include "rci/simplex.hpp"

using namespace rci;
using namespace rci::lp;

TEST(LpProblem, RowsAreCanonical) {
  LpProblem p;
  const VarBlock x = p.add_variables("x", 3);
  p.add_equality({{x[2], 1.0}, {x[0], 2.0}, {x[2], -1.0}, {x[1], 0.0}}, 1.0);
  ASSERT_EQ(p.equalities()[0].terms.size(), 1u);
  EXPECT_EQ(p.equalities()[0].terms[0].var, x[0]);
  EXPECT_DOUBLE_EQ(p.equalities()[0].terms[0].coef, 2.0);
  EXPECT_THROW(p.add_inequality({{7, 1.0}}, 0.0), Error);
  EXPECT_THROW(p.add_variables("bad", 1, 1.0, 0.0), Error);
  EXPECT_EQ(p.block("x").size, 3);
  EXPECT_THROW(p.block("nope"), Error);
}

TEST(Simplex, SmallKnownOptimum) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0 -> (8/5, 6/5)
  LpProblem p;
  const VarBlock v = p.add_variables("v", 2, 0.0, kInf);
  p.add_inequality({{v[0], 1}, {v[1], 2}}, 4);
  p.add_inequality({{v[0], 3}, {v[1], 1}}, 6);
  p.set_objective(v[0], -1);
  p.set_objective(v[1], -1);
  const LpSolution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.value(v[0]), 1.6, 1e-9);
  EXPECT_NEAR(s.value(v[1]), 1.2, 1e-9);
  EXPECT_NEAR(s.objective, -2.8, 1e-9);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  LpProblem inf;
  const VarBlock x = inf.add_variables("x", 1, 0.0, kInf);
  inf.add_inequality({{x[0], 1}}, -1);
  EXPECT_EQ(solve(inf).status, Status::Infeasible);

  LpProblem unb;
  const VarBlock y = unb.add_variables("y", 2, 0.0, kInf);
  unb.add_inequality({{y[0], 1}, {y[1], -1}}, 1);
  unb.set_objective(y[1], -1);
  EXPECT_EQ(solve(unb).status, Status::Unbounded);
}

TEST(Simplex, EqualitiesAndFreeVariables) {
  // min |a| + |b| s.t. a + b = 3, a - b = 1 -> a = 2, b = 1
  LpProblem p;
  const VarBlock v = p.add_variables("v", 2);
  p.add_equality({{v[0], 1}, {v[1], 1}}, 3);
  p.add_equality({{v[0], 1}, {v[1], -1}}, 1);
  add_l1_objective(p, v);
  const LpSolution s = solve(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.value(v[0]), 2.0, 1e-9);
  EXPECT_NEAR(s.value(v[1]), 1.0, 1e-9);
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
}

TEST(Simplex, InconsistentEqualitiesAreInfeasible) {
  LpProblem p;
  const VarBlock v = p.add_variables("v", 1);
  p.add_equality({{v[0], 1}}, 1);
  p.add_equality({{v[0], 2}}, 3);
  EXPECT_EQ(solve(p).status, Status::Infeasible);
}

TEST(Simplex, MatchesVertexEnumeration) {
  Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const int m = n + 2 + trial % 4;
    oracle::Mat a(m + 2 * n, n);
    oracle::Vec b(m + 2 * n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = rng.symmetric();
      b(i) = rng.uniform(-0.5, 1.0);
    }
    // Box -5 <= x <= 5 keeps the oracle bounded.
    for (int j = 0; j < n; ++j) {
      a.row(m + 2 * j).setZero();
      a(m + 2 * j, j) = 1;
      b(m + 2 * j) = 5;
      a.row(m + 2 * j + 1).setZero();
      a(m + 2 * j + 1, j) = -1;
      b(m + 2 * j + 1) = 5;
    }
    oracle::Vec c(n);
    for (int j = 0; j < n; ++j) c(j) = rng.symmetric();
    const double ref = oracle::brute_force_lp(c, a, b);

    LpProblem p;
    const VarBlock x = p.add_variables("x", n, -5.0, 5.0);
    for (int i = 0; i < m; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j) t.push_back({x[j], a(i, j)});
      p.add_inequality(t, b(i));
    }
    for (int j = 0; j < n; ++j) p.set_objective(x[j], c(j));
    const LpSolution s = solve(p);
    if (std::isinf(ref)) {
      EXPECT_EQ(s.status, Status::Infeasible) << "trial " << trial;
    } else {
      ASSERT_EQ(s.status, Status::Optimal) << "trial " << trial;
      EXPECT_NEAR(s.objective, ref, 1e-7) << "trial " << trial;
      ++solved;
    }
  }
  EXPECT_GT(solved, 100);
}

TEST(Simplex, Deterministic) {
  Rng rng(3);
  LpProblem p;
  const VarBlock x = p.add_variables("x", 6);
  for (int i = 0; i < 4; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < 6; ++j) t.push_back({x[j], rng.symmetric()});
    p.add_equality(t, rng.symmetric());
  }
  add_l1_objective(p, x);
  const LpSolution a = solve(p);
  const LpSolution b = solve(p);
  ASSERT_TRUE(a.optimal());
  EXPECT_EQ(a.iterations, b.iterations);
  for (int v = 0; v < p.num_variables(); ++v) EXPECT_EQ(a.primal(v), b.primal(v));
}

TEST(Simplex, DegenerateProblemTerminates) {
  // Many redundant constraints through the optimum.
  LpProblem p;
  const VarBlock x = p.add_variables("x", 2, 0.0, kInf);
  for (int k = 1; k <= 30; ++k) p.add_inequality({{x[0], 1.0}, {x[1], static_cast<double>(k)}}, 1.0);
  p.add_inequality({{x[0], 1.0}}, 1.0);
  p.set_objective(x[0], -1.0);
  p.set_objective(x[1], -1.0);
  const LpSolution s = solve(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, -1.0, 1e-9);
}

TEST(Mps, RoundTripIsExact) {
  LpProblem p;
  const VarMatrix m = p.add_matrix("T", 2, 2);
  const VarBlock s = p.add_variables("s", 1, 0.0, 3.0);
  p.add_equality({{m(0, 0), 1.0 / 3.0}, {m(1, 1), -2.5}}, 0.1);
  p.add_inequality({{m(0, 1), 1e-17}, {s[0], 7.0}}, 1e10);
  p.set_objective(s[0], std::acos(-1.0));
  std::ostringstream out;
  write_mps(p, out);
  std::istringstream in(out.str());
  const LpProblem q = read_mps(in);
  EXPECT_TRUE(p == q);
  EXPECT_EQ(q.block("T").size, 4);
}

TEST(Mps, RejectsGarbage) {
  std::istringstream in("NAME X\nROWS\n Q bad\nENDATA\n");
  EXPECT_THROW(read_mps(in), Error);
}
