#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "rci/runtime.hpp"
#include "rci/scenario.hpp"

using namespace rci;

namespace {

RciContract scalar_contract() {
  RciContract c;
  c.T = Matrix::Constant(1, 1, 1.0);
  c.M = Matrix::Constant(1, 1, -0.5);
  c.k = 1;
  return c;
}

NetworkSystem scalar_net() {
  Subsystem s;
  s.id = "x";
  s.A = Matrix::Constant(1, 1, 0.5);
  s.B = Matrix::Constant(1, 1, 1.0);
  s.Gx = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gu = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gd = Zonotope(Matrix::Constant(1, 1, 1.0));
  return NetworkSystem({s}, {});
}

NetworkSystem rotation() {
  scenario::RotationParams p;
  p.theta = std::numbers::pi / 6;
  return scenario::gen_rotation(p);
}

}  // namespace

TEST(Runtime, ScalarControl) {
  const ControlStep s = invariance_control(scalar_contract(), Vector::Constant(1, 0.7));
  EXPECT_NEAR(s.b(0), 0.7, 1e-12);
  EXPECT_NEAR(s.u(0), -0.35, 1e-12);
  EXPECT_NEAR(s.margin, 0.7, 1e-12);
  // 0.5 * 0.7 - 0.35 + d = d, inside [-1, 1] for every admissible d.
  EXPECT_NEAR(0.5 * 0.7 + s.u(0), 0.0, 1e-12);
}

TEST(Runtime, OriginMapsToZeroInput) {
  const ControlStep s = invariance_control(scalar_contract(), Vector::Zero(1));
  EXPECT_EQ(s.u(0), 0.0);
}

TEST(Runtime, BoundaryPointHasUnitMargin) {
  Rng rng(8);
  RciContract c;
  c.k = 5;
  c.T = Matrix(2, 5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 5; ++j) c.T(i, j) = rng.symmetric();
  c.M = Matrix::Ones(1, 5);
  // A support point: b0 = sign(T' w) maximizes w' T b over the unit box.
  Vector w(2);
  w << 0.3, -1.0;
  Vector b0 = c.T.transpose() * w;
  for (int j = 0; j < 5; ++j) b0(j) = b0(j) >= 0 ? 1.0 : -1.0;
  const ControlStep s = invariance_control(c, c.T * b0);
  EXPECT_NEAR(s.margin, 1.0, 1e-6);
  EXPECT_LE(s.residual, 1e-9);
}

TEST(Runtime, OutsideStateThrows) {
  EXPECT_THROW(invariance_control(scalar_contract(), Vector::Constant(1, 1.5)), StateOutsideRci);
  RciContract seg;
  seg.k = 1;
  seg.T = Matrix::Ones(2, 1);
  seg.M = Matrix::Ones(1, 1);
  Vector off(2);
  off << 0.1, 0.0;
  try {
    invariance_control(seg, off);
    FAIL();
  } catch (const StateOutsideRci& e) {
    EXPECT_TRUE(std::isinf(e.margin()));
  }
}

TEST(Runtime, ScalarVerifyPasses) {
  VerifyOptions vo;
  vo.samples = 10000;
  vo.seed = 7;
  const VerifyReport r = verify_one_step(scalar_net(), {scalar_contract()}, vo);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LE(r.worst_margin, 1.0 + 1e-6);
  EXPECT_GT(r.checks, 10000);
}

TEST(Runtime, CorruptedContractIsCaught) {
  const NetworkSystem net = rotation();
  const auto res = synth_network(net);
  ASSERT_TRUE(res.converged());
  auto bad = res.contracts;
  for (auto& c : bad) c.T *= 0.9;
  VerifyOptions vo;
  vo.samples = 500;
  vo.seed = 1;
  const VerifyReport r = verify_one_step(net, bad, vo);
  EXPECT_GT(r.violations, 0);
  ASSERT_FALSE(r.counterexamples.empty());
  EXPECT_GT(r.counterexamples[0].margin, 1.0);
  EXPECT_EQ(to_json(r)["passed"], false);
}

TEST(Runtime, VerifyIsSeedDeterministic) {
  const NetworkSystem net = rotation();
  const auto res = synth_network(net);
  VerifyOptions a, b;
  a.samples = b.samples = 300;
  a.threads = 1;
  b.threads = 3;
  EXPECT_EQ(to_json(verify_one_step(net, res.contracts, a)).dump(),
            to_json(verify_one_step(net, res.contracts, b)).dump());
}

TEST(Runtime, ZeroDisturbanceStaysAtOrigin) {
  Subsystem s;
  s.id = "x";
  s.A = Matrix::Constant(1, 1, 0.5);
  s.B = Matrix::Constant(1, 1, 1.0);
  s.Gx = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gu = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gd = Zonotope(Matrix::Zero(1, 0));
  const NetworkSystem net({s}, {});
  SimulationOptions so;
  so.steps = 20;
  const TrajectoryLog log = simulate_closed_loop(net, {scalar_contract()}, so);
  ASSERT_EQ(log.entries.size(), 20u);
  for (const auto& e : log.entries) {
    EXPECT_EQ(e.x(0), 0.0);
    EXPECT_EQ(e.u(0), 0.0);
  }
}

TEST(Runtime, ScalarSimulationStaysInside) {
  for (auto mode : {DisturbanceMode::Uniform, DisturbanceMode::Corner, DisturbanceMode::WorstAxis}) {
    SimulationOptions so;
    so.steps = 100;
    so.seed = 3;
    so.mode = mode;
    const TrajectoryLog log = simulate_closed_loop(scalar_net(), {scalar_contract()}, so);
    EXPECT_FALSE(log.aborted) << to_string(mode);
    for (const auto& e : log.entries) {
      EXPECT_LE(std::abs(e.x(0)), 1.0 + 1e-9);
      EXPECT_LE(std::abs(e.u(0)), 0.5 + 1e-9);
    }
  }
}

TEST(Runtime, SimulationAbortsOnBadContract) {
  RciContract bad = scalar_contract();
  bad.T(0, 0) = 0.5;
  bad.M(0, 0) = -0.25;
  SimulationOptions so;
  so.steps = 50;
  so.mode = DisturbanceMode::Corner;
  const TrajectoryLog log = simulate_closed_loop(scalar_net(), {bad}, so);
  EXPECT_TRUE(log.aborted);
  EXPECT_FALSE(all_members(log));
}

TEST(Runtime, SimulationDeterministicCsv) {
  const NetworkSystem net = rotation();
  const auto res = synth_network(net);
  SimulationOptions so;
  so.steps = 30;
  so.seed = 99;
  std::ostringstream a, b;
  write_csv(a, simulate_closed_loop(net, res.contracts, so));
  write_csv(b, simulate_closed_loop(net, res.contracts, so));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t,subsystem,x0,x1,u0,u1,d0,d1,member");
}

TEST(Runtime, TubeWithZeroDisturbanceTracksExactly) {
  Subsystem s;
  s.id = "x";
  s.A = Matrix::Constant(1, 1, 0.5);
  s.B = Matrix::Constant(1, 1, 1.0);
  s.Gx = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gu = Zonotope(Matrix::Constant(1, 1, 10.0));
  s.Gd = Zonotope(Matrix::Zero(1, 0));
  const NetworkSystem net({s}, {});
  std::vector<std::vector<Vector>> inputs;
  for (int t = 0; t < 10; ++t) inputs.push_back({Vector::Constant(1, t % 2 ? 1.0 : -1.0)});
  const NominalTrajectory nom = propagate_nominal(net, {Vector::Constant(1, 3.0)}, inputs);
  SimulationOptions so;
  so.x0 = {Vector::Constant(1, 0.8)};
  const TrajectoryLog log = simulate_closed_loop(net, {scalar_contract()}, so, &nom);
  ASSERT_EQ(log.entries.size(), 10u);
  // e(t+1) = 0.5 e + M b(e) = 0 after one step.
  EXPECT_NEAR(log.entries[0].x(0) - log.entries[0].x_nominal(0), 0.8, 1e-12);
  for (std::size_t t = 1; t < 10; ++t) EXPECT_NEAR(log.entries[t].x(0), log.entries[t].x_nominal(0), 1e-12);
  for (const auto& e : log.entries) EXPECT_LE(std::abs(e.u(0) - e.u_nominal(0)), 0.5 + 1e-12);
}

TEST(Runtime, NominalJsonValidation) {
  const NetworkSystem net = scalar_net();
  std::vector<std::vector<Vector>> inputs(5, {Vector::Constant(1, 0.2)});
  const NominalTrajectory nom = propagate_nominal(net, {Vector::Constant(1, 1.0)}, inputs);
  Json j = to_json(net, nom);
  const NominalTrajectory back = nominal_from_json(net, j);
  EXPECT_EQ(back.steps.size(), 5u);
  j[2]["x"]["x"][0] = j[2]["x"]["x"][0].get<double>() + 1e-6;
  EXPECT_THROW(nominal_from_json(net, j), ParseError);
  EXPECT_THROW(nominal_from_json(net, Json::array()), ParseError);
}
