#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rci/scenario.hpp"

using namespace rci;
using namespace rci::scenario;

TEST(Scenario, RotationDefaults) {
  RotationParams p;
  p.theta = std::numbers::pi / 6;
  const NetworkSystem net = gen_rotation(p);
  EXPECT_EQ(net.size(), 3);
  EXPECT_EQ(net.couplings().size(), 4u);
  Matrix a(2, 2);
  const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
  a << 0.8 * c, -0.8 * s, 0.8 * s, 0.8 * c;
  EXPECT_TRUE(net[0].A.isApprox(a, 1e-15));
  EXPECT_EQ(net[0].B, Matrix::Identity(2, 2));
  EXPECT_EQ(net[0].Gu.radii(), Vector::Constant(2, 0.65));
  EXPECT_EQ(net[0].Gd.radii(), Vector::Constant(2, 0.4));
}

TEST(Scenario, RotationChainShape) {
  RotationParams p;
  p.n_subsystems = 2;
  EXPECT_EQ(gen_rotation(p).couplings().size(), 2u);
  p.beta = 0.0;
  p.n_subsystems = 5;
  EXPECT_TRUE(gen_rotation(p).couplings().empty());
  p.theta = std::nan("");
  EXPECT_THROW(gen_rotation(p), Error);
}

TEST(Scenario, RandomFieldDeterministic) {
  RandomFieldParams p;
  p.n_subsystems = 20;
  p.radius = 30;
  p.seed = 5;
  EXPECT_EQ(serialize_network(gen_random_field(p).network), serialize_network(gen_random_field(p).network));
  p.seed = 6;
  RandomFieldParams q = p;
  q.seed = 5;
  EXPECT_NE(serialize_network(gen_random_field(p).network), serialize_network(gen_random_field(q).network));
}

TEST(Scenario, RandomFieldMatchesPairwiseRecount) {
  RandomFieldParams p;
  p.n_subsystems = 60;
  p.radius = 15;
  p.lambda = 0.01;
  p.seed = 3;
  const RandomField f = gen_random_field(p);
  const Json pts = f.network.metadata()["points"];
  ASSERT_EQ(pts.size(), 60u);
  std::vector<int> degree(60, 0);
  std::size_t pairs = 0;
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 60; ++j) {
      if (i == j) continue;
      const double dx = pts[i][0].get<double>() - pts[j][0].get<double>();
      const double dy = pts[i][1].get<double>() - pts[j][1].get<double>();
      if (std::hypot(dx, dy) < 15.0) {
        ++degree[i];
        ++pairs;
      }
    }
  }
  EXPECT_EQ(f.network.couplings().size(), pairs);
  for (int i = 0; i < 60; ++i) EXPECT_EQ(static_cast<int>(f.network.incoming(i).size()), degree[i]);
  for (const auto& c : f.network.couplings()) {
    const int i = f.network.index_of(c.to), j = f.network.index_of(c.from);
    const double d = std::hypot(pts[i][0].get<double>() - pts[j][0].get<double>(),
                                pts[i][1].get<double>() - pts[j][1].get<double>());
    EXPECT_DOUBLE_EQ((*c.A)(0, 0), 0.01 / d);
    EXPECT_EQ((*c.A)(0, 1), 0.0);
  }
}

TEST(Scenario, RandomFieldColorsAndConstraints) {
  RandomFieldParams p;
  p.n_subsystems = 4;
  p.radius = 0;
  const NetworkSystem net = gen_random_field(p).network;
  EXPECT_TRUE(net.couplings().empty());
  Matrix red(2, 2), blue(2, 2), b(2, 1);
  red << 1, 1, 1, 2;
  blue << 1, 1, 0, 1;
  b << 0, 1;
  EXPECT_EQ(net[0].A, red);
  EXPECT_EQ(net[1].A, blue);
  EXPECT_EQ(net[2].B, b);
  EXPECT_EQ(net[0].Gx.radii(), Vector::Constant(2, 10.0));
  EXPECT_EQ(net[0].Gu.radii(), Vector::Constant(1, 10.0));
  EXPECT_EQ(net[0].Gd.radii(), Vector::Constant(2, 0.2));
  p.n_subsystems = 3;
  EXPECT_THROW(gen_random_field(p), Error);
}

TEST(Scenario, RandomFieldTwoNodesCoupling) {
  // Seed search for two points closer than R.
  for (std::uint64_t seed = 1; seed < 1000; ++seed) {
    RandomFieldParams p;
    p.n_subsystems = 2;
    p.radius = 30;
    p.lambda = 0.01;
    p.seed = seed;
    const RandomField f = gen_random_field(p);
    if (f.network.couplings().empty()) continue;
    const double d = (f.points[0] - f.points[1]).norm();
    ASSERT_LT(d, 30.0);
    EXPECT_EQ(f.network.couplings().size(), 2u);
    EXPECT_EQ(*f.network.couplings()[0].A, (0.01 / d) * Matrix::Identity(2, 2));
    return;
  }
  FAIL() << "no seed produced a coupled pair";
}

TEST(Scenario, RandomFieldRoundTrips) {
  RandomFieldParams p;
  p.n_subsystems = 10;
  p.radius = 40;
  const NetworkSystem net = gen_random_field(p).network;
  EXPECT_EQ(serialize_network(parse_network(serialize_network(net))), serialize_network(net));
}

TEST(Scenario, HvacFormulas) {
  const HvacParams p;
  const NetworkSystem net = gen_hvac(p);
  ASSERT_EQ(net.size(), 6);
  const double g = 900.0 / 1375.0;
  // Room 6 touches 1, 2, 3, 5; room 4 touches only 5.
  EXPECT_NEAR(net[5].A(0, 0), 1.0 - g * (4.0 / 14.0 + 1.0 / 50.0), 1e-15);
  EXPECT_NEAR(net[3].A(0, 0), 1.0 - g * (1.0 / 14.0 + 1.0 / 50.0), 1e-15);
  EXPECT_NEAR(net[4].A(0, 0), 1.0 - g * (2.0 / 14.0 + 1.0 / 50.0), 1e-15);
  EXPECT_NEAR(net[0].B(0, 0), g, 1e-15);
  EXPECT_EQ(net.couplings().size(), 10u);
  for (const auto& c : net.couplings()) EXPECT_NEAR((*c.A)(0, 0), 900.0 / (14.0 * 1375.0), 1e-15);
  const Aggregate agg = aggregate(net);
  for (int i = 0; i < 6; ++i) {
    EXPECT_GT(agg.A(i, i), 0.0);
    EXPECT_LT(agg.A(i, i), 1.0);
    EXPECT_GE(agg.A.row(i).sum(), 0.0);
  }
  EXPECT_DOUBLE_EQ(net[0].Gu.radii()(0), 2.0);
  EXPECT_DOUBLE_EQ(net[0].Gd.radii()(0), g * 1.6);
  EXPECT_DOUBLE_EQ(net.metadata()["input_offset"].get<double>(), 4.5);
}

TEST(Scenario, HvacEmptyAdjacency) {
  HvacParams p;
  p.adjacency.clear();
  const NetworkSystem net = gen_hvac(p);
  EXPECT_TRUE(net.couplings().empty());
  EXPECT_NEAR(net[2].A(0, 0), 1.0 - 900.0 / (1375.0 * 50.0), 1e-15);
}

TEST(Scenario, HvacAsymmetricAdjacencyRejected) {
  HvacParams p;
  p.adjacency = {{1, 2}, {2, 1}, {3, 4}};
  EXPECT_THROW(gen_hvac(p), Error);
  p.adjacency = {{1, 2}, {2, 1}, {3, 4}, {4, 3}};
  EXPECT_EQ(gen_hvac(p).couplings().size(), 4u);
  p.adjacency = {{1, 1}};
  EXPECT_THROW(gen_hvac(p), Error);
  p = HvacParams{};
  p.nominal_margin = 4.5;
  EXPECT_THROW(gen_hvac(p), Error);
}

TEST(Scenario, SetbackNominalIsConsistent) {
  const HvacParams p;
  const NetworkSystem net = gen_hvac(p);
  const NominalTrajectory nom = hvac_setback_nominal(net, p);
  ASSERT_EQ(nom.steps.size(), 96u);
  EXPECT_LE(nominal_residual(net, nom), 1e-12);
  // Starts at the night equilibrium: the first step maps to itself.
  const auto next = step_dynamics(net, nom.steps[0].x, nom.steps[0].u);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(next[i](0), nom.steps[0].x[i](0), 1e-9);
  for (const auto& s : nom.steps)
    for (const auto& u : s.u) EXPECT_LE(std::abs(u(0)), p.nominal_margin);
}
