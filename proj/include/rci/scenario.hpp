#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rci/network.hpp"
#include "rci/random.hpp"
#include "rci/runtime.hpp"

namespace rci::scenario {

// ---------------------------------------------------------------------------
// Chain of planar rotation systems: x_i+ = alpha R(theta) x_i + u_i
//   + beta sum_{|i-j|=1} x_j + d_i.

struct RotationParams {
  int n_subsystems = 3;
  double theta = 0.0;  // required by callers; there is no canonical value
  double alpha = 0.8;
  double beta = 0.1;
  double u_bound = 0.65;
  double d_bound = 0.4;
  double x_bound = 4.0;
};

inline Matrix scaled_identity(int n, double s) { return s * Matrix::Identity(n, n); }

inline NetworkSystem gen_rotation(const RotationParams& p) {
  if (p.n_subsystems < 1) throw Error("gen_rotation: need at least one subsystem");
  for (double v : {p.theta, p.alpha, p.beta, p.u_bound, p.d_bound, p.x_bound}) {
    if (!std::isfinite(v)) throw Error("gen_rotation: parameters must be finite");
  }
  if (p.u_bound <= 0 || p.d_bound < 0 || p.x_bound <= 0) throw Error("gen_rotation: bounds must be positive");

  std::vector<Subsystem> subs;
  for (int i = 0; i < p.n_subsystems; ++i) {
    Subsystem s;
    s.id = "s" + std::to_string(i + 1);
    s.A = p.alpha * rotation2d(p.theta);
    s.B = Matrix::Identity(2, 2);
    s.Gx = Zonotope(scaled_identity(2, p.x_bound));
    s.Gu = Zonotope(scaled_identity(2, p.u_bound));
    s.Gd = Zonotope(scaled_identity(2, p.d_bound));
    subs.push_back(std::move(s));
  }
  std::vector<Coupling> couplings;
  if (p.beta != 0.0) {
    for (int i = 0; i < p.n_subsystems; ++i) {
      for (int j : {i - 1, i + 1}) {
        if (j < 0 || j >= p.n_subsystems) continue;
        couplings.push_back({"s" + std::to_string(j + 1), "s" + std::to_string(i + 1),
                             scaled_identity(2, p.beta), std::nullopt});
      }
    }
  }
  Json meta;
  meta["scenario"] = "rotation";
  meta["params"] = {{"n", p.n_subsystems}, {"theta", p.theta},     {"alpha", p.alpha},
                    {"beta", p.beta},      {"u_bound", p.u_bound}, {"d_bound", p.d_bound},
                    {"x_bound", p.x_bound}};
  return NetworkSystem(std::move(subs), std::move(couplings), std::move(meta));
}

// ---------------------------------------------------------------------------
// Random geometric field of double-integrator-like subsystems. Points are
// uniform on a square; pairs closer than R are coupled with
// A_ij = (lambda / dist) I_2 in both directions.

struct RandomFieldParams {
  int n_subsystems = 50;
  double field_size = 100.0;
  double radius = 10.0;
  double lambda = 0.001;
  std::uint64_t seed = 1;
  double x_bound = 10.0;
  double u_bound = 10.0;
  double d_bound = 0.2;
};

struct RandomField {
  NetworkSystem network;
  std::vector<Eigen::Vector2d> points;
  int resampled = 0;
};

inline Matrix red_dynamics() {
  Matrix a(2, 2);
  a << 1, 1, 1, 2;
  return a;
}

inline Matrix blue_dynamics() {
  Matrix a(2, 2);
  a << 1, 1, 0, 1;
  return a;
}

/// Subsystem i is red for even i, blue for odd i.
inline RandomField gen_random_field(const RandomFieldParams& p) {
  if (p.n_subsystems < 2 || p.n_subsystems % 2 != 0) {
    throw Error("gen_random_field: the number of subsystems must be even and >= 2");
  }
  if (!(p.field_size > 0) || !(p.radius >= 0) || !std::isfinite(p.lambda) || !std::isfinite(p.radius)) {
    throw Error("gen_random_field: invalid field parameters");
  }
  RandomField out;
  Rng rng(p.seed);
  const int n = p.n_subsystems;
  for (int i = 0; i < n; ++i) {
    while (true) {
      Eigen::Vector2d q(rng.uniform(0.0, p.field_size), rng.uniform(0.0, p.field_size));
      bool clash = false;
      for (const auto& prev : out.points) clash = clash || (prev - q).norm() == 0.0;
      if (!clash) {
        out.points.push_back(q);
        break;
      }
      ++out.resampled;
    }
  }

  Matrix b(2, 1);
  b << 0, 1;
  std::vector<Subsystem> subs;
  for (int i = 0; i < n; ++i) {
    Subsystem s;
    s.id = "s" + std::to_string(i + 1);
    s.A = i % 2 == 0 ? red_dynamics() : blue_dynamics();
    s.B = b;
    s.Gx = Zonotope(scaled_identity(2, p.x_bound));
    s.Gu = Zonotope(scaled_identity(1, p.u_bound));
    s.Gd = Zonotope(scaled_identity(2, p.d_bound));
    subs.push_back(std::move(s));
  }
  std::vector<Coupling> couplings;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = (out.points[i] - out.points[j]).norm();
      if (dist < p.radius) {
        couplings.push_back({"s" + std::to_string(j + 1), "s" + std::to_string(i + 1),
                             scaled_identity(2, p.lambda / dist), std::nullopt});
      }
    }
  }

  Json meta;
  meta["scenario"] = "random_field";
  meta["params"] = {{"n", n},           {"field_size", p.field_size}, {"R", p.radius},
                    {"lambda", p.lambda}, {"seed", p.seed},           {"x_bound", p.x_bound},
                    {"u_bound", p.u_bound}, {"d_bound", p.d_bound}};
  Json pts = Json::array();
  for (const auto& q : out.points) pts.push_back({q.x(), q.y()});
  meta["points"] = std::move(pts);
  meta["resampled"] = out.resampled;
  out.network = NetworkSystem(std::move(subs), std::move(couplings), std::move(meta));
  return out;
}

// ---------------------------------------------------------------------------
// Six-room thermal RC model around a nominal operating trajectory. States
// are room temperature errors; the nominal trajectory carries the offset.
// Units: delta_tau in s, c in kJ/K, resistances in K/kW, so
// delta_tau / (R c) is dimensionless.

struct HvacParams {
  double delta_tau = 900.0;
  double c = 1.375e3;
  double r_wall = 14.0;
  double r_out = 50.0;
  double u_min = 0.0;
  double u_max = 9.0;
  double d_bound = 1.6;
  /// Half-width of the input range reserved for the nominal trajectory
  /// around the midpoint; the tube controller gets (u_max - u_min)/2 - margin.
  double nominal_margin = 2.5;
  /// Admissible temperature error (tube state constraint), K.
  double x_bound = 5.0;
  /// Undirected room adjacency, 1-based room numbers.
  std::vector<std::pair<int, int>> adjacency = {{6, 1}, {6, 2}, {6, 3}, {6, 5}, {5, 4}};
  int rooms = 6;
};

inline double hvac_input_gain(const HvacParams& p) { return p.delta_tau / p.c; }

inline double hvac_tube_input_radius(const HvacParams& p) {
  return 0.5 * (p.u_max - p.u_min) - p.nominal_margin;
}

inline NetworkSystem gen_hvac(const HvacParams& p) {
  for (double v : {p.delta_tau, p.c, p.r_wall, p.r_out, p.d_bound, p.x_bound}) {
    if (!(std::isfinite(v) && v > 0)) throw Error("gen_hvac: physical parameters must be positive and finite");
  }
  if (hvac_tube_input_radius(p) <= 0.0) throw Error("gen_hvac: nominal margin leaves no tube input range");
  if (p.nominal_margin < 0.0) throw Error("gen_hvac: nominal margin must be nonnegative");

  std::set<std::pair<int, int>> edges;
  for (const auto& [a, b] : p.adjacency) {
    if (a < 1 || b < 1 || a > p.rooms || b > p.rooms || a == b) {
      throw Error("gen_hvac: adjacency entry (" + std::to_string(a) + ", " + std::to_string(b) +
                  ") is not a pair of distinct rooms");
    }
    edges.insert({a, b});
  }
  // Symmetric input is a list of undirected pairs, or a directed list that
  // already contains both directions.
  bool directed_complete = true;
  bool any_reverse = false;
  for (const auto& [a, b] : edges) {
    const bool rev = edges.count({b, a}) > 0;
    directed_complete = directed_complete && rev;
    any_reverse = any_reverse || rev;
  }
  if (any_reverse && !directed_complete) throw Error("gen_hvac: adjacency is not symmetric");
  std::vector<std::vector<int>> nbrs(p.rooms);
  for (const auto& [a, b] : edges) {
    nbrs[a - 1].push_back(b - 1);
    if (!any_reverse) nbrs[b - 1].push_back(a - 1);
  }

  const double gain = hvac_input_gain(p);
  std::vector<Subsystem> subs;
  for (int i = 0; i < p.rooms; ++i) {
    double conductance = 1.0 / p.r_out;
    conductance += static_cast<double>(nbrs[i].size()) / p.r_wall;
    Subsystem s;
    s.id = "room" + std::to_string(i + 1);
    s.A = Matrix::Constant(1, 1, 1.0 - gain * conductance);
    s.B = Matrix::Constant(1, 1, gain);
    s.Gx = Zonotope(Matrix::Constant(1, 1, p.x_bound));
    s.Gu = Zonotope(Matrix::Constant(1, 1, hvac_tube_input_radius(p)));
    s.Gd = Zonotope(Matrix::Constant(1, 1, gain * p.d_bound));
    subs.push_back(std::move(s));
  }
  std::vector<Coupling> couplings;
  for (int i = 0; i < p.rooms; ++i) {
    std::vector<int> sorted = nbrs[i];
    std::sort(sorted.begin(), sorted.end());
    for (int j : sorted) {
      couplings.push_back({"room" + std::to_string(j + 1), "room" + std::to_string(i + 1),
                           Matrix::Constant(1, 1, p.delta_tau / (p.r_wall * p.c)), std::nullopt});
    }
  }
  Json meta;
  meta["scenario"] = "hvac";
  Json adj = Json::array();
  for (const auto& [a, b] : p.adjacency) adj.push_back({a, b});
  meta["params"] = {{"delta_tau", p.delta_tau}, {"c", p.c},
                    {"r_wall", p.r_wall},       {"r_out", p.r_out},
                    {"u_min", p.u_min},         {"u_max", p.u_max},
                    {"d_bound", p.d_bound},     {"nominal_margin", p.nominal_margin},
                    {"x_bound", p.x_bound},     {"adjacency", std::move(adj)}};
  meta["input_offset"] = 0.5 * (p.u_min + p.u_max);
  return NetworkSystem(std::move(subs), std::move(couplings), std::move(meta));
}

/// Office-hours setback schedule for the HVAC network: u_bar = +margin on
/// steps [day_start, day_end) and -margin otherwise, starting from the
/// equilibrium of the night input. Inputs are centered, so the applied
/// heating power is input_offset + u_bar + M b.
inline NominalTrajectory hvac_setback_nominal(const NetworkSystem& net, const HvacParams& p, int steps = 96,
                                              int day_start = 28, int day_end = 76) {
  if (steps < 1) throw Error("hvac_setback_nominal: steps must be positive");
  const Aggregate agg = aggregate(net);
  const Vector night = Vector::Constant(agg.B.cols(), -p.nominal_margin);
  const Matrix lhs = Matrix::Identity(agg.A.rows(), agg.A.cols()) - agg.A;
  const Vector x_eq = lhs.fullPivLu().solve(agg.B * night);

  std::vector<Vector> x0;
  for (int i = 0; i < net.size(); ++i) x0.push_back(x_eq.segment(agg.state_offset[i], net[i].state_dim()));
  std::vector<std::vector<Vector>> inputs;
  for (int t = 0; t < steps; ++t) {
    const double level = (t >= day_start && t < day_end) ? p.nominal_margin : -p.nominal_margin;
    std::vector<Vector> u;
    for (int i = 0; i < net.size(); ++i) u.push_back(Vector::Constant(net[i].input_dim(), level));
    inputs.push_back(std::move(u));
  }
  return propagate_nominal(net, std::move(x0), inputs);
}

}  // namespace rci::scenario
