// Three coupled rotating planar systems; prints each RCI set's vertices.
#include <cmath>
#include <iostream>
#include <numbers>

#include "rci/rci.hpp"

int main() {
  using namespace rci;
  scenario::RotationParams p;
  p.theta = std::numbers::pi / 6;
  const NetworkSystem net = scenario::gen_rotation(p);
  const NetworkResult res = synth_network(net);
  std::cout << to_string(res.report.outcome) << " after " << res.report.sweeps << " sweeps ("
            << res.report.total_time_s << " s)\n";
  if (res.report.outcome == Outcome::InfeasibleAt) return 1;

  for (int i = 0; i < net.size(); ++i) {
    std::cout << net[i].id << " (k = " << res.contracts[i].k << "):";
    for (const auto& v : vertices_2d(Zonotope(res.contracts[i].T))) std::cout << " (" << v.x() << ", " << v.y() << ")";
    std::cout << '\n';
  }

  VerifyOptions vo;
  vo.samples = 2000;
  vo.seed = 42;
  const VerifyReport r = verify_one_step(net, res.contracts, vo);
  std::cout << "one-step check: " << r.violations << " violations in " << r.checks << " checks\n";
  return r.passed() ? 0 : 1;
}
