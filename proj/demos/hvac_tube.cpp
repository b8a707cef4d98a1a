// Six rooms tracking a day/night setback schedule under worst-case heat
// disturbances. Prints the largest tube-relative error per room.
#include <algorithm>
#include <iostream>
#include <vector>

#include "rci/rci.hpp"

int main() {
  using namespace rci;
  const scenario::HvacParams p;
  const NetworkSystem net = scenario::gen_hvac(p);
  const NetworkResult res = synth_network(net);
  if (res.report.outcome == Outcome::InfeasibleAt) {
    std::cerr << "synthesis failed\n";
    return 1;
  }
  const NominalTrajectory nom = scenario::hvac_setback_nominal(net, p);
  SimulationOptions so;
  so.mode = DisturbanceMode::Corner;
  so.seed = 2024;
  const TrajectoryLog log = simulate_closed_loop(net, res.contracts, so, &nom);

  const double offset = net.metadata()["input_offset"].get<double>();
  std::vector<double> worst(net.size(), 0.0);
  double u_lo = 1e300, u_hi = -1e300;
  for (const auto& e : log.entries) {
    const double err = std::abs((e.x - e.x_nominal)(0));
    worst[e.subsystem] = std::max(worst[e.subsystem], err / res.contracts[e.subsystem].T.cwiseAbs().sum());
    u_lo = std::min(u_lo, offset + e.u(0));
    u_hi = std::max(u_hi, offset + e.u(0));
  }
  for (int i = 0; i < net.size(); ++i) {
    std::cout << net[i].id << ": max |e| / tube radius = " << worst[i] << '\n';
  }
  std::cout << "applied heating power in [" << u_lo << ", " << u_hi << "]\n";
  return all_members(log) ? 0 : 1;
}
