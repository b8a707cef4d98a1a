#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "rci/compositional.hpp"
#include "rci/containment.hpp"
#include "rci/network.hpp"
#include "rci/runtime.hpp"
#include "rci/scenario.hpp"

namespace rci::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Raised for bad paths and invalid input documents (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline std::string read_text(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Json read_json(const std::string& path, std::istream& in) {
  const std::string text = read_text(path, in);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.empty() ? "-" : path, std::string("malformed JSON: ") + e.what());
  }
}

/// Writes to `path`, or to `out` when the path is empty or "-".
template <typename Fn>
void write_to(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  fn(f);
}

inline double box_volume(const Vector& radii) {
  double v = 1.0;
  for (Eigen::Index i = 0; i < radii.size(); ++i) v *= 2.0 * radii(i);
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

struct SynthArgs {
  std::string input;
  std::string output;
  double tol = 1e-4;
  int max_sweeps = 50;
  int k_max = 0;
  std::string mode = "gauss-seidel";
  bool bench = false;
  bool json = false;
  bool omit_timing = false;
};

struct SingleArgs {
  std::string input;
  std::string output;
  int k_max = 0;
  bool scan_all = false;
  bool cross_check = false;
  bool json = false;
};

struct VerifyArgs {
  std::string network;
  std::string contracts;
  long long samples = 10000;
  std::uint64_t seed = 0;
  bool json = false;
};

struct SimulateArgs {
  std::string network;
  std::string contracts;
  std::string nominal;
  std::string output;
  int steps = 100;
  std::uint64_t seed = 0;
  std::string disturbance = "uniform";
  bool json = false;
};

struct GenArgs {
  std::string output;
  scenario::RotationParams rot;
  scenario::RandomFieldParams field;
  scenario::HvacParams hvac;
  std::string nominal_out;
  int nominal_steps = 96;
};

struct PlotArgs {
  std::string network;
  std::string contracts;
  std::string output;
};

struct BenchArgs {
  std::string sizes = "50,500";
  std::string lambdas = "0.01,0.001";
  std::string radii = "1,10";
  std::uint64_t seed = 0;
  std::string mode = "gauss-seidel";
  bool json = false;
};

namespace detail {

inline SweepMode parse_mode(const std::string& s) {
  if (s == "gauss-seidel") return SweepMode::GaussSeidel;
  if (s == "jacobi") return SweepMode::Jacobi;
  throw UsageError("unknown mode '" + s + "'");
}

inline void print_history(std::ostream& os, const SynthesisReport& r) {
  os << "sweep  metric        time_s\n";
  for (const auto& s : r.history) {
    os << std::setw(5) << s.sweep << "  " << std::setw(12) << std::setprecision(6) << s.metric << "  "
       << std::setprecision(4) << s.time_s << '\n';
  }
  os << "outcome " << to_string(r.outcome) << ", " << r.sweeps << " sweeps, " << std::setprecision(4)
     << r.total_time_s << " s\n";
}

inline int cmd_synth(const SynthArgs& a, Streams& io) {
  const NetworkSystem net = network_from_json(read_json(a.input, io.in));
  NetworkOptions opts;
  opts.tol = a.tol;
  opts.max_sweeps = a.max_sweeps;
  opts.k_max = a.k_max;
  opts.mode = parse_mode(a.mode);
  opts.keep_history = false;
  const NetworkResult res = synth_network(net, opts);
  for (const auto& w : res.report.warnings) io.err << "warning: " << w << '\n';

  if (res.report.outcome == Outcome::InfeasibleAt) {
    const auto& d = *res.report.infeasible;
    io.err << "infeasible: subsystem '" << d.id << "' at sweep " << d.sweep << '\n';
    if (a.json) {
      Json j;
      j["error"] = {{"code", "infeasible"}, {"report", to_json(res.report, !a.omit_timing)}};
      io.out << j.dump(1) << '\n';
    }
    return kFailure;
  }
  if (res.report.outcome == Outcome::MaxSweeps) {
    io.err << "warning: not converged after " << res.report.sweeps << " sweeps; contracts are still valid\n";
  }
  const Json doc = to_json(net, res, !a.omit_timing);
  const bool doc_to_stdout = a.output.empty() || a.output == "-";
  if (!doc_to_stdout) write_to(a.output, io.out, [&](std::ostream& os) { os << doc.dump(1) << '\n'; });

  if (a.bench) {
    if (a.json) {
      Json b;
      b["states"] = net.total_states();
      b["subsystems"] = net.size();
      b["couplings"] = net.couplings().size();
      b["report"] = to_json(res.report, true);
      io.out << b.dump(1) << '\n';
    } else {
      io.out << net.size() << " subsystems, " << net.total_states() << " states, " << net.couplings().size()
             << " couplings\n";
      print_history(io.out, res.report);
    }
  } else if (doc_to_stdout) {
    io.out << doc.dump(1) << '\n';
  } else if (a.json) {
    io.out << Json({{"status", "ok"}, {"output", a.output}, {"sweeps", res.report.sweeps}}).dump() << '\n';
  }
  return kOk;
}

inline int cmd_synth_single(const SingleArgs& a, Streams& io) {
  const NetworkSystem net = network_from_json(read_json(a.input, io.in));
  const Aggregate agg = aggregate(net);
  SingleOptions so;
  so.k_max = a.k_max;
  so.scan_all = a.scan_all;
  Json doc;
  try {
    const RciContract c = synth_single(agg.A, agg.B, agg.Gx, agg.Gu, agg.Gd, so);
    doc["contract"] = to_json(c);
    doc["state_offset"] = agg.state_offset;
    doc["input_offset"] = agg.input_offset;
    if (a.cross_check) {
      Json cc;
      cc["monolithic_box_volume"] = box_volume(row_abs_sums(c.T));
      NetworkOptions no;
      no.keep_history = false;
      const NetworkResult res = synth_network(net, no);
      cc["compositional_outcome"] = to_string(res.report.outcome);
      if (res.report.outcome != Outcome::InfeasibleAt) {
        double vol = 1.0;
        for (const auto& ci : res.contracts) vol *= box_volume(row_abs_sums(ci.T));
        cc["compositional_box_volume"] = vol;
        // Each compositional box must sit inside the projection of the
        // subsystem's admissible set.
        Json within = Json::object();
        for (int i = 0; i < net.size(); ++i) {
          const Zonotope box = reduce_box(Zonotope(res.contracts[i].T));
          within[net[i].id] = is_subset(box, net[i].Gx);
        }
        cc["compositional_within_constraints"] = std::move(within);
      }
      doc["cross_check"] = std::move(cc);
    }
  } catch (const AllKInfeasible& e) {
    io.err << "infeasible: " << e.what() << '\n';
    if (a.json) io.out << Json({{"error", {{"code", "infeasible"}, {"message", e.what()}}}}).dump() << '\n';
    return kFailure;
  }
  if (a.output.empty() || a.output == "-") {
    io.out << doc.dump(1) << '\n';
  } else {
    write_to(a.output, io.out, [&](std::ostream& os) { os << doc.dump(1) << '\n'; });
    if (a.json) io.out << Json({{"status", "ok"}, {"output", a.output}}).dump() << '\n';
  }
  return kOk;
}

inline int cmd_verify(const VerifyArgs& a, Streams& io) {
  const NetworkSystem net = network_from_json(read_json(a.network, io.in));
  const auto contracts = contracts_from_json(net, read_json(a.contracts, io.in));
  VerifyOptions vo;
  vo.samples = a.samples;
  vo.seed = a.seed;
  const VerifyReport r = verify_one_step(net, contracts, vo);
  if (a.json) {
    io.out << to_json(r).dump(1) << '\n';
  } else {
    io.out << r.draws << " joint draws, " << r.checks << " membership checks, " << r.violations
           << " violations, worst margin " << std::setprecision(10) << r.worst_margin << '\n';
  }
  for (const auto& c : r.counterexamples) {
    io.err << "violation (" << c.kind << ") draw " << c.draw << " subsystem '" << c.id << "' margin " << c.margin
           << (c.error.empty() ? "" : " error: " + c.error) << '\n';
  }
  return r.passed() ? kOk : kFailure;
}

inline int cmd_simulate(const SimulateArgs& a, Streams& io) {
  const NetworkSystem net = network_from_json(read_json(a.network, io.in));
  const auto contracts = contracts_from_json(net, read_json(a.contracts, io.in));
  const auto mode = disturbance_mode_from_string(a.disturbance);
  if (!mode) throw UsageError("unknown disturbance mode '" + a.disturbance + "'");
  SimulationOptions so;
  so.steps = a.steps;
  so.seed = a.seed;
  so.mode = *mode;
  std::optional<NominalTrajectory> nominal;
  if (!a.nominal.empty()) nominal = nominal_from_json(net, read_json(a.nominal, io.in));
  const TrajectoryLog log = simulate_closed_loop(net, contracts, so, nominal ? &*nominal : nullptr);
  if (a.json) {
    std::ostringstream csv;
    write_csv(csv, log);
    Json j;
    j["steps"] = log.entries.empty() ? 0 : log.entries.back().t + 1;
    j["aborted"] = log.aborted;
    if (log.aborted) j["reason"] = log.abort_reason;
    if (!a.output.empty() && a.output != "-") {
      write_to(a.output, io.out, [&](std::ostream& os) { os << csv.str(); });
      j["output"] = a.output;
    } else {
      j["csv"] = csv.str();
    }
    io.out << j.dump(1) << '\n';
  } else {
    write_to(a.output, io.out, [&](std::ostream& os) { write_csv(os, log); });
  }
  if (log.aborted) {
    io.err << "membership failure: " << log.abort_reason << '\n';
    return kFailure;
  }
  return kOk;
}

inline int cmd_plot(const PlotArgs& a, Streams& io) {
  const NetworkSystem net = network_from_json(read_json(a.network, io.in));
  const auto contracts = contracts_from_json(net, read_json(a.contracts, io.in));
  write_to(a.output, io.out, [&](std::ostream& os) {
    os << "subsystem,set,vertex,x,y\n";
    const auto old = os.precision(17);
    for (int i = 0; i < net.size(); ++i) {
      const auto emit = [&](const char* name, const Zonotope& z) {
        if (z.dim() != 2) return;
        const auto verts = vertices_2d(z);
        for (std::size_t v = 0; v < verts.size(); ++v) {
          os << net[i].id << ',' << name << ',' << v << ',' << verts[v].x() << ',' << verts[v].y() << '\n';
        }
      };
      if (net[i].state_dim() != 2) {
        io.err << "plot-data: skipping '" << net[i].id << "' (state dimension " << net[i].state_dim() << ")\n";
        continue;
      }
      emit("omega", Zonotope(contracts[i].T));
      emit("constraint", net[i].Gx);
      emit("action", Zonotope(contracts[i].M));
    }
    os.precision(old);
  });
  return kOk;
}

inline int cmd_bench(const BenchArgs& a, Streams& io) {
  std::vector<int> sizes;
  std::vector<double> lambdas, radii;
  try {
    for (const auto& s : split_list(a.sizes)) sizes.push_back(std::stoi(s));
    for (const auto& s : split_list(a.lambdas)) lambdas.push_back(std::stod(s));
    for (const auto& s : split_list(a.radii)) radii.push_back(std::stod(s));
  } catch (const std::exception&) {
    throw UsageError("bench: lists must be comma-separated numbers");
  }
  const SweepMode mode = parse_mode(a.mode);
  Json rows = Json::array();
  if (!a.json) io.out << "states  lambda   R      couplings  sweeps  outcome       time_s\n";
  bool all_ok = true;
  for (int n : sizes) {
    for (double lam : lambdas) {
      for (double r : radii) {
        scenario::RandomFieldParams p;
        p.n_subsystems = n;
        p.lambda = lam;
        p.radius = r;
        p.seed = a.seed;
        const auto field = scenario::gen_random_field(p);
        NetworkOptions no;
        no.mode = mode;
        no.keep_history = false;
        const NetworkResult res = synth_network(field.network, no);
        all_ok = all_ok && res.report.outcome != Outcome::InfeasibleAt;
        Json row = {{"states", field.network.total_states()},
                    {"lambda", lam},
                    {"R", r},
                    {"couplings", field.network.couplings().size()},
                    {"sweeps", res.report.sweeps},
                    {"outcome", to_string(res.report.outcome)},
                    {"total_time_s", res.report.total_time_s}};
        if (a.json) {
          rows.push_back(std::move(row));
        } else {
          io.out << std::left << std::setw(8) << field.network.total_states() << std::setw(9) << lam << std::setw(7)
                 << r << std::setw(11) << field.network.couplings().size() << std::setw(8) << res.report.sweeps
                 << std::setw(14) << to_string(res.report.outcome) << std::setprecision(4)
                 << res.report.total_time_s << std::right << '\n';
        }
      }
    }
  }
  if (a.json) io.out << Json({{"seed", a.seed}, {"rows", rows}}).dump(1) << '\n';
  return all_ok ? kOk : kFailure;
}

inline int cmd_gen(const std::string& which, const GenArgs& a, Streams& io) {
  NetworkSystem net;
  try {
    if (which == "rotation") {
      net = scenario::gen_rotation(a.rot);
    } else if (which == "random-field") {
      net = scenario::gen_random_field(a.field).network;
    } else {
      net = scenario::gen_hvac(a.hvac);
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (which == "hvac") {
    if (!a.nominal_out.empty()) {
      const auto nom = scenario::hvac_setback_nominal(net, a.hvac, a.nominal_steps);
      write_to(a.nominal_out, io.out, [&](std::ostream& os) { os << to_json(net, nom).dump(1) << '\n'; });
    }
  }
  write_to(a.output, io.out, [&](std::ostream& os) { os << serialize_network(net) << '\n'; });
  return kOk;
}

}  // namespace detail

/// Entry point shared by the rci binary and the tests. args[0] is the
/// program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Decentralized robust control invariant sets for coupled linear systems"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Compositional synthesis over a network");
  c_synth->add_option("-i,--input", synth.input, "Network JSON ('-' or absent: stdin)");
  c_synth->add_option("-o,--output", synth.output, "Result JSON path (default stdout)");
  c_synth->add_option("--tol", synth.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  c_synth->add_option("--max-sweeps", synth.max_sweeps, "Sweep limit")->check(CLI::Range(1, 100000));
  c_synth->add_option("--k-max", synth.k_max, "Largest generator count (0: automatic)")->check(CLI::NonNegativeNumber);
  c_synth->add_option("--mode", synth.mode, "gauss-seidel or jacobi")
      ->check(CLI::IsMember({"gauss-seidel", "jacobi"}));
  c_synth->add_flag("--bench", synth.bench, "Print iteration count and per-sweep timings");
  c_synth->add_flag("--json", synth.json, "Machine-readable stdout");
  c_synth->add_flag("--omit-timing", synth.omit_timing, "Drop timing fields from the result");

  SingleArgs single;
  auto* c_single = app.add_subcommand("synth-single", "Monolithic synthesis on the aggregated network");
  c_single->add_option("-i,--input", single.input, "Network JSON ('-' or absent: stdin)");
  c_single->add_option("-o,--output", single.output, "Result JSON path (default stdout)");
  c_single->add_option("--k-max", single.k_max, "Largest generator count (0: automatic)")
      ->check(CLI::NonNegativeNumber);
  c_single->add_flag("--scan-all", single.scan_all, "Try every k and keep the smallest objective");
  c_single->add_flag("--cross-check", single.cross_check, "Also run the compositional synthesis and compare");
  c_single->add_flag("--json", single.json, "Machine-readable stdout");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "Monte-Carlo one-step invariance check");
  c_verify->add_option("--network", verify.network, "Network JSON")->required();
  c_verify->add_option("--contracts", verify.contracts, "Result JSON from synth")->required();
  c_verify->add_option("--samples", verify.samples, "Joint draws")->check(CLI::Range(1LL, 1000000000LL));
  c_verify->add_option("--seed", verify.seed, "Random seed")->required();
  c_verify->add_flag("--json", verify.json, "Machine-readable stdout");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Closed-loop simulation, plain or around a nominal trajectory");
  c_sim->add_option("--network", sim.network, "Network JSON")->required();
  c_sim->add_option("--contracts", sim.contracts, "Result JSON from synth")->required();
  c_sim->add_option("--nominal", sim.nominal, "Nominal trajectory JSON (tube mode)");
  c_sim->add_option("-o,--output", sim.output, "CSV path (default stdout)");
  c_sim->add_option("--steps", sim.steps, "Steps without a nominal")->check(CLI::Range(1, 100000000));
  c_sim->add_option("--seed", sim.seed, "Random seed")->required();
  c_sim->add_option("--disturbance", sim.disturbance, "uniform, corner or worst_axis")
      ->check(CLI::IsMember({"uniform", "corner", "worst_axis", "worst-axis"}));
  c_sim->add_flag("--json", sim.json, "Machine-readable stdout");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a scenario network");
  c_gen->require_subcommand(1);
  c_gen->add_option("-o,--output", gen.output, "Network JSON path (default stdout)");
  auto* g_rot = c_gen->add_subcommand("rotation", "Chain of rotating planar systems");
  g_rot->add_option("--n", gen.rot.n_subsystems, "Subsystems")->check(CLI::Range(1, 1000000));
  g_rot->add_option("--theta", gen.rot.theta, "Rotation angle in radians")->required();
  g_rot->add_option("--alpha", gen.rot.alpha, "Contraction factor");
  g_rot->add_option("--beta", gen.rot.beta, "Neighbor coupling gain");
  g_rot->add_option("--u-bound", gen.rot.u_bound, "Input infinity-norm bound")->check(CLI::PositiveNumber);
  g_rot->add_option("--d-bound", gen.rot.d_bound, "Disturbance infinity-norm bound")->check(CLI::NonNegativeNumber);
  g_rot->add_option("--x-bound", gen.rot.x_bound, "State infinity-norm bound")->check(CLI::PositiveNumber);
  g_rot->add_option("-o,--output", gen.output, "Network JSON path (default stdout)");
  auto* g_field = c_gen->add_subcommand("random-field", "Random geometric field of red/blue subsystems");
  g_field->add_option("--n", gen.field.n_subsystems, "Subsystems (even)")->check(CLI::Range(2, 10000000));
  g_field->add_option("--size", gen.field.field_size, "Side of the square field")->check(CLI::PositiveNumber);
  g_field->add_option("--R", gen.field.radius, "Neighbor radius")->check(CLI::NonNegativeNumber);
  g_field->add_option("--lambda", gen.field.lambda, "Coupling strength");
  g_field->add_option("--seed", gen.field.seed, "Random seed")->required();
  g_field->add_option("-o,--output", gen.output, "Network JSON path (default stdout)");
  auto* g_hvac = c_gen->add_subcommand("hvac", "Six-room thermal model");
  g_hvac->add_option("--margin", gen.hvac.nominal_margin, "Input range reserved for the nominal")
      ->check(CLI::NonNegativeNumber);
  g_hvac->add_option("--x-bound", gen.hvac.x_bound, "Admissible temperature error")->check(CLI::PositiveNumber);
  g_hvac->add_option("--r-wall", gen.hvac.r_wall, "Wall resistance")->check(CLI::PositiveNumber);
  g_hvac->add_option("--r-out", gen.hvac.r_out, "Outside resistance")->check(CLI::PositiveNumber);
  g_hvac->add_option("--c", gen.hvac.c, "Room capacitance")->check(CLI::PositiveNumber);
  g_hvac->add_option("--delta-tau", gen.hvac.delta_tau, "Time step in seconds")->check(CLI::PositiveNumber);
  g_hvac->add_option("--nominal-out", gen.nominal_out, "Also write the setback nominal trajectory here");
  g_hvac->add_option("--steps", gen.nominal_steps, "Nominal trajectory length")->check(CLI::Range(1, 100000000));
  g_hvac->add_option("-o,--output", gen.output, "Network JSON path (default stdout)");

  PlotArgs plot;
  auto* c_plot = app.add_subcommand("plot-data", "Vertex CSV of the 2-D sets of each subsystem");
  c_plot->add_option("--network", plot.network, "Network JSON")->required();
  c_plot->add_option("--contracts", plot.contracts, "Result JSON from synth")->required();
  c_plot->add_option("-o,--output", plot.output, "CSV path (default stdout)");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Random-field sweep over size, lambda and R");
  c_bench->add_option("--n", bench.sizes, "Comma-separated subsystem counts");
  c_bench->add_option("--lambda", bench.lambdas, "Comma-separated coupling strengths");
  c_bench->add_option("--R", bench.radii, "Comma-separated neighbor radii");
  c_bench->add_option("--seed", bench.seed, "Random seed")->required();
  c_bench->add_option("--mode", bench.mode, "gauss-seidel or jacobi")->check(CLI::IsMember({"gauss-seidel", "jacobi"}));
  c_bench->add_flag("--json", bench.json, "Machine-readable stdout");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const bool json = (c_synth->parsed() && synth.json) || (c_single->parsed() && single.json) ||
                    (c_verify->parsed() && verify.json) || (c_sim->parsed() && sim.json) ||
                    (c_bench->parsed() && bench.json);
  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    err << "error: " << msg << '\n';
    if (json) out << Json({{"error", {{"code", kind}, {"message", msg}}}}).dump() << '\n';
    return code;
  };
  try {
    if (verbose) err << "rci: running " << app.get_subcommands().front()->get_name() << '\n';
    if (c_synth->parsed()) return detail::cmd_synth(synth, io);
    if (c_single->parsed()) return detail::cmd_synth_single(single, io);
    if (c_verify->parsed()) return detail::cmd_verify(verify, io);
    if (c_sim->parsed()) return detail::cmd_simulate(sim, io);
    if (c_plot->parsed()) return detail::cmd_plot(plot, io);
    if (c_bench->parsed()) return detail::cmd_bench(bench, io);
    if (g_rot->parsed()) return detail::cmd_gen("rotation", gen, io);
    if (g_field->parsed()) return detail::cmd_gen("random-field", gen, io);
    if (g_hvac->parsed()) return detail::cmd_gen("hvac", gen, io);
  } catch (const ParseError& e) {
    return fail(kUsage, "invalid_input", e.what());
  } catch (const UsageError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const DimensionError& e) {
    return fail(kUsage, "invalid_input", e.what());
  } catch (const StateOutsideRci& e) {
    return fail(kFailure, "state_outside_rci", e.what());
  } catch (const Error& e) {
    return fail(kFailure, "failure", e.what());
  }
  return kUsage;
}

}  // namespace rci::cli
