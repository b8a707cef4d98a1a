#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "rci/network.hpp"
#include "rci/parallel.hpp"
#include "rci/rci_single.hpp"

namespace rci {

enum class SweepMode { GaussSeidel, Jacobi };

inline const char* to_string(SweepMode m) {
  return m == SweepMode::GaussSeidel ? "gauss-seidel" : "jacobi";
}

struct NetworkOptions {
  double tol = 1e-4;
  int max_sweeps = 50;
  int k_max = 0;  // 0 -> default_k_max per subsystem
  SweepMode mode = SweepMode::GaussSeidel;
  int threads = 0;  // Jacobi workers, 0 -> worker_threads()
  bool keep_history = true;
  double feas_tol = lp::kDefaultFeasTol;
};

/// Current contract of one subsystem. Before the first sweep T = Gx,
/// M = Gu and k = 0.
struct SubsystemIterate {
  Matrix T;
  Matrix M;
  int k = 0;
  Matrix disturbance;  // boxed generator the LP was solved against
  double objective = 0.0;
  double residual = 0.0;
};

struct SweepState {
  int sweep = 0;
  std::vector<SubsystemIterate> iterates;

  /// Box half-widths of every Z(0, T_i), the convergence witness.
  std::vector<Vector> radii() const {
    std::vector<Vector> out;
    out.reserve(iterates.size());
    for (const auto& it : iterates) out.push_back(row_abs_sums(it.T));
    return out;
  }
};

inline SweepState initial_state(const NetworkSystem& net) {
  SweepState s;
  for (const auto& sub : net.subsystems()) {
    SubsystemIterate it;
    it.T = sub.Gx.generators();
    it.M = sub.Gu.generators();
    s.iterates.push_back(std::move(it));
  }
  return s;
}

/// Z(0, G_extend) for subsystem i: neighbor images A_ij T_j, then B_ij M_j,
/// then the exogenous Gd_i, using the iterates in `state`.
inline Zonotope coupling_disturbance(const NetworkSystem& net, int i, const SweepState& state) {
  const auto& in = net.incoming(i);
  Matrix g(net[i].state_dim(), 0);
  for (int c : in) {
    const auto& cp = net.couplings()[c];
    if (cp.A) g = hcat(g, *cp.A * state.iterates[net.index_of(cp.from)].T);
  }
  for (int c : in) {
    const auto& cp = net.couplings()[c];
    if (cp.B) g = hcat(g, *cp.B * state.iterates[net.index_of(cp.from)].M);
  }
  g = hcat(g, net[i].Gd.generators());
  return Zonotope(g);
}

/// Largest relative shrink of any box radius between two states,
/// (r_prev - r_next) / max(r_prev, 1e-12), clamped at zero.
inline double convergence_metric(const SweepState& prev, const SweepState& next) {
  if (prev.iterates.size() != next.iterates.size()) {
    throw DimensionError("convergence_metric: subsystem counts differ");
  }
  constexpr double kEps = 1e-12;
  double metric = 0.0;
  const auto rp = prev.radii();
  const auto rn = next.radii();
  for (std::size_t i = 0; i < rp.size(); ++i) {
    if (rp[i].size() != rn[i].size()) throw DimensionError("convergence_metric: dimension mismatch");
    for (Eigen::Index c = 0; c < rp[i].size(); ++c) {
      metric = std::max(metric, (rp[i](c) - rn[i](c)) / std::max(rp[i](c), kEps));
    }
  }
  return metric;
}

struct SubsystemRecord {
  std::string id;
  int k = 0;
  double objective = 0.0;
  double residual = 0.0;
  double solve_time_s = 0.0;
};

struct SweepRecord {
  int sweep = 0;
  double metric = 0.0;
  std::vector<SubsystemRecord> subsystems;
  double time_s = 0.0;
};

enum class Outcome { Converged, MaxSweeps, InfeasibleAt };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "Converged";
    case Outcome::MaxSweeps: return "MaxSweeps";
    case Outcome::InfeasibleAt: return "InfeasibleAt";
  }
  return "?";
}

/// Margin data for a subsystem whose LP had no solution.
struct InfeasibleDiagnosis {
  int subsystem = -1;
  std::string id;
  int sweep = 0;
  Vector disturbance_radii;
  Vector state_radii;
  Vector input_radii;
  std::vector<std::pair<int, lp::Status>> attempts;
};

struct SynthesisReport {
  int sweeps = 0;
  SweepMode mode = SweepMode::GaussSeidel;
  Outcome outcome = Outcome::MaxSweeps;
  std::vector<SweepRecord> history;
  std::optional<InfeasibleDiagnosis> infeasible;
  std::vector<std::string> warnings;
  double total_time_s = 0.0;
};

struct NetworkResult {
  std::vector<RciContract> contracts;  // subsystem order; empty unless Converged/MaxSweeps
  std::vector<Matrix> disturbances;    // boxed disturbance each contract was solved against
  SynthesisReport report;
  std::vector<SweepState> states;  // sweep 0..r when keep_history

  bool converged() const { return report.outcome == Outcome::Converged; }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct UpdateResult {
  std::optional<SubsystemIterate> iterate;
  std::vector<std::pair<int, lp::Status>> attempts;
  Matrix disturbance;
  double time_s = 0.0;
};

/// One call of the single-system synthesis for subsystem i against the
/// iterates in `ref`, constrained inside its own previous iterate.
inline UpdateResult update_subsystem(const NetworkSystem& net, int i, const SweepState& ref,
                                     const SubsystemIterate& own, const NetworkOptions& opts) {
  const auto t0 = Clock::now();
  const auto& sub = net[i];
  UpdateResult out;
  const Zonotope boxed = reduce_box(coupling_disturbance(net, i, ref));
  out.disturbance = boxed.generators();

  SingleOptions so;
  so.k_start = std::max(1, own.k);
  so.k_max = opts.k_max > 0 ? opts.k_max : default_k_max(sub.state_dim(), boxed.num_generators());
  so.k_max = std::max(so.k_max, so.k_start);
  so.feas_tol = opts.feas_tol;
  try {
    const RciContract c = synth_single(sub.A, sub.B, Zonotope(own.T), Zonotope(own.M), boxed, so);
    SubsystemIterate it;
    it.T = c.T;
    it.M = c.M;
    it.k = c.k;
    it.disturbance = out.disturbance;
    it.objective = c.objective;
    it.residual = c.residual;
    out.iterate = std::move(it);
  } catch (const AllKInfeasible& e) {
    out.attempts = e.attempts();
  }
  out.time_s = seconds_since(t0);
  return out;
}

}  // namespace detail

/// Compositional synthesis: every sweep rebuilds each subsystem's coupling
/// disturbance from the neighbors' current contracts, boxes it, and re-solves
/// the single-system LP inside the subsystem's previous contract. Stops when
/// convergence_metric <= tol, after max_sweeps, or at the first infeasible
/// subsystem.
inline NetworkResult synth_network(const NetworkSystem& net, const NetworkOptions& opts = {}) {
  const auto t_start = detail::Clock::now();
  NetworkResult result;
  auto& report = result.report;
  report.mode = opts.mode;

  for (const auto& sub : net.subsystems()) {
    if (!is_controllable(sub.A, sub.B)) {
      report.warnings.push_back("subsystem '" + sub.id + "': (A, B) is not controllable");
    }
  }

  SweepState current = initial_state(net);
  if (opts.keep_history) result.states.push_back(current);
  const int count = net.size();

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const auto t_sweep = detail::Clock::now();
    SweepState next = current;
    next.sweep = sweep;
    std::vector<detail::UpdateResult> updates(count);

    if (opts.mode == SweepMode::GaussSeidel) {
      for (int i = 0; i < count; ++i) {
        updates[i] = detail::update_subsystem(net, i, next, current.iterates[i], opts);
        if (!updates[i].iterate) {
          updates.resize(i + 1);
          break;
        }
        next.iterates[i] = *updates[i].iterate;
      }
    } else {
      parallel_for(
          count,
          [&](int i) { updates[i] = detail::update_subsystem(net, i, current, current.iterates[i], opts); },
          opts.threads);
    }

    SweepRecord rec;
    rec.sweep = sweep;
    for (std::size_t i = 0; i < updates.size(); ++i) {
      auto& u = updates[i];
      if (!u.iterate) {
        const auto& sub = net[static_cast<int>(i)];
        InfeasibleDiagnosis diag;
        diag.subsystem = static_cast<int>(i);
        diag.id = sub.id;
        diag.sweep = sweep;
        diag.disturbance_radii = row_abs_sums(u.disturbance);
        diag.state_radii = row_abs_sums(current.iterates[i].T);
        diag.input_radii = row_abs_sums(current.iterates[i].M);
        diag.attempts = u.attempts;
        report.infeasible = std::move(diag);
        report.outcome = Outcome::InfeasibleAt;
        report.sweeps = sweep;
        report.total_time_s = detail::seconds_since(t_start);
        return result;
      }
      next.iterates[i] = *u.iterate;
      rec.subsystems.push_back({net[static_cast<int>(i)].id, u.iterate->k, u.iterate->objective,
                                u.iterate->residual, u.time_s});
    }
    rec.metric = convergence_metric(current, next);
    rec.time_s = detail::seconds_since(t_sweep);
    report.history.push_back(std::move(rec));
    report.sweeps = sweep;
    current = std::move(next);
    if (opts.keep_history) result.states.push_back(current);

    if (report.history.back().metric <= opts.tol) {
      report.outcome = Outcome::Converged;
      break;
    }
  }
  if (report.outcome != Outcome::Converged) report.outcome = Outcome::MaxSweeps;

  for (const auto& it : current.iterates) {
    RciContract c;
    c.T = it.T;
    c.M = it.M;
    c.k = it.k;
    c.residual = it.residual;
    c.objective = it.objective;
    result.contracts.push_back(std::move(c));
    result.disturbances.push_back(it.disturbance);
  }
  report.total_time_s = detail::seconds_since(t_start);
  return result;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const SynthesisReport& r, bool include_timing = true) {
  Json j;
  j["sweeps"] = r.sweeps;
  j["mode"] = to_string(r.mode);
  j["outcome"] = to_string(r.outcome);
  if (r.infeasible) {
    const auto& d = *r.infeasible;
    Json jd;
    jd["subsystem"] = d.id;
    jd["sweep"] = d.sweep;
    jd["disturbance_radii"] = json_io::from_vector(d.disturbance_radii);
    jd["state_radii"] = json_io::from_vector(d.state_radii);
    jd["input_radii"] = json_io::from_vector(d.input_radii);
    Json att = Json::array();
    for (const auto& [k, s] : d.attempts) att.push_back({{"k", k}, {"status", lp::to_string(s)}});
    jd["attempts"] = std::move(att);
    j["infeasible"] = std::move(jd);
  }
  Json hist = Json::array();
  for (const auto& s : r.history) {
    Json js;
    js["sweep"] = s.sweep;
    js["metric"] = s.metric;
    Json subs = Json::array();
    for (const auto& e : s.subsystems) {
      Json je;
      je["id"] = e.id;
      je["k"] = e.k;
      je["objective"] = e.objective;
      je["residual"] = e.residual;
      if (include_timing) je["solve_time_s"] = e.solve_time_s;
      subs.push_back(std::move(je));
    }
    js["subsystems"] = std::move(subs);
    if (include_timing) js["time_s"] = s.time_s;
    hist.push_back(std::move(js));
  }
  j["history"] = std::move(hist);
  j["warnings"] = r.warnings;
  if (include_timing) j["total_time_s"] = r.total_time_s;
  return j;
}

/// {"contracts": {id: contract}, "report": {...}}
inline Json to_json(const NetworkSystem& net, const NetworkResult& res, bool include_timing = true) {
  Json j;
  Json contracts = Json::object();
  for (std::size_t i = 0; i < res.contracts.size(); ++i) {
    contracts[net[static_cast<int>(i)].id] = to_json(res.contracts[i]);
  }
  j["contracts"] = std::move(contracts);
  j["report"] = to_json(res.report, include_timing);
  return j;
}

/// Contracts keyed by id, returned in the network's subsystem order.
inline std::vector<RciContract> contracts_from_json(const NetworkSystem& net, const Json& doc) {
  const Json& cs = json_io::require(doc, "contracts", "$");
  if (!cs.is_object()) throw ParseError("$.contracts", "expected an object keyed by subsystem id");
  std::vector<RciContract> out;
  for (const auto& sub : net.subsystems()) {
    const std::string path = "$.contracts." + sub.id;
    const auto it = cs.find(sub.id);
    if (it == cs.end()) throw ParseError(path, "missing contract for subsystem");
    RciContract c = contract_from_json(*it, path);
    if (c.T.rows() != sub.state_dim()) throw ParseError(path + ".T", "row count differs from state dimension");
    if (c.M.rows() != sub.input_dim()) throw ParseError(path + ".M", "row count differs from input dimension");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace rci
