#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rci/compositional.hpp"
#include "rci/containment.hpp"
#include "rci/network.hpp"
#include "rci/parallel.hpp"
#include "rci/random.hpp"
#include "rci/rci_single.hpp"

namespace rci {

inline constexpr double kMembershipTol = 1e-6;

class StateOutsideRci : public Error {
 public:
  StateOutsideRci(const std::string& what, double margin) : Error(what), margin_(margin) {}
  /// Smallest ||b||_inf with T b = x, or +inf when no b exists.
  double margin() const { return margin_; }

 private:
  double margin_;
};

struct ControlStep {
  Vector x;
  Vector b;
  Vector u;
  double margin = 0.0;    // ||b||_inf
  double residual = 0.0;  // ||T b - x||_inf
};

/// Set-invariance controller: b = argmin ||b||_inf s.t. T b = x, u = M b.
inline ControlStep invariance_control(const RciContract& c, const Vector& x, double tol = kMembershipTol,
                                      bool tie_break = true) {
  if (x.size() != c.T.rows()) throw DimensionError("invariance_control: state dimension differs from T");
  const auto fit = min_latent_norm(c.T, x, tie_break);
  if (!fit) {
    throw StateOutsideRci("invariance_control: state is outside the span of T",
                          std::numeric_limits<double>::infinity());
  }
  if (fit->t > 1.0 + tol) {
    std::ostringstream msg;
    msg << "invariance_control: state is outside the RCI set (margin " << fit->t << ")";
    throw StateOutsideRci(msg.str(), fit->t);
  }
  ControlStep s;
  s.x = x;
  s.b = fit->b;
  s.u = c.M * fit->b;
  s.margin = fit->t;
  s.residual = s.x.size() == 0 ? 0.0 : (c.T * s.b - x).cwiseAbs().maxCoeff();
  return s;
}

/// Smallest ||b||_inf with T b = x; +inf when x is outside the span.
inline double membership_margin(const Matrix& t, const Vector& x) {
  const auto fit = min_latent_norm(t, x, false);
  return fit ? fit->t : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// One-step verification

struct Counterexample {
  std::string kind;  // "network", "boxed" or "single"
  long long draw = 0;
  std::string id;
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  Vector disturbance;
  Vector next_state;
  double margin = 0.0;
  std::string error;
};

struct VerifyReport {
  long long draws = 0;   // joint network draws
  long long checks = 0;  // membership checks performed
  long long violations = 0;
  double worst_margin = 0.0;
  std::vector<Counterexample> counterexamples;  // first few, in draw order

  bool passed() const { return violations == 0; }
};

struct VerifyOptions {
  long long samples = 10000;
  std::uint64_t seed = 1;
  double tol = kMembershipTol;
  int threads = 0;
  std::size_t max_counterexamples = 10;
};

namespace detail {

/// Independent stream per draw so results do not depend on thread count.
inline Rng draw_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw) {
  SplitMix64 sm(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  const std::uint64_t base = sm.next();
  return Rng(base + 0x9e3779b97f4a7c15ULL * draw);
}

struct DrawOutcome {
  long long checks = 0;
  double worst = 0.0;
  std::vector<Counterexample> bad;
};

inline void merge(VerifyReport& r, std::vector<DrawOutcome>& outs, std::size_t cap) {
  for (auto& o : outs) {
    r.checks += o.checks;
    r.worst_margin = std::max(r.worst_margin, o.worst);
    r.violations += static_cast<long long>(o.bad.size());
    for (auto& c : o.bad) {
      if (r.counterexamples.size() < cap) r.counterexamples.push_back(std::move(c));
    }
  }
}

inline Vector latent(int k, Rng& rng, bool corner) {
  return corner ? sample_corner(k, rng) : sample_latent(k, rng);
}

}  // namespace detail

/// Monte-Carlo check of one contract against the disturbance set Z(0, Gd):
/// `samples` draws with uniform latent state and disturbance, then 2 k draws
/// with both at box corners.
inline VerifyReport verify_contract(const Matrix& a, const Matrix& b, const Matrix& gd, const RciContract& c,
                                    const VerifyOptions& opts = {}) {
  const long long total = opts.samples + 2LL * c.k;
  std::vector<detail::DrawOutcome> outs(static_cast<std::size_t>(total));
  parallel_for(
      static_cast<int>(total),
      [&](int s) {
        Rng rng = detail::draw_rng(opts.seed, 0, static_cast<std::uint64_t>(s));
        const bool corner = s >= opts.samples;
        auto& o = outs[s];
        const Vector x = c.T * detail::latent(c.k, rng, corner);
        const Vector d = gd.cols() == 0 ? Vector(Vector::Zero(a.rows()))
                                        : Vector(gd * detail::latent(static_cast<int>(gd.cols()), rng, corner));
        Counterexample ce;
        ce.kind = "single";
        ce.draw = s;
        ce.states = {x};
        ce.disturbance = d;
        try {
          const ControlStep step = invariance_control(c, x, opts.tol);
          ce.inputs = {step.u};
          ce.next_state = a * x + b * step.u + d;
          ce.margin = membership_margin(c.T, ce.next_state);
        } catch (const Error& e) {
          ce.margin = std::numeric_limits<double>::infinity();
          ce.error = e.what();
        }
        o.checks = 1;
        o.worst = ce.margin;
        if (!(ce.margin <= 1.0 + opts.tol)) o.bad.push_back(std::move(ce));
      },
      opts.threads);
  VerifyReport r;
  r.draws = total;
  detail::merge(r, outs, opts.max_counterexamples);
  return r;
}

/// One-step check of the assume-guarantee conditions on the whole network.
///
/// Network draws: every subsystem gets a uniform latent b_j, x_j = T_j b_j,
/// u_j from invariance_control, and d_i from Z(0, Gd_i) (uniform latent on
/// even draws, a random corner on odd draws); then x_i+ must lie in
/// Z(0, T_i). A final 2 max_k draws use corner latents for both.
///
/// Boxed draws: per subsystem, the coupling term plus d_i is replaced by a
/// corner of the boxed coupling disturbance rebuilt from these contracts.
inline VerifyReport verify_one_step(const NetworkSystem& net, const std::vector<RciContract>& contracts,
                                    const VerifyOptions& opts = {}) {
  const int count = net.size();
  if (static_cast<int>(contracts.size()) != count) {
    throw DimensionError("verify_one_step: expected " + std::to_string(count) + " contracts");
  }
  int k_max = 0;
  for (int i = 0; i < count; ++i) {
    const auto& c = contracts[i];
    if (c.T.rows() != net[i].state_dim() || c.M.rows() != net[i].input_dim() || c.T.cols() != c.M.cols()) {
      throw DimensionError("verify_one_step: contract '" + net[i].id + "' has wrong shape");
    }
    k_max = std::max(k_max, c.k);
  }

  SweepState st;
  for (const auto& c : contracts) st.iterates.push_back({c.T, c.M, c.k, Matrix(), 0.0, 0.0});

  const long long joint = opts.samples + 2LL * k_max;
  std::vector<detail::DrawOutcome> outs(static_cast<std::size_t>(joint));
  parallel_for(
      static_cast<int>(joint),
      [&](int s) {
        Rng rng = detail::draw_rng(opts.seed, 1, static_cast<std::uint64_t>(s));
        const bool corner_state = s >= opts.samples;
        const bool corner_dist = corner_state || (s % 2 == 1);
        auto& o = outs[s];
        std::vector<Vector> x(count), u(count);
        std::string failure;
        for (int j = 0; j < count; ++j) {
          x[j] = contracts[j].T * detail::latent(contracts[j].k, rng, corner_state);
        }
        for (int j = 0; j < count; ++j) {
          try {
            u[j] = invariance_control(contracts[j], x[j], opts.tol).u;
          } catch (const Error& e) {
            u[j] = Vector::Zero(net[j].input_dim());
            if (failure.empty()) failure = net[j].id + ": " + e.what();
          }
        }
        for (int i = 0; i < count; ++i) {
          const auto& sub = net[i];
          const Matrix& gd = sub.Gd.generators();
          const Vector d = gd.cols() == 0 ? Vector(Vector::Zero(sub.state_dim()))
                                          : Vector(gd * detail::latent(static_cast<int>(gd.cols()), rng, corner_dist));
          Vector next = sub.A * x[i] + sub.B * u[i] + d;
          for (int ci : net.incoming(i)) {
            const auto& cp = net.couplings()[ci];
            const int j = net.index_of(cp.from);
            if (cp.A) next += *cp.A * x[j];
            if (cp.B) next += *cp.B * u[j];
          }
          const double m = failure.empty() ? membership_margin(contracts[i].T, next)
                                           : std::numeric_limits<double>::infinity();
          ++o.checks;
          o.worst = std::max(o.worst, m);
          if (!(m <= 1.0 + opts.tol)) {
            Counterexample ce;
            ce.kind = "network";
            ce.draw = s;
            ce.id = sub.id;
            ce.states = x;
            ce.inputs = u;
            ce.disturbance = d;
            ce.next_state = next;
            ce.margin = m;
            ce.error = failure;
            o.bad.push_back(std::move(ce));
          }
        }
      },
      opts.threads);

  VerifyReport r;
  r.draws = joint;
  detail::merge(r, outs, opts.max_counterexamples);

  // Boxed-disturbance corners, per subsystem.
  std::vector<detail::DrawOutcome> boxed(static_cast<std::size_t>(count));
  parallel_for(
      count,
      [&](int i) {
        const auto& sub = net[i];
        const Matrix w = reduce_box(coupling_disturbance(net, i, st)).generators();
        VerifyOptions so = opts;
        so.threads = 1;
        so.seed = opts.seed ^ (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(i + 1));
        so.samples = std::max<long long>(1, opts.samples / std::max(1, count));
        VerifyReport ri = verify_contract(sub.A, sub.B, w, contracts[i], so);
        auto& o = boxed[i];
        o.checks = ri.checks;
        o.worst = ri.worst_margin;
        for (auto& ce : ri.counterexamples) {
          ce.kind = "boxed";
          ce.id = sub.id;
          o.bad.push_back(std::move(ce));
        }
        // verify_contract caps its own list; keep the count exact.
        for (long long extra = static_cast<long long>(o.bad.size()); extra < ri.violations; ++extra) {
          Counterexample ce;
          ce.kind = "boxed";
          ce.id = sub.id;
          ce.margin = ri.worst_margin;
          o.bad.push_back(std::move(ce));
        }
      },
      opts.threads);
  detail::merge(r, boxed, opts.max_counterexamples);
  return r;
}

inline Json to_json(const VerifyReport& r) {
  Json j;
  j["draws"] = r.draws;
  j["checks"] = r.checks;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["passed"] = r.passed();
  Json ces = Json::array();
  for (const auto& c : r.counterexamples) {
    Json jc;
    jc["kind"] = c.kind;
    jc["draw"] = c.draw;
    jc["subsystem"] = c.id;
    Json xs = Json::array();
    for (const auto& x : c.states) xs.push_back(json_io::from_vector(x));
    Json us = Json::array();
    for (const auto& u : c.inputs) us.push_back(json_io::from_vector(u));
    jc["states"] = std::move(xs);
    jc["inputs"] = std::move(us);
    jc["disturbance"] = json_io::from_vector(c.disturbance);
    jc["next_state"] = json_io::from_vector(c.next_state);
    if (std::isfinite(c.margin)) {
      jc["margin"] = c.margin;
    } else {
      jc["margin"] = nullptr;
    }
    if (!c.error.empty()) jc["error"] = c.error;
    ces.push_back(std::move(jc));
  }
  j["counterexamples"] = std::move(ces);
  return j;
}

// ---------------------------------------------------------------------------
// Nominal trajectories

/// Disturbance-free reference (x_bar, u_bar) for tube mode, in subsystem
/// order. steps[t].x has one vector per subsystem.
struct NominalStep {
  std::vector<Vector> x;
  std::vector<Vector> u;
};

struct NominalTrajectory {
  std::vector<NominalStep> steps;
};

inline constexpr double kNominalTol = 1e-8;

/// x_i+ = A_ii x_i + B_ii u_i + sum_j (A_ij x_j + B_ij u_j), no disturbance.
inline std::vector<Vector> step_dynamics(const NetworkSystem& net, const std::vector<Vector>& x,
                                         const std::vector<Vector>& u, const std::vector<Vector>* d = nullptr) {
  std::vector<Vector> next(net.size());
  for (int i = 0; i < net.size(); ++i) {
    const auto& sub = net[i];
    next[i] = sub.A * x[i] + sub.B * u[i];
    for (int ci : net.incoming(i)) {
      const auto& cp = net.couplings()[ci];
      const int j = net.index_of(cp.from);
      if (cp.A) next[i] += *cp.A * x[j];
      if (cp.B) next[i] += *cp.B * u[j];
    }
    if (d) next[i] += (*d)[i];
  }
  return next;
}

/// Largest dynamics mismatch between consecutive steps.
inline double nominal_residual(const NetworkSystem& net, const NominalTrajectory& nom) {
  double worst = 0.0;
  for (std::size_t t = 0; t + 1 < nom.steps.size(); ++t) {
    const auto pred = step_dynamics(net, nom.steps[t].x, nom.steps[t].u);
    for (int i = 0; i < net.size(); ++i) {
      if (pred[i].size() > 0) worst = std::max(worst, (pred[i] - nom.steps[t + 1].x[i]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// Rolls the disturbance-free dynamics forward from x0 under `inputs`.
inline NominalTrajectory propagate_nominal(const NetworkSystem& net, std::vector<Vector> x0,
                                           const std::vector<std::vector<Vector>>& inputs) {
  NominalTrajectory nom;
  std::vector<Vector> x = std::move(x0);
  for (const auto& u : inputs) {
    nom.steps.push_back({x, u});
    x = step_dynamics(net, x, u);
  }
  return nom;
}

inline Json to_json(const NetworkSystem& net, const NominalTrajectory& nom) {
  Json j = Json::array();
  for (std::size_t t = 0; t < nom.steps.size(); ++t) {
    Json js;
    js["t"] = t;
    Json xs = Json::object();
    Json us = Json::object();
    for (int i = 0; i < net.size(); ++i) {
      xs[net[i].id] = json_io::from_vector(nom.steps[t].x[i]);
      us[net[i].id] = json_io::from_vector(nom.steps[t].u[i]);
    }
    js["x"] = std::move(xs);
    js["u"] = std::move(us);
    j.push_back(std::move(js));
  }
  return j;
}

/// Parses [{"t": 0, "x": {id: [...]}, "u": {id: [...]}}, ...] and rejects
/// trajectories whose dynamics residual exceeds 1e-8.
inline NominalTrajectory nominal_from_json(const NetworkSystem& net, const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("$", "expected a non-empty array of steps");
  NominalTrajectory nom;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string path = "$[" + std::to_string(t) + "]";
    const Json& js = j[t];
    if (!js.is_object()) throw ParseError(path, "expected an object");
    const Json& jt = json_io::require(js, "t", path);
    if (!jt.is_number_integer() || jt.get<long long>() != static_cast<long long>(t)) {
      throw ParseError(path + ".t", "expected step index " + std::to_string(t));
    }
    NominalStep step;
    for (int i = 0; i < net.size(); ++i) {
      const auto& sub = net[i];
      const Json& jx = json_io::require(js, "x", path);
      const Json& ju = json_io::require(js, "u", path);
      const std::string px = path + ".x." + sub.id;
      const std::string pu = path + ".u." + sub.id;
      if (!jx.is_object() || !jx.contains(sub.id)) throw ParseError(px, "missing state");
      if (!ju.is_object() || !ju.contains(sub.id)) throw ParseError(pu, "missing input");
      Vector x = json_io::to_vector(jx.at(sub.id), px);
      Vector u = json_io::to_vector(ju.at(sub.id), pu);
      if (x.size() != sub.state_dim()) throw ParseError(px, "wrong length");
      if (u.size() != sub.input_dim()) throw ParseError(pu, "wrong length");
      step.x.push_back(std::move(x));
      step.u.push_back(std::move(u));
    }
    nom.steps.push_back(std::move(step));
  }
  const double res = nominal_residual(net, nom);
  if (res > kNominalTol) {
    std::ostringstream msg;
    msg << "dynamics residual " << res << " exceeds " << kNominalTol;
    throw ParseError("$", msg.str());
  }
  return nom;
}

// ---------------------------------------------------------------------------
// Closed-loop simulation

enum class DisturbanceMode { Uniform, Corner, WorstAxis };

inline const char* to_string(DisturbanceMode m) {
  switch (m) {
    case DisturbanceMode::Uniform: return "uniform";
    case DisturbanceMode::Corner: return "corner";
    case DisturbanceMode::WorstAxis: return "worst_axis";
  }
  return "?";
}

inline std::optional<DisturbanceMode> disturbance_mode_from_string(const std::string& s) {
  if (s == "uniform") return DisturbanceMode::Uniform;
  if (s == "corner") return DisturbanceMode::Corner;
  if (s == "worst_axis" || s == "worst-axis") return DisturbanceMode::WorstAxis;
  return std::nullopt;
}

struct LogEntry {
  int t = 0;
  int subsystem = 0;
  Vector x;  // state (plain) or actual state x_bar + e (tube)
  Vector u;  // applied input
  Vector d;
  bool member = true;  // x (plain) or e (tube) inside Z(0, T)
  Vector x_nominal;    // tube mode only
  Vector u_nominal;
};

struct TrajectoryLog {
  std::vector<std::string> ids;
  bool tube = false;
  bool aborted = false;  // a membership check failed
  std::string abort_reason;
  std::vector<LogEntry> entries;  // time-major, then subsystem order
};

struct SimulationOptions {
  int steps = 100;
  std::uint64_t seed = 1;
  DisturbanceMode mode = DisturbanceMode::Uniform;
  double tol = kMembershipTol;
  std::vector<Vector> x0;  // initial state (plain) or error (tube); zero when empty
};

namespace detail {

/// Corner of Z(0, G) that pushes `direction` furthest outward.
inline Vector worst_axis_disturbance(const Matrix& g, const Vector& direction) {
  Vector s(g.cols());
  const Vector proj = g.transpose() * direction;
  for (Eigen::Index c = 0; c < s.size(); ++c) s(c) = proj(c) >= 0.0 ? 1.0 : -1.0;
  return g * s;
}

}  // namespace detail

/// Simulates the network under the decentralized invariance controllers.
/// Without a nominal, u_i = M_i b(x_i). With a nominal, the error
/// e_i = x_i - x_bar_i is controlled, u_i = u_bar_i + M_i b(e_i), and the run
/// lasts as long as the nominal. Stops at the first membership failure.
inline TrajectoryLog simulate_closed_loop(const NetworkSystem& net, const std::vector<RciContract>& contracts,
                                          const SimulationOptions& opts,
                                          const NominalTrajectory* nominal = nullptr) {
  const int count = net.size();
  if (static_cast<int>(contracts.size()) != count) {
    throw DimensionError("simulate_closed_loop: expected " + std::to_string(count) + " contracts");
  }
  if (nominal && nominal->steps.empty()) throw Error("simulate_closed_loop: empty nominal trajectory");
  TrajectoryLog log;
  log.tube = nominal != nullptr;
  for (const auto& s : net.subsystems()) log.ids.push_back(s.id);

  std::vector<Vector> e(count);
  for (int i = 0; i < count; ++i) {
    if (opts.x0.empty()) {
      e[i] = Vector::Zero(net[i].state_dim());
    } else {
      if (static_cast<int>(opts.x0.size()) != count || opts.x0[i].size() != net[i].state_dim()) {
        throw DimensionError("simulate_closed_loop: initial state has wrong shape");
      }
      e[i] = opts.x0[i];
    }
  }
  const int steps = nominal ? static_cast<int>(nominal->steps.size()) : opts.steps;
  Rng rng(opts.seed);

  for (int t = 0; t < steps; ++t) {
    std::vector<Vector> x(count), u(count), d(count), du(count);
    std::vector<bool> member(count, true);
    for (int i = 0; i < count; ++i) {
      x[i] = nominal ? Vector(nominal->steps[t].x[i] + e[i]) : e[i];
      const double m = membership_margin(contracts[i].T, e[i]);
      member[i] = m <= 1.0 + opts.tol;
      if (member[i]) {
        du[i] = invariance_control(contracts[i], e[i], opts.tol).u;
      } else {
        du[i] = Vector::Zero(net[i].input_dim());
        if (!log.aborted) {
          log.aborted = true;
          std::ostringstream msg;
          msg << "t=" << t << " subsystem '" << net[i].id << "' left its RCI set (margin " << m << ")";
          log.abort_reason = msg.str();
        }
      }
      u[i] = nominal ? Vector(nominal->steps[t].u[i] + du[i]) : du[i];
    }
    for (int i = 0; i < count; ++i) {
      const Matrix& g = net[i].Gd.generators();
      if (g.cols() == 0) {
        d[i] = Vector::Zero(net[i].state_dim());
        continue;
      }
      switch (opts.mode) {
        case DisturbanceMode::Uniform: d[i] = g * sample_latent(static_cast<int>(g.cols()), rng); break;
        case DisturbanceMode::Corner: d[i] = g * sample_corner(static_cast<int>(g.cols()), rng); break;
        case DisturbanceMode::WorstAxis: d[i] = detail::worst_axis_disturbance(g, e[i]); break;
      }
    }
    for (int i = 0; i < count; ++i) {
      LogEntry le;
      le.t = t;
      le.subsystem = i;
      le.x = x[i];
      le.u = u[i];
      le.d = d[i];
      le.member = member[i];
      if (nominal) {
        le.x_nominal = nominal->steps[t].x[i];
        le.u_nominal = nominal->steps[t].u[i];
      }
      log.entries.push_back(std::move(le));
    }
    if (log.aborted) break;
    // The error dynamics are the full dynamics minus the nominal ones.
    e = step_dynamics(net, e, du, &d);
  }
  return log;
}

inline bool all_members(const TrajectoryLog& log) {
  return std::all_of(log.entries.begin(), log.entries.end(), [](const LogEntry& e) { return e.member; });
}

/// CSV with columns t, subsystem, x*, u*, d*, member; tube logs append
/// xn* and un* (the nominal). Column counts follow the widest subsystem.
inline void write_csv(std::ostream& out, const TrajectoryLog& log) {
  int nx = 0, nu = 0, nd = 0;
  for (const auto& e : log.entries) {
    nx = std::max(nx, static_cast<int>(e.x.size()));
    nu = std::max(nu, static_cast<int>(e.u.size()));
    nd = std::max(nd, static_cast<int>(e.d.size()));
  }
  out << "t,subsystem";
  for (int c = 0; c < nx; ++c) out << ",x" << c;
  for (int c = 0; c < nu; ++c) out << ",u" << c;
  for (int c = 0; c < nd; ++c) out << ",d" << c;
  out << ",member";
  if (log.tube) {
    for (int c = 0; c < nx; ++c) out << ",xn" << c;
    for (int c = 0; c < nu; ++c) out << ",un" << c;
  }
  out << '\n';
  const auto old_prec = out.precision(17);
  auto cells = [&](const Vector& v, int width) {
    for (int c = 0; c < width; ++c) {
      out << ',';
      if (c < v.size()) out << v(c);
    }
  };
  for (const auto& e : log.entries) {
    out << e.t << ',' << log.ids[e.subsystem];
    cells(e.x, nx);
    cells(e.u, nu);
    cells(e.d, nd);
    out << ',' << (e.member ? 1 : 0);
    if (log.tube) {
      cells(e.x_nominal, nx);
      cells(e.u_nominal, nu);
    }
    out << '\n';
  }
  out.precision(old_prec);
}

}  // namespace rci
