// SPDX-License-Identifier: Apache-2.0
#include "vfvm/phasesep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "vfvm/assembly.hpp"
#include "vfvm/errors.hpp"
#include "vfvm/mesh_io.hpp"

namespace vfvm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

PhaseModel checked_model(const PhaseModel& m) {
  if (!(m.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(m.m_coef > 0.0)) throw ConfigError("m must be positive");
  if (!(m.f_coef > 0.0)) throw ConfigError("f must be positive");
  if (!(m.eps0 > 0.0 && m.eps0 < 0.5)) throw ConfigError("eps0 must lie in (0, 0.5)");
  return m;
}

std::vector<PhaseOperators::FluxEdge> flux_edges(const Mesh& m) {
  std::vector<PhaseOperators::FluxEdge> out;
  for (const EdgeGeometry& e : edge_geometry(m)) out.push_back({e.i, e.j, e.sigma / e.length});
  return out;
}

SparseMatrix kernel_matrix(const Mesh& m, const PhaseModel& model) {
  return assemble_laplace(m).plus_scaled(model.sigma * model.sigma, assemble_mass(m), 1.0);
}

bool inside_unit(const std::vector<double>& u) {
  for (double v : u)
    if (!(v > 0.0 && v < 1.0)) return false;
  return true;
}

// Adds sign * f w_e ((u+_i - u+_j) + M_e (wbar_i - wbar_j)) into out[i] and
// the negative into out[j], with wbar = (w+ + w)/2.
void add_fluxes(const PhaseOperators& ops, const std::vector<double>& u_plus,
                const std::vector<double>& w_plus, const std::vector<double>& w, double sign,
                std::vector<double>& out) {
  const double f = ops.model.f_coef;
  for (const PhaseOperators::FluxEdge& e : ops.edges) {
    const double du = u_plus[e.i] - u_plus[e.j];
    const double dwbar = 0.5 * ((w_plus[e.i] + w[e.i]) - (w_plus[e.j] + w[e.j]));
    const double me = edge_mobility(u_plus[e.i], u_plus[e.j]).value;
    const double flux = sign * f * e.w * (du + me * dwbar);
    out[e.i] += flux;
    out[e.j] -= flux;
  }
}

}  // namespace

PhiValues phi_derivatives(double u) {
  if (!(u > 0.0 && u < 1.0)) throw OutOfBounds("phi_derivatives: u must lie in (0,1)");
  const double lu = std::log(u), lv = std::log(1.0 - u);
  return {u * lu + (1.0 - u) * lv, lu - lv, 1.0 / (u * (1.0 - u))};
}

EdgeMobility edge_mobility(double a, double b, MobilityAverage avg) {
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
    throw OutOfBounds("edge_mobility: arguments must lie in (0,1)");
  if (avg == MobilityAverage::ArithmeticMean)
    return {0.5 * (a * (1.0 - a) + b * (1.0 - b)), 0.5 * (1.0 - 2.0 * a), 0.5 * (1.0 - 2.0 * b)};
  if (a == b) return {a * (1.0 - a), 0.5 * (1.0 - 2.0 * a), 0.5 * (1.0 - 2.0 * a)};
  // Canonical orientation a > b makes the value exactly symmetric.
  if (a < b) {
    const EdgeMobility s = edge_mobility(b, a, avg);
    return {s.value, s.db, s.da};
  }
  // (a-b)/(phi'(a)-phi'(b)) is the logarithmic mean L of p and q. Both
  // dL/dp = (t - 1 + e^-t)/t^2 and dL/dq = (e^t - 1 - t)/t^2 have removable
  // singularities at t = 0, bridged by their series. Near the diagonal
  // log1p(r) keeps t accurate; far from it 1 + r would cancel, so the ratio
  // feeds log directly.
  const double p = a * (1.0 - b), q = b * (1.0 - a);
  const double r = (p - q) / q;
  double lmean, lp, lq;
  if (r < 0.5) {
    const double t = std::log1p(r);
    if (std::abs(t) < 1e-3) {
      lmean = r == 0.0 ? q : q * (r / t);
      lp = 0.5 - t / 6.0 + t * t / 24.0 - t * t * t / 120.0;
      lq = 0.5 + t / 6.0 + t * t / 24.0 + t * t * t / 120.0;
    } else {
      lmean = (p - q) / t;
      lp = (1.0 - lmean / p) / t;
      lq = (lmean / q - 1.0) / t;
    }
  } else {
    const double t = std::log(p / q);
    lmean = (p - q) / t;
    lp = (1.0 - lmean / p) / t;
    lq = (lmean / q - 1.0) / t;
  }
  return {lmean, lp * (1.0 - b) - lq * b, lq * (1.0 - a) - lp * a};
}

PhaseOperators::PhaseOperators(const Mesh& m, const PhaseModel& mdl)
    : model(checked_model(mdl)),
      vol(assemble_mass(m).diagonal()),
      edges(flux_edges(m)),
      kernel(kernel_matrix(m, model)),
      kernel_lu(kernel) {}

std::vector<double> solve_potential(const PhaseOperators& ops, const std::vector<double>& u) {
  const int n = static_cast<int>(ops.vol.size());
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = ops.vol[i] * ops.model.m_coef * (1.0 - 2.0 * u[i]);
  return ops.kernel_lu.solve(rhs);
}

std::vector<double> solve_potential(const Mesh& m, const PhaseModel& model,
                                    const std::vector<double>& u) {
  return solve_potential(PhaseOperators(m, model), u);
}

std::vector<double> step_residual(const PhaseOperators& ops, const PhaseState& state,
                                  const std::vector<double>& u_plus,
                                  const std::vector<double>& w_plus, double tau) {
  if (!inside_unit(u_plus)) throw OutOfBounds("step_residual: u_plus must lie in (0,1)");
  const int n = static_cast<int>(ops.vol.size());
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = ops.vol[i] * (state.u[i] - u_plus[i]) / tau;
  add_fluxes(ops, u_plus, w_plus, state.w, -1.0, r);
  return r;
}

std::vector<double> step_residual(const Mesh& m, const PhaseModel& model, const PhaseState& state,
                                  const std::vector<double>& u_plus,
                                  const std::vector<double>& w_plus, double tau) {
  return step_residual(PhaseOperators(m, model), state, u_plus, w_plus, tau);
}

std::vector<double> coupled_residual(const PhaseOperators& ops, const PhaseState& state,
                                     double tau, const std::vector<double>& x) {
  const int n = static_cast<int>(ops.vol.size());
  std::vector<double> uplus(n), wplus(n);
  for (int i = 0; i < n; ++i) {
    uplus[i] = x[2 * i];
    wplus[i] = x[2 * i + 1];
  }
  if (!inside_unit(uplus)) return std::vector<double>(2 * n, kNan);
  std::vector<double> ru(n);
  for (int i = 0; i < n; ++i) ru[i] = ops.vol[i] * (uplus[i] - state.u[i]) / tau;
  add_fluxes(ops, uplus, wplus, state.w, 1.0, ru);
  const std::vector<double> kw = ops.kernel.multiply(wplus);
  std::vector<double> r(2 * n);
  for (int i = 0; i < n; ++i) {
    r[2 * i] = ru[i];
    r[2 * i + 1] = kw[i] - ops.vol[i] * ops.model.m_coef * (1.0 - 2.0 * uplus[i]);
  }
  return r;
}

SparseMatrix coupled_jacobian(const PhaseOperators& ops, const PhaseState& state, double tau,
                              const std::vector<double>& x) {
  const int n = static_cast<int>(ops.vol.size());
  const double f = ops.model.f_coef;
  std::vector<Triplet> trip;
  trip.reserve(2 * n + ops.kernel.nnz() + 8 * static_cast<int>(ops.edges.size()));
  for (int i = 0; i < n; ++i) {
    trip.push_back({2 * i, 2 * i, ops.vol[i] / tau});
    trip.push_back({2 * i + 1, 2 * i, 2.0 * ops.model.m_coef * ops.vol[i]});
  }
  const std::vector<int>& rp = ops.kernel.row_ptr();
  const std::vector<int>& cols = ops.kernel.cols();
  const std::vector<double>& vals = ops.kernel.values();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k) trip.push_back({2 * i + 1, 2 * cols[k] + 1, vals[k]});
  for (const PhaseOperators::FluxEdge& e : ops.edges) {
    const EdgeMobility me = edge_mobility(x[2 * e.i], x[2 * e.j]);
    const double dwbar =
        0.5 * ((x[2 * e.i + 1] + state.w[e.i]) - (x[2 * e.j + 1] + state.w[e.j]));
    const double fw = f * e.w;
    const double dfi = fw * (1.0 + me.da * dwbar);
    const double dfj = fw * (-1.0 + me.db * dwbar);
    const double dwi = fw * 0.5 * me.value;
    trip.push_back({2 * e.i, 2 * e.i, dfi});
    trip.push_back({2 * e.i, 2 * e.j, dfj});
    trip.push_back({2 * e.j, 2 * e.i, -dfi});
    trip.push_back({2 * e.j, 2 * e.j, -dfj});
    trip.push_back({2 * e.i, 2 * e.i + 1, dwi});
    trip.push_back({2 * e.i, 2 * e.j + 1, -dwi});
    trip.push_back({2 * e.j, 2 * e.i + 1, -dwi});
    trip.push_back({2 * e.j, 2 * e.j + 1, dwi});
  }
  return SparseMatrix::from_triplets(2 * n, std::move(trip));
}

namespace {

// One backward Euler step; fills u, w, t, tau, F and leaves history alone so
// the run loop can keep a single growing log instead of copying it per attempt.
void step_fields(const PhaseOperators& ops, const PhaseState& state, double tau, NewtonConfig cfg,
                 int* iters_out, PhaseState& next) {
  if (!(tau > 0.0)) throw Error("implicit_euler_step: tau must be positive");
  const int n = static_cast<int>(ops.vol.size());
  if (cfg.residual_scale.empty()) {
    cfg.residual_scale.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      cfg.residual_scale[2 * i] = ops.vol[i] / tau;
      cfg.residual_scale[2 * i + 1] = ops.vol[i];
    }
  }
  if (cfg.polish_iters < 1) cfg.polish_iters = 1;
  std::vector<double> x0(2 * n);
  for (int i = 0; i < n; ++i) {
    x0[2 * i] = state.u[i];
    x0[2 * i + 1] = state.w[i];
  }
  NewtonResult nr;
  try {
    nr = newton_solve(
        [&](const std::vector<double>& x) { return coupled_residual(ops, state, tau, x); },
        [&](const std::vector<double>& x) { return coupled_jacobian(ops, state, tau, x); },
        std::move(x0), cfg);
  } catch (const NotConverged& e) {
    throw NewtonFailure(e.what());
  } catch (const SingularJacobian& e) {
    throw NewtonFailure(e.what());
  }
  if (iters_out) *iters_out = nr.iterations;
  next.u.resize(n);
  next.w.resize(n);
  for (int i = 0; i < n; ++i) {
    next.u[i] = nr.x[2 * i];
    next.w[i] = nr.x[2 * i + 1];
  }
  for (int i = 0; i < n; ++i)
    if (!(next.u[i] > 0.0 && next.u[i] < 1.0))
      throw BoundsViolation("implicit_euler_step: u leaves (0,1) at vertex " + std::to_string(i));
  next.t = state.t + tau;
  next.tau = tau;
  next.F = free_energy(ops, next.u);
}

}  // namespace

PhaseState implicit_euler_step(const PhaseOperators& ops, const PhaseState& state, double tau,
                               NewtonConfig cfg, int* iters_out) {
  PhaseState next;
  step_fields(ops, state, tau, std::move(cfg), iters_out, next);
  next.history = state.history;
  next.history.push_back({next.t, tau, next.F, (next.F - state.F) / tau});
  return next;
}

PhaseState implicit_euler_step(const Mesh& m, const PhaseModel& model, const PhaseState& state,
                               double tau, const NewtonConfig& cfg) {
  return implicit_euler_step(PhaseOperators(m, model), state, tau, cfg);
}

double free_energy(const PhaseOperators& ops, const std::vector<double>& u) {
  const int n = static_cast<int>(ops.vol.size());
  std::vector<double> rhs(n);
  double phi_term = 0.0;
  for (int i = 0; i < n; ++i) {
    phi_term += ops.vol[i] * phi_derivatives(u[i]).phi;
    rhs[i] = ops.vol[i] * ops.model.m_coef * (1.0 - u[i]);
  }
  const std::vector<double> wt = ops.kernel_lu.solve(rhs);
  double interaction = 0.0;
  for (int i = 0; i < n; ++i) interaction += ops.vol[i] * u[i] * wt[i];
  return phi_term + interaction;
}

double free_energy(const Mesh& m, const PhaseModel& model, const std::vector<double>& u) {
  return free_energy(PhaseOperators(m, model), u);
}

double total_mass(const PhaseOperators& ops, const std::vector<double>& u) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = ops.vol[i] * u[i];
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

std::vector<double> initial_profile(const Mesh& m, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 0.5)) throw ConfigError("eps0 must lie in (0, 0.5)");
  double lo = m.vertices.front()[0], hi = lo;
  for (const Vec3& v : m.vertices) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
  }
  const double span = hi - lo;
  std::vector<double> u(m.vertices.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double s = span > 0.0 ? (m.vertices[i][0] - lo) / span : 0.0;
    u[i] = eps0 + s / (1.0 + 2.0 * eps0);
  }
  return u;
}

PhaseState make_state(const PhaseOperators& ops, std::vector<double> u, double t, double tau) {
  PhaseState s;
  s.w = solve_potential(ops, u);
  s.F = free_energy(ops, u);
  s.u = std::move(u);
  s.t = t;
  s.tau = tau;
  s.history.push_back({t, 0.0, s.F, 0.0});
  return s;
}

PhaseState run_simulation(const PhaseOperators& ops, PhaseState state, const StepControl& ctrl,
                          double t_end, const OutputSink& sink) {
  if (!(ctrl.target > 0.0)) throw ConfigError("target must be positive");
  if (!(ctrl.grow > 1.0)) throw ConfigError("grow must exceed 1");
  if (!(ctrl.shrink > 0.0 && ctrl.shrink < 1.0)) throw ConfigError("shrink must lie in (0,1)");
  if (!(ctrl.tau_min > 0.0)) throw ConfigError("tau_min must be positive");
  if (!(ctrl.tau_min <= ctrl.tau_max)) throw ConfigError("tau_max must be at least tau_min");
  if (!(t_end >= state.t)) throw ConfigError("t_end must not precede the state time");

  double tau = std::clamp(state.tau > 0.0 ? state.tau : ctrl.tau_min, ctrl.tau_min, ctrl.tau_max);
  std::size_t next_snap = 0;
  while (next_snap < sink.snapshot_times.size() && sink.snapshot_times[next_snap] <= state.t)
    ++next_snap;

  // Last two accepted (t, F) points feed the predictor.
  double t1 = state.t, f1 = state.F, t0 = 0.0, f0 = 0.0;
  int have = 1;
  int floor_rejects = 0;

  PhaseState next;
  while (t_end - state.t > 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double tau_try = std::min(tau, t_end - state.t);
    const bool at_floor = tau_try <= ctrl.tau_min;
    int iters = -1;
    bool newton_ok = true;
    try {
      step_fields(ops, state, tau_try, {}, &iters, next);
    } catch (const NewtonFailure&) {
      newton_ok = false;
    } catch (const BoundsViolation&) {
      newton_ok = false;
    }

    bool accept = false;
    if (newton_ok) {
      if (have < 2) {
        accept = true;
      } else {
        // The floor is absolute: the extrapolation error and |dF| both shrink
        // like tau, so a pure ratio test cannot be satisfied by retrying once
        // the F-slope jumped between steps. Below the floor a small enough
        // tau always passes.
        const double f_pred = f1 + (f1 - f0) / (t1 - t0) * (next.t - t1);
        const double floor = 1e-6 * (1.0 + std::abs(next.F));
        accept = std::abs(f_pred - next.F) <= ctrl.target * std::max(std::abs(next.F - f1), floor);
      }
    }

    if (sink.on_step) {
      StepLog log;
      log.t = state.t + tau_try;
      log.tau = tau_try;
      log.F = newton_ok ? next.F : kNan;
      log.dF_dt = newton_ok ? (next.F - state.F) / tau_try : kNan;
      log.newton_iters = newton_ok ? iters : -1;
      log.accepted = accept;
      sink.on_step(log);
    }

    if (accept) {
      floor_rejects = 0;
      t0 = t1;
      f0 = f1;
      t1 = next.t;
      f1 = next.F;
      ++have;
      state.history.push_back({next.t, tau_try, next.F, (next.F - state.F) / tau_try});
      state.u.swap(next.u);
      state.w.swap(next.w);
      state.t = next.t;
      state.tau = next.tau;
      state.F = next.F;
      bool crossed = false;
      while (next_snap < sink.snapshot_times.size() &&
             sink.snapshot_times[next_snap] <= state.t) {
        crossed = true;
        ++next_snap;
      }
      if (crossed && sink.on_snapshot) sink.on_snapshot(state);
      tau = std::min(tau * ctrl.grow, ctrl.tau_max);
    } else {
      if (at_floor) {
        if (++floor_rejects >= 2)
          throw StepFloorReached("step control: tau_min rejected twice in a row");
      } else {
        floor_rejects = 0;
      }
      tau = std::max(tau_try * ctrl.shrink, ctrl.tau_min);
    }
  }
  if (sink.on_snapshot) sink.on_snapshot(state);
  state.tau = tau;
  return state;
}

PhaseState run_simulation(const Mesh& m, const PhaseModel& model, const StepControl& ctrl,
                          double t_end, const OutputSink& sink) {
  PhaseOperators ops(m, model);
  PhaseState s0 = make_state(ops, initial_profile(m, model.eps0), 0.0, ctrl.tau_min);
  return run_simulation(ops, std::move(s0), ctrl, t_end, sink);
}

std::vector<double> log_spaced_times(double t0, double t1, int n) {
  if (n < 1) return {};
  if (!(t0 > 0.0 && t0 <= t1)) throw ConfigError("snapshot times need 0 < first <= last");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = t1;
    return out;
  }
  const double step = std::log(t1 / t0) / (n - 1);
  for (int k = 0; k < n; ++k) out[k] = t0 * std::exp(step * k);
  out.front() = t0;
  out.back() = t1;
  return out;
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double config_num(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + val + "'");
  }
}

int config_int(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" + val + "'");
  }
}

[[noreturn]] void config_fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trimmed(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string val = trimmed(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    if (key == "mesh") {
      cfg.mesh_path = val;
    } else if (key == "out") {
      cfg.out_dir = val;
    } else if (key == "rule") {
      if (val == "uniform")
        cfg.rule = DiagonalRule::Uniform;
      else if (val == "mixed")
        cfg.rule = DiagonalRule::Mixed;
      else
        config_fail(key, "must be uniform or mixed");
    } else if (key == "nx") {
      cfg.nx = config_int(key, val);
    } else if (key == "ny") {
      cfg.ny = config_int(key, val);
    } else if (key == "snapshots") {
      cfg.snapshots = config_int(key, val);
    } else if (key == "lx") {
      cfg.lx = config_num(key, val);
    } else if (key == "ly") {
      cfg.ly = config_num(key, val);
    } else if (key == "sigma") {
      cfg.model.sigma = config_num(key, val);
    } else if (key == "m") {
      cfg.model.m_coef = config_num(key, val);
    } else if (key == "f") {
      cfg.model.f_coef = config_num(key, val);
    } else if (key == "eps0") {
      cfg.model.eps0 = config_num(key, val);
    } else if (key == "u0") {
      if (val == "ramp") {
        cfg.u0 = -1.0;
      } else {
        cfg.u0 = config_num(key, val);
        if (!(cfg.u0 > 0.0 && cfg.u0 < 1.0)) config_fail(key, "must be 'ramp' or lie in (0,1)");
      }
    } else if (key == "tau0") {
      cfg.tau0 = config_num(key, val);
    } else if (key == "tau_min") {
      cfg.ctrl.tau_min = config_num(key, val);
    } else if (key == "tau_max") {
      cfg.ctrl.tau_max = config_num(key, val);
    } else if (key == "target") {
      cfg.ctrl.target = config_num(key, val);
    } else if (key == "grow") {
      cfg.ctrl.grow = config_num(key, val);
    } else if (key == "shrink") {
      cfg.ctrl.shrink = config_num(key, val);
    } else if (key == "t_end") {
      cfg.t_end = config_num(key, val);
    } else {
      config_fail(key, "unknown key");
    }
  }
  if (cfg.mesh_path.empty()) {
    if (cfg.nx < 1) config_fail("nx", "must be at least 1");
    if (cfg.ny < 1) config_fail("ny", "must be at least 1");
    if (!(cfg.lx > 0.0)) config_fail("lx", "must be positive");
    if (!(cfg.ly > 0.0)) config_fail("ly", "must be positive");
  }
  if (!(cfg.model.sigma > 0.0)) config_fail("sigma", "must be positive");
  if (!(cfg.model.m_coef > 0.0)) config_fail("m", "must be positive");
  if (!(cfg.model.f_coef > 0.0)) config_fail("f", "must be positive");
  if (!(cfg.model.eps0 > 0.0 && cfg.model.eps0 < 0.5)) config_fail("eps0", "must lie in (0, 0.5)");
  if (!(cfg.tau0 > 0.0)) config_fail("tau0", "must be positive");
  if (!(cfg.ctrl.tau_min > 0.0)) config_fail("tau_min", "must be positive");
  if (!(cfg.ctrl.tau_max >= cfg.ctrl.tau_min)) config_fail("tau_max", "must be at least tau_min");
  if (!(cfg.ctrl.target > 0.0)) config_fail("target", "must be positive");
  if (!(cfg.ctrl.grow > 1.0)) config_fail("grow", "must exceed 1");
  if (!(cfg.ctrl.shrink > 0.0 && cfg.ctrl.shrink < 1.0)) config_fail("shrink", "must lie in (0,1)");
  if (!(cfg.t_end > 0.0)) config_fail("t_end", "must be positive");
  if (cfg.snapshots < 0) config_fail("snapshots", "must be nonnegative");
  return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

Mesh config_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_path.empty()) return read_mesh_file(cfg.mesh_path);
  return structured_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly, cfg.rule);
}

std::vector<double> config_initial(const RunConfig& cfg, const Mesh& m) {
  if (cfg.u0 < 0.0) return initial_profile(m, cfg.model.eps0);
  return std::vector<double>(m.vertices.size(), cfg.u0);
}

void write_time_series_csv(std::ostream& os, const std::vector<StepLog>& log) {
  os << "t,tau,F,dF_dt,newton_iters,accepted\n";
  char buf[160];
  for (const StepLog& s : log) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d\n", s.t, s.tau, s.F, s.dF_dt,
                  s.newton_iters, s.accepted ? 1 : 0);
    os << buf;
  }
}

void write_snapshot_csv(std::ostream& os, const Mesh& m, const PhaseState& state) {
  os << "index,x,y,u,w\n";
  char buf[160];
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i, m.vertices[i][0],
                  m.vertices[i][1], state.u[i], state.w[i]);
    os << buf;
  }
}

void write_snapshot_vtk(std::ostream& os, const Mesh& m, const PhaseState& state) {
  const int n = static_cast<int>(m.vertices.size());
  const int nc = static_cast<int>(m.cells.size());
  const int k = m.dim + 1;
  os << "# vtk DataFile Version 3.0\nphase separation snapshot\nASCII\n"
        "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << n << " double\n";
  char buf[160];
  for (const Vec3& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v[0], v[1], v[2]);
    os << buf;
  }
  os << "CELLS " << nc << ' ' << nc * (k + 1) << '\n';
  for (const Cell& c : m.cells) {
    os << k;
    for (int s = 0; s < k; ++s) os << ' ' << c.v[s];
    os << '\n';
  }
  const int vtk_type = m.dim == 1 ? 3 : m.dim == 2 ? 5 : 10;
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << vtk_type << '\n';
  os << "POINT_DATA " << n << '\n';
  for (const char* field : {"u", "w"}) {
    os << "SCALARS " << field << " double 1\nLOOKUP_TABLE default\n";
    const std::vector<double>& vals = field[0] == 'u' ? state.u : state.w;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g\n", vals[i]);
      os << buf;
    }
  }
}

}  // namespace vfvm
