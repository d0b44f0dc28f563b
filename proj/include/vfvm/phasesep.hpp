// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vfvm/mesh.hpp"
#include "vfvm/meshgen.hpp"
#include "vfvm/solver.hpp"
#include "vfvm/sparse.hpp"

namespace vfvm {

/// Nonlocal phase separation with logarithmic potential. The interaction
/// potential w is the solution of -sigma^2 lap w + w = m (1 - 2u) with
/// homogeneous Neumann data, the mobility coefficient f is constant.
struct PhaseModel {
  double sigma = 2.0;   // kernel range, > 0
  double m_coef = 8.0;  // kernel strength, > 0
  double f_coef = 4.0;  // mobility, > 0
  double eps0 = 1e-7;   // initial-profile offset, in (0, 1/2)
};

/// phi(u) = u ln u + (1-u) ln(1-u) and its first two derivatives.
/// Throws OutOfBounds unless 0 < u < 1.
struct PhiValues {
  double phi = 0.0, phi1 = 0.0, phi2 = 0.0;
};
PhiValues phi_derivatives(double u);

/// Per-edge value of [1/Phi''_a] with partial derivatives in both endpoint
/// concentrations. DifferenceQuotient is (a - b)/(phi'(a) - phi'(b)), the
/// logarithmic mean of a(1-b) and b(1-a); it turns the discrete flux into
/// f w_e M_e (v_i - v_j) with v = phi'(u) + wbar, which is the form the
/// free-energy decay argument tests against. ArithmeticMean of u(1-u) is
/// kept as a swappable alternative. Both vanish as u -> {0,1}.
enum class MobilityAverage { DifferenceQuotient, ArithmeticMean };
struct EdgeMobility {
  double value = 0.0, da = 0.0, db = 0.0;
};
EdgeMobility edge_mobility(double a, double b,
                           MobilityAverage avg = MobilityAverage::DifferenceQuotient);

/// One accepted point of a trajectory: time, step taken to reach it, free
/// energy, and the dissipation estimate (F - F_prev)/tau.
struct StepRecord {
  double t = 0.0, tau = 0.0, F = 0.0, dissipation = 0.0;
};

struct PhaseState {
  std::vector<double> u;  // concentration, strictly inside (0,1)
  std::vector<double> w;  // interaction potential
  double t = 0.0;
  double tau = 0.0;  // current step size
  double F = 0.0;
  std::vector<StepRecord> history;
};

/// Assembled operators shared by every step of a run: Voronoi volumes,
/// the edge list with weights sigma_e/l_e, and the constant kernel matrix
/// K = sigma^2 A + [V] with one factorization reused for all potential and
/// free-energy solves. Throws ConfigError on an invalid model.
struct PhaseOperators {
  PhaseOperators(const Mesh& m, const PhaseModel& model);

  struct FluxEdge {
    int i = 0, j = 0;
    double w = 0.0;
  };

  PhaseModel model;
  std::vector<double> vol;
  std::vector<FluxEdge> edges;
  SparseMatrix kernel;
  BandFactorization kernel_lu;
};

/// Solves (sigma^2 A + [V]) w = [V] m (1 - 2u).
std::vector<double> solve_potential(const PhaseOperators& ops, const std::vector<double>& u);
std::vector<double> solve_potential(const Mesh& m, const PhaseModel& model,
                                    const std::vector<double>& u);

/// Residual of the concentration equation in the conservative form
/// [V](u - u+)/tau - div f (grad u+ + [1/Phi''_a] (grad(w+ + w))/2):
/// every edge flux enters two rows with opposite sign, so the residual sums
/// to [V](u - u+)/tau exactly. Throws OutOfBounds unless 0 < u+ < 1.
std::vector<double> step_residual(const PhaseOperators& ops, const PhaseState& state,
                                  const std::vector<double>& u_plus,
                                  const std::vector<double>& w_plus, double tau);
std::vector<double> step_residual(const Mesh& m, const PhaseModel& model, const PhaseState& state,
                                  const std::vector<double>& u_plus,
                                  const std::vector<double>& w_plus, double tau);

/// Coupled residual of one implicit Euler step in interleaved layout
/// x[2i] = u+_i, x[2i+1] = w+_i. The u-rows carry the sign
/// [V](u+ - u)/tau + div-flux so the Jacobian diagonal stays positive; the
/// w-rows are K w+ - [V] m (1 - 2u+). Out-of-bounds u+ yields a NaN
/// residual rather than a throw, which Newton reports as divergence.
std::vector<double> coupled_residual(const PhaseOperators& ops, const PhaseState& state,
                                     double tau, const std::vector<double>& x);

/// Analytic Jacobian of coupled_residual at x, same interleaved layout.
SparseMatrix coupled_jacobian(const PhaseOperators& ops, const PhaseState& state, double tau,
                              const std::vector<double>& x);

/// One implicit Euler step of size tau by undamped Newton on the coupled
/// system, initial guess (u, w). The residual scale is V_i/tau on u-rows and
/// V_i on w-rows (empty residual_scale only), and at least one polish
/// iteration runs so the conservation defect stays at round-off. Throws
/// NewtonFailure when Newton diverges and BoundsViolation when the converged
/// u+ leaves (0,1); the caller reacts by shrinking tau. iters_out, when
/// non-null, receives the Newton iteration count.
PhaseState implicit_euler_step(const PhaseOperators& ops, const PhaseState& state, double tau,
                               NewtonConfig cfg = {}, int* iters_out = nullptr);
PhaseState implicit_euler_step(const Mesh& m, const PhaseModel& model, const PhaseState& state,
                               double tau, const NewtonConfig& cfg = {});

/// F(u) = sum V_i phi(u_i) + sum V_i u_i wtilde_i with the interaction
/// potential wtilde from K wtilde = [V] m (1 - u), consistent with the
/// kernel being the Green's function of K. Deterministic.
double free_energy(const PhaseOperators& ops, const std::vector<double>& u);
double free_energy(const Mesh& m, const PhaseModel& model, const std::vector<double>& u);

/// sum V_i u_i by compensated (Neumaier) summation.
double total_mass(const PhaseOperators& ops, const std::vector<double>& u);

/// Ramp eps0 + ((x - x_min)/(x_max - x_min))/(1 + 2 eps0), strictly inside
/// (0,1) for eps0 in (0, 1/2).
std::vector<double> initial_profile(const Mesh& m, double eps0);

/// State with the given concentration at time t: w = solve_potential(u),
/// F = free_energy(u), step size tau.
PhaseState make_state(const PhaseOperators& ops, std::vector<double> u, double t, double tau);

/// Predictor-corrector step control on the free energy.
struct StepControl {
  double target = 1e-3;  // relative predictor-corrector discrepancy
  double grow = 1.5;
  double shrink = 0.5;
  double tau_min = 1e-9;
  double tau_max = 1e5;
};

/// One attempted step as logged to the time series; rejected attempts keep
/// accepted = false, and attempts whose Newton iteration failed carry
/// newton_iters = -1 with NaN energy.
struct StepLog {
  double t = 0.0, tau = 0.0, F = 0.0, dF_dt = 0.0;
  int newton_iters = 0;
  bool accepted = false;
};

/// Observer of a run. on_step fires for every attempt; on_snapshot fires
/// whenever an accepted step crosses the next entry of snapshot_times
/// (ascending), and once more with the final state.
struct OutputSink {
  std::function<void(const StepLog&)> on_step;
  std::function<void(const PhaseState&)> on_snapshot;
  std::vector<double> snapshot_times;
};

/// Advances state with implicit Euler steps until t_end. A step is accepted
/// when Newton converged, bounds held, and the linear-in-t extrapolation of
/// the free energy from the last two accepted points differs from F(u+) by
/// at most target * max(|F(u+) - F|, floor). The floor 1e-6 (1 + |F|) is
/// absolute so that shrinking tau always ends a rejection cascade; the
/// first two steps have no extrapolation and accept on Newton alone.
/// Accepted: tau *= grow capped at tau_max. Rejected:
/// tau *= shrink floored at tau_min, and a second consecutive rejection at
/// tau_min throws StepFloorReached. The final step is clamped to land on
/// t_end. Throws ConfigError on an invalid control.
PhaseState run_simulation(const PhaseOperators& ops, PhaseState state, const StepControl& ctrl,
                          double t_end, const OutputSink& sink = {});

/// Same, starting from the ramp profile at t = 0 with tau = ctrl.tau_min.
PhaseState run_simulation(const Mesh& m, const PhaseModel& model, const StepControl& ctrl,
                          double t_end, const OutputSink& sink = {});

/// n times geometrically spaced over [t0, t1]; n >= 2 hits both endpoints.
std::vector<double> log_spaced_times(double t0, double t1, int n);

/// Run description read from key = value lines. Mesh is either a file path
/// or a structured-grid spec.
struct RunConfig {
  std::string mesh_path;  // empty: use the grid spec below
  int nx = 32, ny = 32;
  double lx = 32.0, ly = 32.0;
  DiagonalRule rule = DiagonalRule::Uniform;
  PhaseModel model;
  StepControl ctrl;
  double u0 = -1.0;  // < 0: x-ramp initial profile; else constant in (0,1)
  double tau0 = 1e-6;
  double t_end = 1e6;
  std::string out_dir;  // empty: no files
  int snapshots = 0;    // log-spaced snapshot count
};

/// Parses blank-line and '#'-comment tolerant key = value text. Unknown
/// keys, unparsable values, and out-of-range values throw ConfigError
/// naming the key. Keys: mesh, nx, ny, lx, ly, rule (uniform|mixed), sigma,
/// m, f, eps0, u0 (ramp or a constant), tau0, tau_min, tau_max, target,
/// grow, shrink, t_end, out, snapshots.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

/// Mesh named by the config: read from mesh_path when set, otherwise the
/// structured grid.
Mesh config_mesh(const RunConfig& cfg);

/// Initial concentration named by the config: the ramp, or u0 everywhere.
std::vector<double> config_initial(const RunConfig& cfg, const Mesh& m);

/// Time series "t,tau,F,dF_dt,newton_iters,accepted", one row per attempt.
void write_time_series_csv(std::ostream& os, const std::vector<StepLog>& log);

/// Flat per-vertex table "index,x,y,u,w".
void write_snapshot_csv(std::ostream& os, const Mesh& m, const PhaseState& state);

/// Legacy VTK unstructured grid with point data u and w.
void write_snapshot_vtk(std::ostream& os, const Mesh& m, const PhaseState& state);

}  // namespace vfvm
