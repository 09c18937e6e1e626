#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/dg_rhs.hpp"
#include "swdg/field.hpp"
#include "swdg/limiter.hpp"
#include "swdg/mesh.hpp"
#include "swdg/viscosity.hpp"

namespace swdg {

enum class MeshKind { cartesian, curved_dam, wavy };

/// Full run configuration; scenario defaults with config-file overrides.
struct RunConfig {
  std::string scenario;
  double final_time = 1.0;
  double cfl = 0.5;
  SchemeMode mode = SchemeMode::es;
  int degree = 3;

  MeshKind mesh_kind = MeshKind::cartesian;
  int kx = 1, ky = 1;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool periodic_x = false, periodic_y = false;
  double dam_fraction = 0.5;
  double wavy_amp = 0.04;

  PhysicsParams phys;
  ViscosityConfig visc;
  bool limiter_enabled = true;

  std::string out_dir = ".";
  double snapshot_dt = 0.0;  // 0: no field snapshots
  bool dump_mesh = false;
};

struct NumericalAbort : SwdgError {
  explicit NumericalAbort(const std::string& msg) : SwdgError(msg) {}
};

/// CFL time step: per node and direction, reference length 2J/J_surf over
/// (2N+1) wave speed.  Dry nodes impose no restriction; an all-dry state
/// falls back to the gravity wave on the configured reference depth.
inline double compute_dt(const State& s, const Mesh& mesh, const PhysicsParams& p, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0) throw SwdgError("compute_dt: cfl must be in (0, 1]");
  const double order = 2.0 * mesh.ops.degree + 1.0;
  double dt = std::numeric_limits<double>::infinity();
  double min_len = std::numeric_limits<double>::infinity();
  for (int n = 0; n < s.size(); ++n) {
    double u, v;
    phys::velocity(s.at(n), p, u, v);
    const double c = std::sqrt(p.g * std::max(s.h[n], 0.0));
    const double len_xi =
        2.0 * mesh.geom.jac[n] / std::hypot(mesh.geom.x_eta[n], mesh.geom.y_eta[n]);
    const double len_eta =
        2.0 * mesh.geom.jac[n] / std::hypot(mesh.geom.x_xi[n], mesh.geom.y_xi[n]);
    min_len = std::min(min_len, std::min(len_xi, len_eta));
    const double lx = std::abs(u) + c;
    const double ly = std::abs(v) + c;
    if (lx > 1e-14) dt = std::min(dt, len_xi / (order * lx));
    if (ly > 1e-14) dt = std::min(dt, len_eta / (order * ly));
  }
  if (!std::isfinite(dt))
    dt = min_len / (order * std::sqrt(p.g * std::max(p.h_ref, 1e-12)));
  return cfl * dt;
}

/// Three-stage strong-stability-preserving Runge-Kutta: every stage is an
/// Euler step entering convex combinations, so stage-wise limiting preserves
/// the positivity argument.  Combination coefficients (old, stage, euler):
inline constexpr std::array<std::array<double, 2>, 3> ssprk3_combination = {
    {{0.0, 1.0}, {3.0 / 4.0, 1.0 / 4.0}, {1.0 / 3.0, 2.0 / 3.0}}};
inline constexpr std::array<double, 3> ssprk3_stage_times = {0.0, 1.0, 0.5};

/// One SSPRK3 step on an arbitrary state vector type with axpy-style access,
/// used directly by the solver and by scalar-ODE diagnostics in tests.
/// rhs(state, t, out); post_stage(state, stage_index) returns false to
/// signal a step rejection (the caller retries with a smaller dt).
template <class Vec, class Rhs, class PostStage>
inline bool ssprk3_step(Vec& w, Vec& stage, Vec& rhs_buf, double t, double dt, Rhs&& rhs,
                        PostStage&& post_stage) {
  rhs(w, t + ssprk3_stage_times[0] * dt, rhs_buf);
  stage = w;
  stage.axpy(dt, rhs_buf);
  if (!post_stage(stage, 0)) return false;

  rhs(stage, t + ssprk3_stage_times[1] * dt, rhs_buf);
  stage.axpy(dt, rhs_buf);
  stage.combine(ssprk3_combination[1][0], w, ssprk3_combination[1][1]);
  if (!post_stage(stage, 1)) return false;

  rhs(stage, t + ssprk3_stage_times[2] * dt, rhs_buf);
  stage.axpy(dt, rhs_buf);
  stage.combine(ssprk3_combination[2][0], w, ssprk3_combination[2][1]);
  if (!post_stage(stage, 2)) return false;

  w = stage;
  return true;
}

namespace detail {
/// Adapter giving State the axpy/combine surface ssprk3_step needs.
struct StateVec {
  State s;
  void axpy(double a, const StateVec& o) {
    for (size_t n = 0; n < s.h.size(); ++n) {
      s.h[n] += a * o.s.h[n];
      s.hu[n] += a * o.s.hu[n];
      s.hv[n] += a * o.s.hv[n];
    }
  }
  void combine(double a, const StateVec& w, double b) {
    for (size_t n = 0; n < s.h.size(); ++n) {
      s.h[n] = a * w.s.h[n] + b * s.h[n];
      s.hu[n] = a * w.s.hu[n] + b * s.hu[n];
      s.hv[n] = a * w.s.hv[n] + b * s.hv[n];
    }
  }
};
}  // namespace detail

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  double min_h = 0.0;
  int n_limited = 0;
  double max_eps = 0.0;
  double min_stage_h = 0.0;       // smallest nodal h seen after any stage
  double positivity_dt = 0.0;     // smallest mean-positivity bound (monitored)
};

/// Owns the work buffers and applies one full SSPRK3 step with stage-wise
/// viscosity, limiting, and the mean-positivity reject signal.
class TimeIntegrator {
 public:
  TimeIntegrator(const Mesh& mesh, const RunConfig& cfg) : mesh_(mesh), cfg_(cfg) {
    if (cfg.visc.enabled && mesh.ops.degree < 2)
      throw SwdgError("artificial viscosity requires polynomial degree >= 2");
  }

  /// Attempt one step; returns false (state untouched) if any stage produced
  /// a negative element mean.  Throws NumericalAbort when the limiter is
  /// disabled and a stage goes negative.
  bool try_step(State& w, double t, double dt) {
    w0_.s = w;
    stage_.s = w;
    rhs_buf_.s.resize(w.n_elem, w.n1);
    n_limited_ = 0;
    max_eps_ = 0.0;
    min_stage_h_ = std::numeric_limits<double>::infinity();
    auto rhs = [this](const detail::StateVec& sv, double ts, detail::StateVec& out) {
      evaluate_rhs(sv.s, ts, out.s);
    };
    auto post = [this](detail::StateVec& sv, int) { return post_stage(sv.s); };
    if (!ssprk3_step(w0_, stage_, rhs_buf_, t, dt, rhs, post)) return false;
    w = w0_.s;
    return true;
  }

  /// dW/dt for the configured scheme, with stage-fresh viscosity.
  void evaluate_rhs(const State& s, double t, Residual& out) {
    RhsOptions opt;
    opt.mode = cfg_.mode;
    opt.forcing = forcing;
    opt.time = t;
    if (cfg_.visc.enabled && cfg_.mode == SchemeMode::es) {
      compute_viscosity(s, mesh_, cfg_.visc, eps_);
      for (double e : eps_) max_eps_ = std::max(max_eps_, e);
      u_.resize(s.size());
      v_.resize(s.size());
      for (int n = 0; n < s.size(); ++n) phys::velocity(s.at(n), cfg_.phys, u_[n], v_[n]);
      br1_gradients(u_, v_, mesh_, grad_);
      viscous_lhs(s, grad_, eps_, mesh_, visc_);
      assemble_rhs(s, mesh_, cfg_.phys, opt, out, &visc_);
    } else {
      assemble_rhs(s, mesh_, cfg_.phys, opt, out, nullptr);
    }
  }

  const std::vector<double>& last_eps() const { return eps_; }
  int last_limited_count() const { return n_limited_; }
  double last_max_eps() const { return max_eps_; }
  double last_min_stage_h() const { return min_stage_h_; }
  double worst_limiter_entropy_jump() const { return worst_limiter_entropy_jump_; }

  ForcingFn forcing;
  bool track_limiter_entropy = false;

 private:
  bool post_stage(State& s) {
    // reject signal: a negative element mean violates the flux positivity
    // guarantee, so the step is retried with a smaller dt
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      if (element_average(s, mesh_, e).h < 0.0) {
        if (!cfg_.limiter_enabled) abort_with_location(s, e);
        return false;
      }
    }
    if (!cfg_.limiter_enabled) {
      for (int e = 0; e < mesh_.n_elements(); ++e) {
        const int base = e * mesh_.np();
        for (int n = 0; n < mesh_.np(); ++n)
          if (s.h[base + n] < 0.0) abort_with_location(s, e);
      }
      min_stage_h_ = std::min(min_stage_h_, min_height(s));
      return true;
    }
    n_limited_ = 0;
    if (track_limiter_entropy) pre_limit_.s = s;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      const LimiterReport rep = limit_element(s, mesh_, e, cfg_.phys, true);
      if (rep.limited) ++n_limited_;
      if (track_limiter_entropy && rep.limited) {
        double e0, e1;
        limited_entropy_check(pre_limit_.s, s, mesh_, e, cfg_.phys, e0, e1);
        worst_limiter_entropy_jump_ =
            std::max(worst_limiter_entropy_jump_, (e1 - e0) / std::max(1.0, std::abs(e0)));
      }
    }
    min_stage_h_ = std::min(min_stage_h_, min_height(s));
    return true;
  }

  [[noreturn]] void abort_with_location(const State& s, int e) {
    const int n1 = mesh_.n1();
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        const int n = mesh_.geom.node(e, i, j);
        if (s.h[n] < 0.0)
          throw NumericalAbort("negative water height without limiter: element " +
                               std::to_string(e) + " node (" + std::to_string(i) + "," +
                               std::to_string(j) + ") at x=" + std::to_string(mesh_.geom.x[n]) +
                               " y=" + std::to_string(mesh_.geom.y[n]) +
                               " h=" + std::to_string(s.h[n]));
      }
    throw NumericalAbort("negative element mean water height without limiter: element " +
                         std::to_string(e));
  }

  const Mesh& mesh_;
  RunConfig cfg_;
  detail::StateVec w0_, stage_, rhs_buf_, pre_limit_;
  std::vector<double> eps_, u_, v_;
  GradientField grad_;
  Residual visc_;
  int n_limited_ = 0;
  double max_eps_ = 0.0;
  double min_stage_h_ = 0.0;
  double worst_limiter_entropy_jump_ = 0.0;
};

}  // namespace swdg
