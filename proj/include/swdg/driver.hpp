#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "swdg/config.hpp"
#include "swdg/io.hpp"
#include "swdg/scenarios.hpp"
#include "swdg/timeloop.hpp"

namespace swdg {

struct RunOptions {
  bool write_files = false;          // diagnostics/snapshots under cfg.out_dir
  bool keep_series = true;           // keep the diagnostics series in memory
  bool track_limiter_entropy = false;  // per-element limiting entropy diagnostic
  ForcingFn forcing;                 // manufactured-solution source hook
  std::function<void(const StepDiagnostics&, const State&, const TimeIntegrator&)> on_step;
};

struct RunResult;

struct RunResult {
  State state;
  double t = 0.0;
  long steps = 0;
  std::vector<StepDiagnostics> series;
  double mass_initial = 0.0;
  double entropy_initial = 0.0;
  double worst_limiter_entropy_jump = 0.0;  // only with track_limiter_entropy
};

namespace driver_detail {

inline std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

inline std::vector<double> snapshot_schedule(const RunConfig& cfg, const Scenario& sc) {
  std::vector<double> times;
  if (cfg.snapshot_dt > 0.0)
    for (double t = cfg.snapshot_dt; t < cfg.final_time + 1e-12; t += cfg.snapshot_dt)
      times.push_back(std::min(t, cfg.final_time));
  for (double t : sc.snapshot_times)
    if (t <= cfg.final_time + 1e-12) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());
  return times;
}

}  // namespace driver_detail

/// Advance a scenario to its final time with CFL stepping, stage-wise
/// limiting/viscosity, snapshot/diagnostic output, and reject-and-halve
/// retries when a stage loses mean positivity.
inline RunResult run_simulation(const RunConfig& cfg, const RunOptions& opt = {}) {
  const Scenario sc = make_scenario(cfg.scenario);
  Mesh mesh = build_mesh(cfg);
  RunResult out;
  out.state = initial_state(sc, mesh);
  const std::string hash = config_hash(cfg);

  io::DiagnosticsWriter diag;
  if (opt.write_files) {
    diag.open(cfg.out_dir + "/diagnostics.txt", hash);
    if (cfg.dump_mesh) io::dump_mesh(cfg.out_dir + "/mesh.txt", mesh, hash);
  }

  TimeIntegrator integ(mesh, cfg);
  integ.forcing = opt.forcing;
  integ.track_limiter_entropy = opt.track_limiter_entropy;

  out.mass_initial = total_mass(out.state, mesh);
  out.entropy_initial = total_entropy(out.state, mesh, cfg.phys);

  std::vector<double> snaps = driver_detail::snapshot_schedule(cfg, sc);
  size_t next_snap = 0;
  if (opt.write_files && (cfg.snapshot_dt > 0.0 || !sc.snapshot_times.empty()))
    io::write_snapshot(cfg.out_dir + "/snapshot_t" + driver_detail::time_label(0.0) + ".txt", out.state, mesh, 0.0,
                       integ.last_eps(), hash);

  const double t_end = cfg.final_time;
  double t = 0.0;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  while (t < t_end - t_eps) {
    double dt = compute_dt(out.state, mesh, cfg.phys, cfg.cfl);
    double t_event = t_end;
    if (next_snap < snaps.size()) t_event = std::min(t_event, snaps[next_snap]);
    bool hit_event = false;
    if (t + dt >= t_event - t_eps) {
      dt = t_event - t;
      hit_event = true;
    }

    int rejections = 0;
    while (!integ.try_step(out.state, t, dt)) {
      dt *= 0.5;
      hit_event = false;
      if (++rejections >= 10) {
        if (opt.write_files)
          io::write_snapshot(cfg.out_dir + "/state_dump.txt", out.state, mesh, t,
                             integ.last_eps(), hash);
        throw NumericalAbort("step rejected 10 times at t=" + std::to_string(t));
      }
    }
    t = hit_event ? t_event : t + dt;
    ++out.steps;

    StepDiagnostics d;
    d.step = out.steps;
    d.t = t;
    d.dt = dt;
    d.mass = total_mass(out.state, mesh);
    d.entropy = total_entropy(out.state, mesh, cfg.phys);
    d.min_h = min_height(out.state);
    d.n_limited = integ.last_limited_count();
    d.max_eps = integ.last_max_eps();
    d.min_stage_h = integ.last_min_stage_h();
    // the mean-positivity bounds are advisory: monitored here, enforced only
    // through the reject-and-halve retry above
    d.positivity_dt = min_positivity_dt(out.state, mesh, cfg.phys);
    diag.append(d);
    if (opt.keep_series) out.series.push_back(d);
    if (opt.on_step) opt.on_step(d, out.state, integ);

    while (next_snap < snaps.size() && t >= snaps[next_snap] - t_eps) {
      if (opt.write_files)
        io::write_snapshot(cfg.out_dir + "/snapshot_t" + driver_detail::time_label(snaps[next_snap]) + ".txt",
                           out.state, mesh, t, integ.last_eps(), hash);
      ++next_snap;
    }
  }
  out.t = t;
  out.worst_limiter_entropy_jump = integ.worst_limiter_entropy_jump();
  return out;
}

}  // namespace swdg
