#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/field.hpp"
#include "swdg/mesh.hpp"
#include "swdg/timeloop.hpp"

namespace swdg {

/// A built-in test setup: defaults plus the initial-data and bathymetry
/// evaluators.  All constants live here; tests read them from the catalogue.
struct Scenario {
  std::string id;
  RunConfig config;
  std::function<Vec3(double x, double y)> initial;          // conserved state at t=0
  std::function<double(double x, double y)> bathymetry;     // null handled as b=0
  // closed-form solution where one exists (oscillating lake); returns the
  // conserved state at (x,y,t) and whether the point is in the wet core
  std::function<bool(double x, double y, double t, double wet_floor, Vec3& w)> exact;
  double orbital_period = 0.0;
  std::vector<double> snapshot_times;
};

namespace scenario_detail {

inline double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace scenario_detail

inline Scenario make_scenario(const std::string& id) {
  Scenario sc;
  sc.id = id;
  RunConfig& c = sc.config;
  c.scenario = id;

  if (id == "entropy_glitch") {
    c.mesh_kind = MeshKind::cartesian;
    c.kx = c.ky = 100;
    c.x0 = -1.0; c.x1 = 1.0; c.y0 = -1.0; c.y1 = 1.0;
    c.periodic_x = false; c.periodic_y = true;
    c.degree = 1;
    c.phys.g = 10.0;
    c.final_time = 0.2;
    c.visc.enabled = false;  // indicator needs degree >= 2
    sc.initial = [](double x, double) { return Vec3{x < 0.0 ? 1.0 : 0.1, 0.0, 0.0}; };
    return sc;
  }

  if (id == "wetdry_dambreak") {
    c.mesh_kind = MeshKind::cartesian;
    c.kx = c.ky = 50;
    c.x0 = -20.0; c.x1 = 20.0; c.y0 = -20.0; c.y1 = 20.0;
    c.periodic_x = false; c.periodic_y = true;
    c.degree = 3;
    c.phys.g = 9.81;
    // deep-water wet/dry cases zero film momenta at 1e-3: at 1e-4 the nodes
    // just above the cut pick up runaway velocities from the advective
    // coupling with the deep side
    c.phys.h_tol = 1e-3;
    c.final_time = 1.0;
    c.visc.enabled = true;
    c.visc.epsilon0 = 0.1;
    default_sigma_band(c.degree, c.visc.sigma_min, c.visc.sigma_max);
    sc.initial = [](double x, double) { return Vec3{x < 0.0 ? 10.0 : 0.0, 0.0, 0.0}; };
    return sc;
  }

  if (id == "oscillating_lake") {
    c.mesh_kind = MeshKind::cartesian;
    c.kx = c.ky = 200;
    c.x0 = -2.0; c.x1 = 2.0; c.y0 = -2.0; c.y1 = 2.0;
    c.degree = 3;
    c.phys.g = 9.81;
    c.visc.enabled = true;
    c.visc.epsilon0 = 0.01;
    // tighter band than the N-default: separates the smooth wet core from
    // the moving wet/dry front at both 50x50 and 200x200 resolutions
    c.visc.sigma_min = -4.0;
    c.visc.sigma_max = -2.0;
    const double h0 = 0.1, a = 1.0, sigma = 0.5;
    const double omega = std::sqrt(2.0 * c.phys.g * h0) / a;
    sc.orbital_period = 2.0 * M_PI / omega;
    c.final_time = sc.orbital_period;
    sc.bathymetry = [=](double x, double y) { return h0 * (x * x + y * y) / (a * a); };
    auto plane = [=](double x, double y, double t) {
      return sigma * (h0 / (a * a)) * (2.0 * x * std::cos(omega * t) +
                                       2.0 * y * std::sin(omega * t) - sigma) + h0;
    };
    sc.exact = [=, bathy = sc.bathymetry](double x, double y, double t, double wet_floor,
                                          Vec3& w) {
      const double h = std::max(0.0, plane(x, y, t) - bathy(x, y));
      const double u = -sigma * omega * std::sin(omega * t);
      const double v = sigma * omega * std::cos(omega * t);
      w = h > 0.0 ? Vec3{h, h * u, h * v} : Vec3{0.0, 0.0, 0.0};
      return h > wet_floor;
    };
    sc.initial = [exact = sc.exact](double x, double y) {
      Vec3 w;
      exact(x, y, 0.0, 0.0, w);
      return w;
    };
    return sc;
  }

  if (id == "three_mound") {
    c.mesh_kind = MeshKind::cartesian;
    c.kx = 150; c.ky = 100;
    c.x0 = 0.0; c.x1 = 75.0; c.y0 = 0.0; c.y1 = 45.0;
    c.degree = 3;
    c.phys.g = 9.81;
    c.phys.h_tol = 1e-3;
    c.final_time = 50.0;
    c.visc.enabled = true;
    c.visc.epsilon0 = 0.2;
    default_sigma_band(c.degree, c.visc.sigma_min, c.visc.sigma_max);
    sc.snapshot_times = {5.0, 10.0, 20.0, 30.0, 40.0, 50.0};
    sc.bathymetry = [](double x, double y) {
      const double m1 = 1.0 - 0.1 * std::hypot(x - 30.0, y - 22.5);
      const double m2 = 1.0 - 0.1 * std::hypot(x - 30.0, y - 7.5);
      const double m3 = 2.8 - 0.28 * std::hypot(x - 47.5, y - 15.0);
      return std::max({0.0, m1, m2, m3});
    };
    sc.initial = [](double x, double) { return Vec3{x < 16.0 ? 1.875 : 0.0, 0.0, 0.0}; };
    return sc;
  }

  if (id == "conical_island") {
    c.mesh_kind = MeshKind::cartesian;
    c.kx = c.ky = 50;
    c.x0 = 0.0; c.x1 = 25.0; c.y0 = 0.0; c.y1 = 30.0;
    c.degree = 3;
    c.phys.g = 9.81;
    c.final_time = 50.0;
    c.visc.enabled = true;
    c.visc.epsilon0 = 0.1;
    default_sigma_band(c.degree, c.visc.sigma_min, c.visc.sigma_max);
    const double h0 = 0.32, amp = 0.064, wave_xc = 2.5;
    const double gamma = std::sqrt(3.0 * amp / (4.0 * h0));
    const double g = c.phys.g;
    sc.bathymetry = [](double x, double y) {
      const double r = std::hypot(x - 12.5, y - 15.0);
      const double rc = 3.6;
      return r <= rc ? 0.93 * (1.0 - r / rc) : 0.0;
    };
    sc.initial = [=, bathy = sc.bathymetry](double x, double y) {
      const double eta = (amp / h0) * std::pow(scenario_detail::sech(gamma * (x - wave_xc)), 2);
      const double h = std::max(0.0, h0 + eta - bathy(x, y));
      const double u = eta * std::sqrt(g / h0);
      return Vec3{h, h * u, 0.0};
    };
    return sc;
  }

  if (id == "parabolic_dam_wet" || id == "parabolic_dam_dry") {
    const bool dry = id == "parabolic_dam_dry";
    c.mesh_kind = MeshKind::curved_dam;
    c.kx = c.ky = 40;
    c.x0 = -5.0; c.x1 = 7.5; c.y0 = -5.0; c.y1 = 5.0;
    c.degree = 3;
    c.phys.g = 1.0;
    c.phys.h_tol = 1e-3;
    c.final_time = dry ? 1.0 : 1.5;
    c.visc.enabled = true;
    c.visc.epsilon0 = dry ? 0.05 : 0.025;  // degree-7 runs use 0.025 in both
    default_sigma_band(c.degree, c.visc.sigma_min, c.visc.sigma_max);
    const double downstream = dry ? 0.0 : 5.0;
    sc.initial = [downstream](double x, double y) {
      return Vec3{x < y * y / 25.0 - 0.25 ? 10.0 : downstream, 0.0, 0.0};
    };
    return sc;
  }

  throw SwdgError("unknown scenario id: " + id);
}

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {
      "entropy_glitch",  "wetdry_dambreak",   "oscillating_lake", "three_mound",
      "conical_island",  "parabolic_dam_wet", "parabolic_dam_dry"};
  return ids;
}

/// Mesh from the config's generator spec.
inline Mesh build_mesh(const RunConfig& c) {
  switch (c.mesh_kind) {
    case MeshKind::cartesian:
      return build_cartesian_mesh(c.degree, c.kx, c.ky, c.x0, c.x1, c.y0, c.y1, c.periodic_x,
                                  c.periodic_y);
    case MeshKind::curved_dam:
      return build_curved_dam_mesh(c.degree, c.kx, c.ky, c.x0, c.x1, c.y0, c.y1, c.dam_fraction);
    case MeshKind::wavy:
      return build_wavy_mesh(c.degree, c.kx, c.ky, c.x0, c.x1, c.y0, c.y1, c.wavy_amp,
                             c.periodic_x, c.periodic_y);
  }
  throw SwdgError("unknown mesh kind");
}

/// Sample the scenario's bathymetry into the mesh and its initial condition
/// into a fresh state.
inline State initial_state(const Scenario& sc, Mesh& mesh) {
  sample_bathymetry(mesh, sc.bathymetry);
  State s;
  s.resize(mesh.n_elements(), mesh.n1());
  for (int n = 0; n < s.size(); ++n)
    s.set(n, sc.initial(mesh.geom.x[n], mesh.geom.y[n]));
  return s;
}

}  // namespace swdg
