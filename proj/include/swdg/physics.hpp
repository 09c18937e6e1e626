#pragma once

#include <algorithm>
#include <cmath>

#include "swdg/core.hpp"

namespace swdg {

/// Physical constants and wet/dry tolerances.
struct PhysicsParams {
  double g = 9.81;      // gravitational acceleration
  double h_tol = 1e-4;  // dry tolerance: below this, limiter zeroes momenta
  double h_des = 1e-8;  // velocity recovery floor: below this, u = v = 0
  double h_ref = 1.0;   // depth scale used for the all-dry time-step fallback
};

namespace phys {

/// Desingularized velocity recovery: hard zero below the floor.  Matches the
/// wet/dry convention of the limiter so flux algebra and limiting agree on
/// which nodes count as dry.
template <class Real>
inline void velocity(Real h, Real hu, Real hv, Real h_des, Real& u, Real& v) {
  if (h >= h_des) {
    u = hu / h;
    v = hv / h;
  } else {
    u = Real(0.0);
    v = Real(0.0);
  }
}

inline void velocity(const Vec3& w, const PhysicsParams& p, double& u, double& v) {
  velocity(w.h, w.hu, w.hv, p.h_des, u, v);
}

/// x/y direction fluxes of the inviscid system.
inline void physical_flux(const Vec3& w, const PhysicsParams& p, Vec3& fx, Vec3& fy) {
  double u, v;
  velocity(w, p, u, v);
  const double pr = 0.5 * p.g * w.h * w.h;
  fx = {w.h * u, w.h * u * u + pr, w.h * u * v};
  fy = {w.h * v, w.h * u * v, w.h * v * v + pr};
}

/// Total energy entropy e = h(u^2+v^2)/2 + g h^2/2 + g h b and its fluxes.
inline void entropy_and_flux(const Vec3& w, double b, const PhysicsParams& p, double& e,
                             double& ef, double& eg) {
  double u, v;
  velocity(w, p, u, v);
  const double k = 0.5 * w.h * (u * u + v * v);
  e = k + 0.5 * p.g * w.h * w.h + p.g * w.h * b;
  ef = u * k + p.g * w.h * u * (w.h + b);
  eg = v * k + p.g * w.h * v * (w.h + b);
}

inline double entropy(const Vec3& w, double b, const PhysicsParams& p) {
  double e, ef, eg;
  entropy_and_flux(w, b, p, e, ef, eg);
  return e;
}

/// Entropy variables q = de/dw = (g(h+b) - (u^2+v^2)/2, u, v).
inline Vec3 entropy_vars(const Vec3& w, double b, const PhysicsParams& p) {
  double u, v;
  velocity(w, p, u, v);
  return {p.g * (w.h + b) - 0.5 * (u * u + v * v), u, v};
}

inline void check_unit_normal(double nx, double ny) {
  if (std::abs(std::sqrt(nx * nx + ny * ny) - 1.0) > 1e-10)
    throw SwdgError("normal vector is not unit length");
}

/// Rotate a velocity pair into (normal, tangential) coordinates; the tangent
/// is t = (-ny, nx).
inline void rotate(double u, double v, double nx, double ny, double& un, double& ut) {
  un = nx * u + ny * v;
  ut = -ny * u + nx * v;
}

inline void unrotate(double un, double ut, double nx, double ny, double& u, double& v) {
  u = nx * un - ny * ut;
  v = ny * un + nx * ut;
}

inline Vec3 rotate_state(const Vec3& w, double nx, double ny) {
  double mn, mt;
  rotate(w.hu, w.hv, nx, ny, mn, mt);
  return {w.h, mn, mt};
}

inline Vec3 unrotate_state(const Vec3& wr, double nx, double ny) {
  double mx, my;
  unrotate(wr.hu, wr.hv, nx, ny, mx, my);
  return {wr.h, mx, my};
}

/// Largest normal wave speed |u_n| + c over the two states.
inline double max_wave_speed(const Vec3& wm, const Vec3& wp, double nx, double ny,
                             const PhysicsParams& p) {
  double um, vm, up, vp;
  velocity(wm, p, um, vm);
  velocity(wp, p, up, vp);
  double unm, utm, unp, utp;
  rotate(um, vm, nx, ny, unm, utm);
  rotate(up, vp, nx, ny, unp, utp);
  const double cm = std::sqrt(p.g * std::max(wm.h, 0.0));
  const double cp = std::sqrt(p.g * std::max(wp.h, 0.0));
  return std::max(std::abs(unm) + cm, std::abs(unp) + cp);
}

}  // namespace phys
}  // namespace swdg
