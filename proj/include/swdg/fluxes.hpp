#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "swdg/core.hpp"
#include "swdg/physics.hpp"

namespace swdg {
namespace fluxes {

/// Hook for the benchmark harness: counts two-point/pointwise flux
/// evaluations when the kernels run on the counting number type.
template <class Real>
inline void flux_eval_tick() {}

/// Entropy-conserving two-point volume fluxes.  Arithmetic averages of
/// h, u, v, hu, hv, h^2; symmetric in the two states and consistent.
/// The momentum pressure term is g<h>^2 - g<h^2>/2.
template <class Real>
inline void volume_flux_pair(Real ha, Real ua, Real va, Real hua, Real hva,  //
                             Real hb, Real ub, Real vb, Real hub, Real hvb,  //
                             Real g, Real* fsharp, Real* gsharp) {
  const Real half(0.5);
  const Real havg = half * (ha + hb);
  const Real uavg = half * (ua + ub);
  const Real vavg = half * (va + vb);
  const Real huavg = half * (hua + hub);
  const Real hvavg = half * (hva + hvb);
  const Real h2avg = half * (ha * ha + hb * hb);
  const Real press = g * havg * havg - half * g * h2avg;
  fsharp[0] = huavg;
  fsharp[1] = huavg * uavg + press;
  fsharp[2] = huavg * vavg;
  gsharp[0] = hvavg;
  gsharp[1] = hvavg * uavg;
  gsharp[2] = hvavg * vavg + press;
}

inline void volume_flux_sharp(const Vec3& wa, const Vec3& wb, const PhysicsParams& p,
                              Vec3& fsharp, Vec3& gsharp) {
  double ua, va, ub, vb;
  phys::velocity(wa, p, ua, va);
  phys::velocity(wb, p, ub, vb);
  double f[3], g[3];
  volume_flux_pair(wa.h, ua, va, wa.hu, wa.hv, wb.h, ub, vb, wb.hu, wb.hv, p.g, f, g);
  fsharp = {f[0], f[1], f[2]};
  gsharp = {g[0], g[1], g[2]};
}

/// Curvilinear volume fluxes: contract the two-point fluxes with averaged
/// metric terms, Ftilde = F#<y_eta> - G#<x_eta>, Gtilde = -F#<y_xi> + G#<x_xi>.
inline void contravariant_volume_flux(const Vec3& fsharp, const Vec3& gsharp, double yeta_avg,
                                      double xeta_avg, double yxi_avg, double xxi_avg,
                                      Vec3& ftilde, Vec3& gtilde) {
  ftilde = yeta_avg * fsharp - xeta_avg * gsharp;
  gtilde = -1.0 * (yxi_avg * fsharp) + xxi_avg * gsharp;
}

/// Entropy-conserving interface flux in x direction; the momentum pressure
/// term here is g<h^2>/2 with the <h><u>^2 advective part.
inline Vec3 ec_surface_flux_x(const Vec3& wm, const Vec3& wp, const PhysicsParams& p) {
  double um, vm, up, vp;
  phys::velocity(wm, p, um, vm);
  phys::velocity(wp, p, up, vp);
  const double havg = 0.5 * (wm.h + wp.h);
  const double uavg = 0.5 * (um + up);
  const double vavg = 0.5 * (vm + vp);
  const double h2avg = 0.5 * (wm.h * wm.h + wp.h * wp.h);
  return {havg * uavg, havg * uavg * uavg + 0.5 * p.g * h2avg, havg * uavg * vavg};
}

inline Vec3 ec_surface_flux_y(const Vec3& wm, const Vec3& wp, const PhysicsParams& p) {
  double um, vm, up, vp;
  phys::velocity(wm, p, um, vm);
  phys::velocity(wp, p, up, vp);
  const double havg = 0.5 * (wm.h + wp.h);
  const double uavg = 0.5 * (um + up);
  const double vavg = 0.5 * (vm + vp);
  const double h2avg = 0.5 * (wm.h * wm.h + wp.h * wp.h);
  return {havg * vavg, havg * uavg * vavg, havg * vavg * vavg + 0.5 * p.g * h2avg};
}

/// Eigenvector matrix R and scaled eigenvalue diagonal |Lambda| built from
/// averaged quantities in one direction (u is the normal velocity, v the
/// transverse one).  R |Lambda| R^T is the dissipation operator.
struct DissipationOperator {
  std::array<std::array<double, 3>, 3> r{};    // right eigenvectors
  std::array<double, 3> lam{};                 // scaled |eigenvalues|, all >= 0
  double cavg = 0.0;
  double a = 0.0;  // |<u>+<c>| + |<u>-<c>|
  double b = 0.0;  // |<u>+<c>| - |<u>-<c>|, same sign as <u>
};

inline DissipationOperator make_dissipation(double havg, double uavg, double vavg, double cavg,
                                            double g) {
  DissipationOperator d;
  d.cavg = cavg;
  d.a = std::abs(uavg + cavg) + std::abs(uavg - cavg);
  d.b = std::abs(uavg + cavg) - std::abs(uavg - cavg);
  d.r = {{{1.0, 0.0, 1.0},
          {uavg + cavg, 0.0, uavg - cavg},
          {vavg, 1.0, vavg}}};
  const double s = 1.0 / (2.0 * g);
  d.lam = {s * std::abs(uavg + cavg), std::abs(havg * uavg), s * std::abs(uavg - cavg)};
  return d;
}

/// y = R |Lambda| R^T x
inline std::array<double, 3> apply_dissipation(const DissipationOperator& d,
                                               const std::array<double, 3>& x) {
  std::array<double, 3> rtx{}, out{};
  for (int k = 0; k < 3; ++k)
    rtx[k] = d.lam[k] * (d.r[0][k] * x[0] + d.r[1][k] * x[1] + d.r[2][k] * x[2]);
  for (int i = 0; i < 3; ++i) out[i] = d.r[i][0] * rtx[0] + d.r[i][1] * rtx[1] + d.r[i][2] * rtx[2];
  return out;
}

/// x^T R |Lambda| R^T x evaluated through the factorization, so the result
/// is a sum of nonnegative terms.
inline double dissipation_quadratic_form(const DissipationOperator& d,
                                         const std::array<double, 3>& x) {
  double q = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double y = d.r[0][k] * x[0] + d.r[1][k] * x[1] + d.r[2][k] * x[2];
    q += d.lam[k] * y * y;
  }
  return q;
}

/// Entropy-stable numerical flux in normal direction: rotate both states,
/// evaluate the x-direction EC flux minus the eigendecomposition dissipation
/// on the jump of rotated entropy variables (including g[[h+b]]), rotate the
/// momentum components back.
inline Vec3 es_surface_flux_normal(const Vec3& wm, const Vec3& wp, double bm, double bp,
                                   double nx, double ny, const PhysicsParams& p) {
  phys::check_unit_normal(nx, ny);
  double um, vm, up, vp;
  phys::velocity(wm, p, um, vm);
  phys::velocity(wp, p, up, vp);
  double unm, utm, unp, utp;
  phys::rotate(um, vm, nx, ny, unm, utm);
  phys::rotate(up, vp, nx, ny, unp, utp);

  const double havg = 0.5 * (wm.h + wp.h);
  const double h2avg = 0.5 * (wm.h * wm.h + wp.h * wp.h);
  const double uavg = 0.5 * (unm + unp);
  const double vavg = 0.5 * (utm + utp);
  const double cavg = 0.5 * (std::sqrt(p.g * std::max(wm.h, 0.0)) +
                             std::sqrt(p.g * std::max(wp.h, 0.0)));

  Vec3 f{havg * uavg, havg * uavg * uavg + 0.5 * p.g * h2avg, havg * uavg * vavg};

  const std::array<double, 3> jq = {
      p.g * ((wp.h + bp) - (wm.h + bm)) - 0.5 * (unp * unp - unm * unm) -
          0.5 * (utp * utp - utm * utm),
      unp - unm, utp - utm};
  const DissipationOperator d = make_dissipation(havg, uavg, vavg, cavg, p.g);
  const std::array<double, 3> diss = apply_dissipation(d, jq);
  f.h -= 0.5 * diss[0];
  f.hu -= 0.5 * diss[1];
  f.hv -= 0.5 * diss[2];

  return phys::unrotate_state(f, nx, ny);
}

/// Compact form of the first (mass) component of the entropy-stable normal
/// flux: <h><u_n> - (A [[g(h+b)]] + <c> B [[u_n]]) / (4g).
inline double h_flux_compact(const Vec3& wm, const Vec3& wp, double bm, double bp, double nx,
                             double ny, const PhysicsParams& p) {
  phys::check_unit_normal(nx, ny);
  double um, vm, up, vp;
  phys::velocity(wm, p, um, vm);
  phys::velocity(wp, p, up, vp);
  double unm, utm, unp, utp;
  phys::rotate(um, vm, nx, ny, unm, utm);
  phys::rotate(up, vp, nx, ny, unp, utp);
  const double havg = 0.5 * (wm.h + wp.h);
  const double uavg = 0.5 * (unm + unp);
  const double cavg = 0.5 * (std::sqrt(p.g * std::max(wm.h, 0.0)) +
                             std::sqrt(p.g * std::max(wp.h, 0.0)));
  const double a = std::abs(uavg + cavg) + std::abs(uavg - cavg);
  const double b = std::abs(uavg + cavg) - std::abs(uavg - cavg);
  const double jump_ghb = p.g * ((wp.h + bp) - (wm.h + bm));
  const double jump_un = unp - unm;
  return havg * uavg - (a * jump_ghb + cavg * b * jump_un) / (4.0 * p.g);
}

/// Local Lax-Friedrichs flux in normal direction: central flux minus
/// (lambda_max/2) [[w]].
inline Vec3 llf_surface_flux(const Vec3& wm, const Vec3& wp, double nx, double ny,
                             const PhysicsParams& p) {
  phys::check_unit_normal(nx, ny);
  Vec3 fxm, fym, fxp, fyp;
  phys::physical_flux(wm, p, fxm, fym);
  phys::physical_flux(wp, p, fxp, fyp);
  const double lmax = phys::max_wave_speed(wm, wp, nx, ny, p);
  Vec3 f = 0.5 * (nx * fxm + ny * fym + nx * fxp + ny * fyp);
  f -= 0.5 * lmax * (wp - wm);
  return f;
}

}  // namespace fluxes
}  // namespace swdg
