#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/field.hpp"
#include "swdg/mesh.hpp"

namespace swdg {

struct LimiterReport {
  double theta = 1.0;
  Vec3 average{};
  double min_h_before = 0.0;
  double min_h_after = 0.0;
  bool limited = false;
  int dry_nodes = 0;
};

/// J-weighted element averages and the quadrature area |E|.
inline Vec3 element_average(const State& s, const Mesh& mesh, int e, double* area_out = nullptr) {
  const int n1 = mesh.n1();
  double area = 0.0;
  Vec3 avg{};
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const int n = mesh.geom.node(e, i, j);
      const double w = mesh.geom.jac[n] * mesh.ops.weights[i] * mesh.ops.weights[j];
      area += w;
      avg += w * s.at(n);
    }
  if (area_out) *area_out = area;
  return (1.0 / area) * avg;
}

/// Linear scaling of one element around its averages so the minimum water
/// height becomes nonnegative; the same theta scales h, hu, hv, which keeps
/// the averages exact.  `zero_dry_velocities` afterwards clears momenta at
/// nodes below h_tol (that part does move momentum averages).
inline LimiterReport limit_element(State& s, const Mesh& mesh, int e, const PhysicsParams& p,
                                   bool zero_dry_velocities = true) {
  const int np = mesh.np();
  const int base = e * np;
  LimiterReport rep;
  rep.average = element_average(s, mesh, e);

  double mmin = s.h[base];
  for (int n = 1; n < np; ++n) mmin = std::min(mmin, s.h[base + n]);
  rep.min_h_before = mmin;

  if (rep.average.h < 0.0)
    throw SwdgError("limiter: negative element mean water height in element " + std::to_string(e));

  double theta = 1.0;
  if (mmin < 0.0) {
    const double denom = rep.average.h - mmin;
    theta = denom < 1e-14 ? 1.0 : std::min(1.0, rep.average.h / denom);
  }
  rep.theta = theta;
  rep.limited = theta < 1.0;
  if (rep.limited) {
    for (int n = 0; n < np; ++n) {
      s.h[base + n] = theta * (s.h[base + n] - rep.average.h) + rep.average.h;
      s.hu[base + n] = theta * (s.hu[base + n] - rep.average.hu) + rep.average.hu;
      s.hv[base + n] = theta * (s.hv[base + n] - rep.average.hv) + rep.average.hv;
      s.h[base + n] = std::max(s.h[base + n], 0.0);  // shave roundoff
    }
  }
  rep.min_h_after = s.h[base];
  for (int n = 1; n < np; ++n) rep.min_h_after = std::min(rep.min_h_after, s.h[base + n]);

  if (zero_dry_velocities) {
    for (int n = 0; n < np; ++n)
      if (s.h[base + n] < p.h_tol) {
        s.hu[base + n] = 0.0;
        s.hv[base + n] = 0.0;
        ++rep.dry_nodes;
      }
  }
  return rep;
}

/// Quadrature entropies of an element state pair (before/after limiting);
/// limiting must not increase this.
inline void limited_entropy_check(const State& before, const State& after, const Mesh& mesh,
                                  int e, const PhysicsParams& p, double& e_before,
                                  double& e_after) {
  const int n1 = mesh.n1();
  e_before = 0.0;
  e_after = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const int n = mesh.geom.node(e, i, j);
      const double w = mesh.geom.jac[n] * mesh.ops.weights[i] * mesh.ops.weights[j];
      e_before += w * phys::entropy(before.at(n), mesh.geom.b[n], p);
      e_after += w * phys::entropy(after.at(n), mesh.geom.b[n], p);
    }
}

/// Time-step bounds for mean-height positivity at one face node, from the
/// interface flux analysis: the first bound controls the interior-trace
/// coefficient, the second the cross term, active only for a wet interior
/// trace with B [[u_n]] < 0.
inline void positivity_dt_bounds(const Vec3& wm, const Vec3& wp, double nx, double ny, double w0,
                                 double a_scale, const PhysicsParams& p, double& bound1,
                                 double& bound2) {
  double um, vm, up, vp;
  phys::velocity(wm, p, um, vm);
  phys::velocity(wp, p, up, vp);
  double unm, utm, unp, utp;
  phys::rotate(um, vm, nx, ny, unm, utm);
  phys::rotate(up, vp, nx, ny, unp, utp);
  const double uavg = 0.5 * (unm + unp);
  const double cavg = 0.5 * (std::sqrt(p.g * std::max(wm.h, 0.0)) +
                             std::sqrt(p.g * std::max(wp.h, 0.0)));
  const double a = std::abs(uavg + cavg) + std::abs(uavg - cavg);
  const double b = std::abs(uavg + cavg) - std::abs(uavg - cavg);
  const double inf = std::numeric_limits<double>::infinity();

  const double den1 = a + 2.0 * uavg;
  bound1 = den1 > 1e-300 ? w0 * a_scale / den1 : inf;

  const double jump_un = unp - unm;
  bound2 = inf;
  if (wm.h > 0.0 && b * jump_un < 0.0)
    bound2 = std::abs(w0 * a_scale * p.g * wm.h / (cavg * b * jump_un));
}

/// Smallest positivity time-step bound over all faces of the mesh for the
/// current state (diagnostic; the run loop enforces positivity by
/// reject-and-halve instead).
inline double min_positivity_dt(const State& s, const Mesh& mesh, const PhysicsParams& p) {
  const int n1 = mesh.n1();
  const double w0 = mesh.ops.weights[0];
  double dt = std::numeric_limits<double>::infinity();
  for (const FaceInfo& f : mesh.topo.faces) {
    for (int t = 0; t < n1; ++t) {
      const int fm = mesh.geom.fnode(f.elem_minus, f.face_minus, t);
      const int nm = f.elem_minus * mesh.np() + face_node_index(n1, f.face_minus, t);
      const double nx = mesh.geom.face_nx[fm], ny = mesh.geom.face_ny[fm];
      Vec3 wp;
      if (f.tag == BoundaryTag::wall) {
        wp = exterior_state(s.at(nm), nx, ny, BoundaryTag::wall);
      } else {
        const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
        wp = s.at(f.elem_plus * mesh.np() + face_node_index(n1, f.face_plus, tp));
      }
      double b1, b2;
      positivity_dt_bounds(s.at(nm), wp, nx, ny, w0, mesh.geom.face_a[fm], p, b1, b2);
      dt = std::min(dt, std::min(b1, b2));
      if (f.tag == BoundaryTag::interior) {
        // the bounds are one-sided; evaluate from the plus side as well
        const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
        const int fp = mesh.geom.fnode(f.elem_plus, f.face_plus, tp);
        const int np_ = f.elem_plus * mesh.np() + face_node_index(n1, f.face_plus, tp);
        positivity_dt_bounds(s.at(np_), s.at(nm), mesh.geom.face_nx[fp], mesh.geom.face_ny[fp],
                             w0, mesh.geom.face_a[fp], p, b1, b2);
        dt = std::min(dt, std::min(b1, b2));
      }
    }
  }
  return dt;
}

}  // namespace swdg
