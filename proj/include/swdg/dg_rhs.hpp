#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/field.hpp"
#include "swdg/fluxes.hpp"
#include "swdg/mesh.hpp"

namespace swdg {

enum class SchemeMode { es, standard };

namespace kernels {

/// Split-form volume contributions at one element: the flux-differencing
/// sums with the modified operator Dtilde and two-point entropy conserving
/// fluxes contracted with averaged metrics.  Accumulates into out arrays.
/// Templated on the number type so the benchmark harness can run the same
/// code path with a counting scalar.
template <class Real>
inline void split_volume_element(int n1, Real g, Real h_des,                       //
                                 const Real* h, const Real* hu, const Real* hv,    //
                                 const Real* y_eta, const Real* x_eta,             //
                                 const Real* y_xi, const Real* x_xi,               //
                                 const Real* dtilde,                               //
                                 Real* u, Real* v,                                 //
                                 Real* out_h, Real* out_hu, Real* out_hv) {
  const int np = n1 * n1;
  for (int n = 0; n < np; ++n) phys::velocity(h[n], hu[n], hv[n], h_des, u[n], v[n]);

  const Real half(0.5);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const int n = i * n1 + j;
      Real acc_h(0.0), acc_hu(0.0), acc_hv(0.0);
      // xi direction: pair (i,j) with (m,j)
      for (int m = 0; m < n1; ++m) {
        const int q = m * n1 + j;
        Real fs[3], gs[3];
        fluxes::volume_flux_pair(h[n], u[n], v[n], hu[n], hv[n],  //
                                 h[q], u[q], v[q], hu[q], hv[q], g, fs, gs);
        fluxes::flux_eval_tick<Real>();
        const Real ye = half * (y_eta[n] + y_eta[q]);
        const Real xe = half * (x_eta[n] + x_eta[q]);
        const Real d = dtilde[i * n1 + m];
        acc_h += d * (ye * fs[0] - xe * gs[0]);
        acc_hu += d * (ye * fs[1] - xe * gs[1]);
        acc_hv += d * (ye * fs[2] - xe * gs[2]);
      }
      // eta direction: pair (i,j) with (i,m)
      for (int m = 0; m < n1; ++m) {
        const int q = i * n1 + m;
        Real fs[3], gs[3];
        fluxes::volume_flux_pair(h[n], u[n], v[n], hu[n], hv[n],  //
                                 h[q], u[q], v[q], hu[q], hv[q], g, fs, gs);
        fluxes::flux_eval_tick<Real>();
        const Real yx = half * (y_xi[n] + y_xi[q]);
        const Real xx = half * (x_xi[n] + x_xi[q]);
        const Real d = dtilde[j * n1 + m];
        acc_h += d * (xx * gs[0] - yx * fs[0]);
        acc_hu += d * (xx * gs[1] - yx * fs[1]);
        acc_hv += d * (xx * gs[2] - yx * fs[2]);
      }
      out_h[n] += acc_h;
      out_hu[n] += acc_hu;
      out_hv[n] += acc_hv;
    }
}

/// Standard DGSEM volume term: pointwise contravariant fluxes differentiated
/// with the plain derivative matrix.
template <class Real>
inline void standard_volume_element(int n1, Real g, Real h_des,                    //
                                    const Real* h, const Real* hu, const Real* hv, //
                                    const Real* y_eta, const Real* x_eta,          //
                                    const Real* y_xi, const Real* x_xi,            //
                                    const Real* deriv,                             //
                                    Real* ft, Real* gt,                            //
                                    Real* out_h, Real* out_hu, Real* out_hv) {
  const int np = n1 * n1;
  const Real half(0.5);
  for (int n = 0; n < np; ++n) {
    Real u, v;
    phys::velocity(h[n], hu[n], hv[n], h_des, u, v);
    const Real pr = half * g * h[n] * h[n];
    const Real fx0 = h[n] * u, fx1 = h[n] * u * u + pr, fx2 = h[n] * u * v;
    const Real fy0 = h[n] * v, fy1 = h[n] * u * v, fy2 = h[n] * v * v + pr;
    fluxes::flux_eval_tick<Real>();
    fluxes::flux_eval_tick<Real>();
    ft[3 * n + 0] = y_eta[n] * fx0 - x_eta[n] * fy0;
    ft[3 * n + 1] = y_eta[n] * fx1 - x_eta[n] * fy1;
    ft[3 * n + 2] = y_eta[n] * fx2 - x_eta[n] * fy2;
    gt[3 * n + 0] = x_xi[n] * fy0 - y_xi[n] * fx0;
    gt[3 * n + 1] = x_xi[n] * fy1 - y_xi[n] * fx1;
    gt[3 * n + 2] = x_xi[n] * fy2 - y_xi[n] * fx2;
  }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const int n = i * n1 + j;
      Real acc_h(0.0), acc_hu(0.0), acc_hv(0.0);
      for (int m = 0; m < n1; ++m) {
        const Real di = deriv[i * n1 + m];
        const Real dj = deriv[j * n1 + m];
        const int qx = m * n1 + j;
        const int qe = i * n1 + m;
        acc_h += di * ft[3 * qx + 0] + dj * gt[3 * qe + 0];
        acc_hu += di * ft[3 * qx + 1] + dj * gt[3 * qe + 1];
        acc_hv += di * ft[3 * qx + 2] + dj * gt[3 * qe + 2];
      }
      out_h[n] += acc_h;
      out_hu[n] += acc_hu;
      out_hv[n] += acc_hv;
    }
}

}  // namespace kernels

/// Split-form volume terms for one element of the mesh, accumulated into res.
inline void split_volume_terms(const State& s, const Mesh& mesh, const PhysicsParams& p, int e,
                               Residual& res, std::vector<double>& scratch) {
  const int np = mesh.np();
  scratch.resize(2 * np);
  const int base = e * np;
  kernels::split_volume_element(mesh.n1(), p.g, p.h_des, s.h.data() + base, s.hu.data() + base,
                                s.hv.data() + base, mesh.geom.y_eta.data() + base,
                                mesh.geom.x_eta.data() + base, mesh.geom.y_xi.data() + base,
                                mesh.geom.x_xi.data() + base, mesh.ops.deriv_modified.data(),
                                scratch.data(), scratch.data() + np, res.h.data() + base,
                                res.hu.data() + base, res.hv.data() + base);
}

inline void standard_volume_terms(const State& s, const Mesh& mesh, const PhysicsParams& p, int e,
                                  Residual& res, std::vector<double>& scratch) {
  const int np = mesh.np();
  scratch.resize(6 * np);
  const int base = e * np;
  kernels::standard_volume_element(mesh.n1(), p.g, p.h_des, s.h.data() + base,
                                   s.hu.data() + base, s.hv.data() + base,
                                   mesh.geom.y_eta.data() + base, mesh.geom.x_eta.data() + base,
                                   mesh.geom.y_xi.data() + base, mesh.geom.x_xi.data() + base,
                                   mesh.ops.deriv.data(), scratch.data(), scratch.data() + 3 * np,
                                   res.h.data() + base, res.hu.data() + base,
                                   res.hv.data() + base);
}

/// Split-form bathymetry source: the four-sum product form whose continuous
/// limit is -g h grad(b) and which cancels the split volume terms exactly
/// for the lake at rest.  Accumulates -S into the xi/eta operator sum, i.e.
/// the returned contribution belongs on the left-hand side with the volume
/// terms (res later gets multiplied by -1/J as a whole).
inline void source_terms(const State& s, const Mesh& mesh, const PhysicsParams& p, int e,
                         Residual& res) {
  const int n1 = mesh.n1();
  const int base = e * mesh.np();
  const MeshGeometry& g = mesh.geom;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const int n = base + node_index(n1, i, j);
      double db_xi = 0.0, db_eta = 0.0;
      double dbye_xi = 0.0, dbyx_eta = 0.0, dbxe_xi = 0.0, dbxx_eta = 0.0;
      for (int m = 0; m < n1; ++m) {
        const double di = mesh.ops.d(i, m);
        const double dj = mesh.ops.d(j, m);
        const int qx = base + node_index(n1, m, j);
        const int qe = base + node_index(n1, i, m);
        db_xi += di * g.b[qx];
        db_eta += dj * g.b[qe];
        dbye_xi += di * g.b_yeta[qx];
        dbyx_eta += dj * g.b_yxi[qe];
        dbxe_xi += di * g.b_xeta[qx];
        dbxx_eta += dj * g.b_xxi[qe];
      }
      const double hg2 = 0.5 * p.g * s.h[n];
      const double src_hu = -hg2 * (g.y_eta[n] * db_xi + dbye_xi - g.y_xi[n] * db_eta - dbyx_eta);
      const double src_hv = -hg2 * (g.x_xi[n] * db_eta + dbxx_eta - g.x_eta[n] * db_xi - dbxe_xi);
      // sources enter with opposite sign to the flux divergence terms
      res.hu[n] -= src_hu;
      res.hv[n] -= src_hv;
    }
}

/// Exterior trace at face node t of a face (interior partner value, or the
/// wall mirror state).
inline Vec3 exterior_trace(const State& s, const Mesh& mesh, const FaceInfo& f, int t, double nx,
                           double ny) {
  const int n1 = mesh.n1();
  if (f.tag == BoundaryTag::wall) {
    const int nm = f.elem_minus * mesh.np() + face_node_index(n1, f.face_minus, t);
    return exterior_state(s.at(nm), nx, ny, BoundaryTag::wall);
  }
  const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
  const int np_ = f.elem_plus * mesh.np() + face_node_index(n1, f.face_plus, tp);
  return s.at(np_);
}

/// Interface terms, face-major: every interior flux is evaluated once and
/// scattered with opposite signs to the two sides, so conservation
/// telescopes exactly.
inline void surface_terms(const State& s, const Mesh& mesh, const PhysicsParams& p,
                          SchemeMode mode, Residual& res) {
  const int n1 = mesh.n1();
  const double w0 = mesh.ops.weights[0];
  for (const FaceInfo& f : mesh.topo.faces) {
    for (int t = 0; t < n1; ++t) {
      const int fm = mesh.geom.fnode(f.elem_minus, f.face_minus, t);
      const double nx = mesh.geom.face_nx[fm];
      const double ny = mesh.geom.face_ny[fm];
      const double jsurf = mesh.geom.face_jsurf[fm];
      const int nm = f.elem_minus * mesh.np() + face_node_index(n1, f.face_minus, t);
      const Vec3 wm = s.at(nm);
      const Vec3 wp = exterior_trace(s, mesh, f, t, nx, ny);
      const double bm = mesh.geom.b[nm];
      double bp = bm;
      if (f.tag == BoundaryTag::interior) {
        const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
        bp = mesh.geom.b[f.elem_plus * mesh.np() + face_node_index(n1, f.face_plus, tp)];
      }
      Vec3 flux;
      if (mode == SchemeMode::es)
        flux = fluxes::es_surface_flux_normal(wm, wp, bm, bp, nx, ny, p);
      else
        flux = fluxes::llf_surface_flux(wm, wp, nx, ny, p);

      Vec3 corr = jsurf * flux;
      if (mode == SchemeMode::standard) {
        // strong form needs the (numerical - interior) flux difference
        Vec3 fx, fy;
        phys::physical_flux(wm, p, fx, fy);
        corr -= jsurf * (nx * fx + ny * fy);
      }
      res.h[nm] += corr.h / w0;
      res.hu[nm] += corr.hu / w0;
      res.hv[nm] += corr.hv / w0;
      if (f.tag == BoundaryTag::interior) {
        const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
        const int np_ = f.elem_plus * mesh.np() + face_node_index(n1, f.face_plus, tp);
        Vec3 corr_p = jsurf * flux;
        if (mode == SchemeMode::standard) {
          Vec3 fx, fy;
          phys::physical_flux(wp, p, fx, fy);
          corr_p -= jsurf * (nx * fx + ny * fy);
        }
        res.h[np_] -= corr_p.h / w0;
        res.hu[np_] -= corr_p.hu / w0;
        res.hv[np_] -= corr_p.hv / w0;
      }
    }
  }
}

/// Optional analytic momentum/mass forcing (manufactured solutions).
using ForcingFn = std::function<Vec3(double x, double y, double t)>;

struct RhsOptions {
  SchemeMode mode = SchemeMode::es;
  ForcingFn forcing;  // added directly to dW/dt
  double time = 0.0;
};

/// Assemble dW/dt = -(L_xi + L_eta - S) / J for the inviscid part.  Viscous
/// terms are added separately (see viscosity.hpp) before this division, so
/// callers that want shock capturing pass the viscous contribution in
/// `extra`, already in operator (left-hand-side) sign convention.
inline void assemble_rhs(const State& s, const Mesh& mesh, const PhysicsParams& p,
                         const RhsOptions& opt, Residual& res,
                         const Residual* viscous_lhs = nullptr) {
  res.resize(s.n_elem, s.n1);
  std::vector<double> scratch;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (opt.mode == SchemeMode::es)
      split_volume_terms(s, mesh, p, e, res, scratch);
    else
      standard_volume_terms(s, mesh, p, e, res, scratch);
    source_terms(s, mesh, p, e, res);
  }
  surface_terms(s, mesh, p, opt.mode, res);

  if (viscous_lhs) {
    for (int n = 0; n < res.size(); ++n) {
      res.hu[n] -= viscous_lhs->hu[n];
      res.hv[n] -= viscous_lhs->hv[n];
    }
  }

  for (int n = 0; n < res.size(); ++n) {
    const double inv_j = -1.0 / mesh.geom.jac[n];
    res.h[n] *= inv_j;
    res.hu[n] *= inv_j;
    res.hv[n] *= inv_j;
  }

  if (opt.forcing) {
    for (int n = 0; n < res.size(); ++n) {
      const Vec3 f = opt.forcing(mesh.geom.x[n], mesh.geom.y[n], opt.time);
      res.h[n] += f.h;
      res.hu[n] += f.hu;
      res.hv[n] += f.hv;
    }
  }
}

}  // namespace swdg
