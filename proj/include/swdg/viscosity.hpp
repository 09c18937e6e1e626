#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/field.hpp"
#include "swdg/mesh.hpp"
#include "swdg/operators.hpp"

namespace swdg {

struct ViscosityConfig {
  bool enabled = false;
  double epsilon0 = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Indicator thresholds: N-dependent band below which an element counts as
/// smooth.  Scenario configs may override.
inline void default_sigma_band(int degree, double& sigma_min, double& sigma_max) {
  sigma_min = -(4.0 + 4.25 * std::log10(static_cast<double>(degree))) - 1.0;
  sigma_max = sigma_min + 2.0;
}

inline constexpr double sigma_sentinel = -std::numeric_limits<double>::infinity();

/// Modal smoothness indicator on one element field: log10 of the larger of
/// the two top-mode-shell energy ratios against the truncated total modal
/// energies.  Zero denominators (an identically zero field) and zero
/// numerators (no top-shell content) both map to the "no viscosity"
/// sentinel.
inline double shock_indicator(const Operators1D& ops, const double* field,
                              std::vector<double>& modal_scratch) {
  const int n1 = ops.n1();
  const int degree = ops.degree;
  if (degree < 2) throw SwdgError("shock_indicator: requires degree >= 2");
  modal_scratch.resize(n1 * n1);
  nodal_to_modal(ops, field, modal_scratch.data());
  auto m2 = [&](int i, int j) {
    const double v = modal_scratch[i * n1 + j];
    return v * v;
  };

  double den1 = 0.0, den2 = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) den1 += m2(i, j);
  for (int i = 0; i < n1 - 1; ++i)
    for (int j = 0; j < n1 - 1; ++j) den2 += m2(i, j);

  double num1 = m2(degree, degree), num2 = m2(degree - 1, degree - 1);
  for (int i = 0; i < degree; ++i) num1 += m2(i, degree) + m2(degree, i);
  for (int i = 0; i < degree - 1; ++i) num2 += m2(i, degree - 1) + m2(degree - 1, i);

  // top-shell content at the roundoff floor of the transform counts as zero
  const double floor_abs = 1e-28 * den1 + 1e-300;
  if (den1 <= 1e-300) return sigma_sentinel;
  const double r1 = num1 > floor_abs ? num1 / den1 : 0.0;
  const double r2 = (num2 > floor_abs && den2 > floor_abs) ? num2 / den2 : 0.0;
  const double r = std::max(r1, r2);
  if (r <= 0.0) return sigma_sentinel;
  return std::log10(r);
}

/// Piecewise viscosity ramp: zero below the band, epsilon0 above, and a
/// half-sine blend inside; continuous at both thresholds.
inline double viscosity_coefficient(double sigma_dof, const ViscosityConfig& cfg) {
  if (!(cfg.sigma_min < cfg.sigma_max)) throw SwdgError("viscosity: sigma_min must be < sigma_max");
  if (cfg.epsilon0 < 0.0) throw SwdgError("viscosity: epsilon0 must be >= 0");
  if (sigma_dof < cfg.sigma_min) return 0.0;
  if (sigma_dof >= cfg.sigma_max) return cfg.epsilon0;
  const double delta =
      1.0 + std::sin(M_PI * (sigma_dof - 0.5 * (cfg.sigma_max + cfg.sigma_min)) /
                     (cfg.sigma_max - cfg.sigma_min));
  return 0.5 * cfg.epsilon0 * delta;
}

/// Nodal gradients of the two velocity components.
struct GradientField {
  std::vector<double> u1, u2, v1, v2;  // (du/dx, du/dy, dv/dx, dv/dy)

  void resize(int n) {
    u1.assign(n, 0.0);
    u2.assign(n, 0.0);
    v1.assign(n, 0.0);
    v2.assign(n, 0.0);
  }
};

/// Lifted gradients: weak-form derivative sums of the metric-premultiplied
/// velocity with arithmetic-average interface traces, divided by J.  Walls
/// use the interior trace (zero jump).
inline void br1_gradients(const std::vector<double>& u, const std::vector<double>& v,
                          const Mesh& mesh, GradientField& grad) {
  const int n1 = mesh.n1();
  const int np = mesh.np();
  const MeshGeometry& g = mesh.geom;
  grad.resize(mesh.n_elements() * np);

  std::vector<double> pu(np), pv(np);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int base = e * np;
    auto volume_part = [&](const std::vector<double>& metric, const std::vector<double>& f,
                           bool xi_dir, double sign, std::vector<double>& out) {
      for (int n = 0; n < np; ++n) pu[n] = metric[base + n] * f[base + n];
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) {
          double s = 0.0;
          for (int m = 0; m < n1; ++m)
            s += xi_dir ? mesh.ops.dh(i, m) * pu[node_index(n1, m, j)]
                        : mesh.ops.dh(j, m) * pu[node_index(n1, i, m)];
          out[base + node_index(n1, i, j)] += sign * s;
        }
    };
    volume_part(g.y_eta, u, true, 1.0, grad.u1);
    volume_part(g.y_xi, u, false, -1.0, grad.u1);
    volume_part(g.x_eta, u, true, -1.0, grad.u2);
    volume_part(g.x_xi, u, false, 1.0, grad.u2);
    volume_part(g.y_eta, v, true, 1.0, grad.v1);
    volume_part(g.y_xi, v, false, -1.0, grad.v1);
    volume_part(g.x_eta, v, true, -1.0, grad.v2);
    volume_part(g.x_xi, v, false, 1.0, grad.v2);
  }

  // Interface corrections.  Coefficient pattern per face of the reference
  // square (delta rows of the weak form): xi faces carry +-(y_eta, -x_eta),
  // eta faces carry -+(y_xi, -x_xi), each divided by the endpoint weight.
  const double w0 = mesh.ops.weights[0];
  auto scatter = [&](int elem, int face, int t, double ustar, double vstar) {
    const int n = elem * np + face_node_index(n1, face, t);
    double cy = 0.0, cx = 0.0;  // coefficients multiplying (y-metric, x-metric)
    switch (face) {
      case face_east: cy = g.y_eta[n] / w0; cx = g.x_eta[n] / w0; break;
      case face_west: cy = -g.y_eta[n] / w0; cx = -g.x_eta[n] / w0; break;
      case face_north: cy = -g.y_xi[n] / w0; cx = -g.x_xi[n] / w0; break;
      case face_south: cy = g.y_xi[n] / w0; cx = g.x_xi[n] / w0; break;
    }
    grad.u1[n] += cy * ustar;
    grad.u2[n] -= cx * ustar;
    grad.v1[n] += cy * vstar;
    grad.v2[n] -= cx * vstar;
  };

  for (const FaceInfo& f : mesh.topo.faces) {
    for (int t = 0; t < n1; ++t) {
      const int nm = f.elem_minus * np + face_node_index(n1, f.face_minus, t);
      double ustar = u[nm], vstar = v[nm];
      if (f.tag == BoundaryTag::interior) {
        const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
        const int n_p = f.elem_plus * np + face_node_index(n1, f.face_plus, tp);
        ustar = 0.5 * (u[nm] + u[n_p]);
        vstar = 0.5 * (v[nm] + v[n_p]);
        scatter(f.elem_plus, f.face_plus, tp, ustar, vstar);
      }
      scatter(f.elem_minus, f.face_minus, t, ustar, vstar);
    }
  }

  for (int n = 0; n < mesh.n_elements() * np; ++n) {
    const double inv_j = 1.0 / g.jac[n];
    grad.u1[n] *= inv_j;
    grad.u2[n] *= inv_j;
    grad.v1[n] *= inv_j;
    grad.v2[n] *= inv_j;
  }
}

/// Viscous operator contribution (momentum equations only), in the same
/// left-hand-side sign convention as the inviscid operator sums: the
/// assembled rhs subtracts this and divides by -J, which adds the viscous
/// divergence to dW/dt.  Interface coupling averages the two sides' normal
/// viscous fluxes; walls contribute no viscous flux.
inline void viscous_lhs(const State& s, const GradientField& grad,
                        const std::vector<double>& eps_elem, const Mesh& mesh, Residual& out) {
  const int n1 = mesh.n1();
  const int np = mesh.np();
  const MeshGeometry& g = mesh.geom;
  out.resize(mesh.n_elements(), n1);

  for (double e : eps_elem)
    if (e < 0.0) throw SwdgError("viscous_lhs: negative viscosity coefficient");

  // contravariant viscous fluxes per node, then strong-form derivative;
  // the physical flux pairs are kept mesh-wide for the face coupling
  std::vector<double> ftu(np), ftv(np), gtu(np), gtv(np);
  std::vector<double> fvu(mesh.n_elements() * np), fvv(mesh.n_elements() * np);
  std::vector<double> gvu(mesh.n_elements() * np), gvv(mesh.n_elements() * np);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double eps = eps_elem[e];
    const int base = e * np;
    for (int n = 0; n < np; ++n) {
      const double he = s.h[base + n] * eps;
      fvu[base + n] = he * grad.u1[base + n];
      fvv[base + n] = he * grad.v1[base + n];
      gvu[base + n] = he * grad.u2[base + n];
      gvv[base + n] = he * grad.v2[base + n];
    }
    for (int n = 0; n < np; ++n) {
      ftu[n] = g.y_eta[base + n] * fvu[base + n] - g.x_eta[base + n] * gvu[base + n];
      ftv[n] = g.y_eta[base + n] * fvv[base + n] - g.x_eta[base + n] * gvv[base + n];
      gtu[n] = -g.y_xi[base + n] * fvu[base + n] + g.x_xi[base + n] * gvu[base + n];
      gtv[n] = -g.y_xi[base + n] * fvv[base + n] + g.x_xi[base + n] * gvv[base + n];
    }
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        double su = 0.0, sv = 0.0;
        for (int m = 0; m < n1; ++m) {
          su += mesh.ops.d(i, m) * ftu[node_index(n1, m, j)] +
                mesh.ops.d(j, m) * gtu[node_index(n1, i, m)];
          sv += mesh.ops.d(i, m) * ftv[node_index(n1, m, j)] +
                mesh.ops.d(j, m) * gtv[node_index(n1, i, m)];
        }
        out.hu[base + node_index(n1, i, j)] = su;
        out.hv[base + node_index(n1, i, j)] = sv;
      }
  }

  // interface penalties: (J^surf / w0) (phi* - phi_own) with phi the outward
  // normal viscous flux; the same correction value lands on both sides
  const double w0 = mesh.ops.weights[0];
  for (const FaceInfo& f : mesh.topo.faces) {
    for (int t = 0; t < n1; ++t) {
      const int fm = g.fnode(f.elem_minus, f.face_minus, t);
      const double nx = g.face_nx[fm], ny = g.face_ny[fm], jsurf = g.face_jsurf[fm];
      const int nm = f.elem_minus * np + face_node_index(n1, f.face_minus, t);
      const double phim_u = nx * fvu[nm] + ny * gvu[nm];
      const double phim_v = nx * fvv[nm] + ny * gvv[nm];
      if (f.tag == BoundaryTag::wall) {
        out.hu[nm] += jsurf * (0.0 - phim_u) / w0;
        out.hv[nm] += jsurf * (0.0 - phim_v) / w0;
        continue;
      }
      const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
      const int n_p = f.elem_plus * np + face_node_index(n1, f.face_plus, tp);
      const double phip_u = nx * fvu[n_p] + ny * gvu[n_p];
      const double phip_v = nx * fvv[n_p] + ny * gvv[n_p];
      const double du = 0.5 * (phip_u - phim_u);
      const double dv = 0.5 * (phip_v - phim_v);
      out.hu[nm] += jsurf * du / w0;
      out.hv[nm] += jsurf * dv / w0;
      out.hu[n_p] += jsurf * du / w0;
      out.hv[n_p] += jsurf * dv / w0;
    }
  }
}

/// Per-element viscosity coefficients from the water-height indicator.
inline void compute_viscosity(const State& s, const Mesh& mesh, const ViscosityConfig& cfg,
                              std::vector<double>& eps_elem) {
  eps_elem.assign(mesh.n_elements(), 0.0);
  if (!cfg.enabled) return;
  std::vector<double> scratch;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double sigma = shock_indicator(mesh.ops, s.h.data() + e * mesh.np(), scratch);
    eps_elem[e] = viscosity_coefficient(sigma, cfg);
  }
}

}  // namespace swdg
