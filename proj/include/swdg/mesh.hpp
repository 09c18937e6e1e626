#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/operators.hpp"

namespace swdg {

/// One side of an element: analytic parameterization over s in [-1,1].
/// Curves are sampled at the LGL nodes and everything downstream works with
/// the degree-N interpolant, so metric cross-derivatives commute exactly.
struct BoundaryCurve {
  std::function<void(double s, double& x, double& y)> eval;

  void at(double s, double& x, double& y) const { eval(s, x, y); }
};

inline BoundaryCurve straight_line(double x0, double y0, double x1, double y1) {
  return {[=](double s, double& x, double& y) {
    x = 0.5 * (1.0 - s) * x0 + 0.5 * (1.0 + s) * x1;
    y = 0.5 * (1.0 - s) * y0 + 0.5 * (1.0 + s) * y1;
  }};
}

enum class BoundaryTag { interior, wall };

/// Face pairing: minus side owns the face; plus side is the neighbor (or
/// absent for walls).  Periodic boundaries are resolved into ordinary pairs
/// at build time, with the coordinate offset kept for watertightness checks.
struct FaceInfo {
  int elem_minus = -1;
  int face_minus = -1;
  int elem_plus = -1;
  int face_plus = -1;
  bool reversed = false;  // plus-side face nodes run opposite to minus side
  BoundaryTag tag = BoundaryTag::interior;
  double offset_x = 0.0;  // minus coords + offset = plus coords (periodic)
  double offset_y = 0.0;
};

struct MeshTopology {
  int n_elements = 0;
  std::vector<FaceInfo> faces;

  /// Node index on the plus face matching minus-face node t.
  static int partner_node(const FaceInfo& f, int degree, int t) {
    return f.reversed ? degree - t : t;
  }
};

/// Per-node geometry of the whole mesh, flat arrays of length K*(N+1)^2
/// (element-major, node layout from core.hpp).  Face arrays hold the
/// (N+1) face-node values for each of the 4 faces of each element.
struct MeshGeometry {
  int n_elem = 0;
  int n1 = 0;

  std::vector<double> x, y;
  std::vector<double> x_xi, x_eta, y_xi, y_eta;
  std::vector<double> jac;
  std::vector<double> b;  // bathymetry at nodes
  // metric-premultiplied bathymetry products used by the split-form source
  std::vector<double> b_yeta, b_yxi, b_xeta, b_xxi;

  // face data, index (elem*4 + face)*n1 + t
  std::vector<double> face_jsurf, face_nx, face_ny, face_a;

  int np() const { return n1 * n1; }
  int node(int e, int i, int j) const { return e * np() + node_index(n1, i, j); }
  int fnode(int e, int face, int t) const { return (e * 4 + face) * n1 + t; }

  void resize(int k, int n1_) {
    n_elem = k;
    n1 = n1_;
    const int n = k * n1 * n1;
    x.assign(n, 0.0);
    y.assign(n, 0.0);
    x_xi.assign(n, 0.0);
    x_eta.assign(n, 0.0);
    y_xi.assign(n, 0.0);
    y_eta.assign(n, 0.0);
    jac.assign(n, 0.0);
    b.assign(n, 0.0);
    b_yeta.assign(n, 0.0);
    b_yxi.assign(n, 0.0);
    b_xeta.assign(n, 0.0);
    b_xxi.assign(n, 0.0);
    const int nf = k * 4 * n1;
    face_jsurf.assign(nf, 0.0);
    face_nx.assign(nf, 0.0);
    face_ny.assign(nf, 0.0);
    face_a.assign(nf, 0.0);
  }
};

struct Mesh {
  Operators1D ops;
  MeshTopology topo;
  MeshGeometry geom;
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  int n_elements() const { return topo.n_elements; }
  int n1() const { return ops.n1(); }
  int np() const { return geom.np(); }
};

/// Transfinite interpolation with linear blending of four boundary curves
/// (south, east, north, west), evaluated at the LGL node pairs.
inline void build_transfinite_element(const std::array<BoundaryCurve, 4>& curves,
                                      const Operators1D& ops, std::vector<double>& x,
                                      std::vector<double>& y) {
  const int n1 = ops.n1();
  // corners from adjacent curves must agree
  struct Pt {
    double x, y;
  };
  auto curve_at = [&](int c, double s) {
    Pt p{};
    curves[c].at(s, p.x, p.y);
    return p;
  };
  const Pt sw = curve_at(face_south, -1.0), se = curve_at(face_south, 1.0);
  const Pt nw = curve_at(face_north, -1.0), ne = curve_at(face_north, 1.0);
  const Pt ws = curve_at(face_west, -1.0), wn = curve_at(face_west, 1.0);
  const Pt es = curve_at(face_east, -1.0), en = curve_at(face_east, 1.0);
  auto mismatch = [](const Pt& a, const Pt& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
  };
  const double worst = std::max(std::max(mismatch(sw, ws), mismatch(se, es)),
                                std::max(mismatch(nw, wn), mismatch(ne, en)));
  if (worst > 1e-8) throw SwdgError("transfinite element: corner mismatch " + std::to_string(worst));

  x.assign(n1 * n1, 0.0);
  y.assign(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i) {
    const double xi = ops.nodes[i];
    const Pt s = curve_at(face_south, xi);
    const Pt n = curve_at(face_north, xi);
    for (int j = 0; j < n1; ++j) {
      const double eta = ops.nodes[j];
      const Pt w = curve_at(face_west, eta);
      const Pt e = curve_at(face_east, eta);
      const double a00 = 0.25 * (1.0 - xi) * (1.0 - eta);
      const double a10 = 0.25 * (1.0 + xi) * (1.0 - eta);
      const double a01 = 0.25 * (1.0 - xi) * (1.0 + eta);
      const double a11 = 0.25 * (1.0 + xi) * (1.0 + eta);
      const int n_id = node_index(n1, i, j);
      x[n_id] = 0.5 * (1.0 - eta) * s.x + 0.5 * (1.0 + eta) * n.x + 0.5 * (1.0 - xi) * w.x +
                0.5 * (1.0 + xi) * e.x - (a00 * sw.x + a10 * se.x + a01 * nw.x + a11 * ne.x);
      y[n_id] = 0.5 * (1.0 - eta) * s.y + 0.5 * (1.0 + eta) * n.y + 0.5 * (1.0 - xi) * w.y +
                0.5 * (1.0 + xi) * e.y - (a00 * sw.y + a10 * se.y + a01 * nw.y + a11 * ne.y);
    }
  }
}

/// Metric terms by differentiating the nodal coordinate polynomials; face
/// normals and surface Jacobians from the metrics at the face nodes.
inline void compute_metrics(MeshGeometry& g, int e, const Operators1D& ops) {
  const int n1 = g.n1;
  const int base = e * g.np();
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double xxi = 0.0, xeta = 0.0, yxi = 0.0, yeta = 0.0;
      for (int m = 0; m < n1; ++m) {
        const double dxi = ops.d(i, m);
        const double deta = ops.d(j, m);
        xxi += dxi * g.x[base + node_index(n1, m, j)];
        yxi += dxi * g.y[base + node_index(n1, m, j)];
        xeta += deta * g.x[base + node_index(n1, i, m)];
        yeta += deta * g.y[base + node_index(n1, i, m)];
      }
      const int n_id = base + node_index(n1, i, j);
      g.x_xi[n_id] = xxi;
      g.x_eta[n_id] = xeta;
      g.y_xi[n_id] = yxi;
      g.y_eta[n_id] = yeta;
      g.jac[n_id] = xxi * yeta - xeta * yxi;
      if (g.jac[n_id] <= 0.0)
        throw SwdgError("mesh rejected: nonpositive Jacobian in element " + std::to_string(e));
    }

  for (int face = 0; face < 4; ++face)
    for (int t = 0; t < n1; ++t) {
      const int n_id = base + face_node_index(n1, face, t);
      double jsurf, nx, ny;
      switch (face) {
        case face_east:
          jsurf = std::hypot(g.y_eta[n_id], g.x_eta[n_id]);
          nx = g.y_eta[n_id] / jsurf;
          ny = -g.x_eta[n_id] / jsurf;
          break;
        case face_west:
          jsurf = std::hypot(g.y_eta[n_id], g.x_eta[n_id]);
          nx = -g.y_eta[n_id] / jsurf;
          ny = g.x_eta[n_id] / jsurf;
          break;
        case face_north:
          jsurf = std::hypot(g.y_xi[n_id], g.x_xi[n_id]);
          nx = -g.y_xi[n_id] / jsurf;
          ny = g.x_xi[n_id] / jsurf;
          break;
        default:  // south
          jsurf = std::hypot(g.y_xi[n_id], g.x_xi[n_id]);
          nx = g.y_xi[n_id] / jsurf;
          ny = -g.x_xi[n_id] / jsurf;
          break;
      }
      const int f_id = g.fnode(e, face, t);
      g.face_jsurf[f_id] = jsurf;
      g.face_nx[f_id] = nx;
      g.face_ny[f_id] = ny;
      g.face_a[f_id] = g.jac[n_id] / jsurf;
    }
}

/// Sample bathymetry at the mapped nodes and precompute the metric
/// premultiplied products the source discretization needs.
inline void sample_bathymetry(Mesh& mesh, const std::function<double(double, double)>& bathy) {
  MeshGeometry& g = mesh.geom;
  for (int n = 0; n < g.n_elem * g.np(); ++n) {
    g.b[n] = bathy ? bathy(g.x[n], g.y[n]) : 0.0;
    g.b_yeta[n] = g.y_eta[n] * g.b[n];
    g.b_yxi[n] = g.y_xi[n] * g.b[n];
    g.b_xeta[n] = g.x_eta[n] * g.b[n];
    g.b_xxi[n] = g.x_xi[n] * g.b[n];
  }
}

namespace detail {

/// Structured Kx x Ky topology with per-direction wall/periodic boundaries.
inline MeshTopology structured_topology(int kx, int ky, bool periodic_x, bool periodic_y,
                                        double span_x, double span_y) {
  MeshTopology topo;
  topo.n_elements = kx * ky;
  auto eid = [&](int ex, int ey) { return ey * kx + ex; };
  for (int ey = 0; ey < ky; ++ey)
    for (int ex = 0; ex < kx; ++ex) {
      // east face
      FaceInfo fe;
      fe.elem_minus = eid(ex, ey);
      fe.face_minus = face_east;
      if (ex + 1 < kx) {
        fe.elem_plus = eid(ex + 1, ey);
        fe.face_plus = face_west;
      } else if (periodic_x) {
        fe.elem_plus = eid(0, ey);
        fe.face_plus = face_west;
        fe.offset_x = -span_x;
      } else {
        fe.tag = BoundaryTag::wall;
      }
      topo.faces.push_back(fe);
      if (ex == 0 && !periodic_x) {
        FaceInfo fw;
        fw.elem_minus = eid(ex, ey);
        fw.face_minus = face_west;
        fw.tag = BoundaryTag::wall;
        topo.faces.push_back(fw);
      }
      // north face
      FaceInfo fn;
      fn.elem_minus = eid(ex, ey);
      fn.face_minus = face_north;
      if (ey + 1 < ky) {
        fn.elem_plus = eid(ex, ey + 1);
        fn.face_plus = face_south;
      } else if (periodic_y) {
        fn.elem_plus = eid(ex, 0);
        fn.face_plus = face_south;
        fn.offset_y = -span_y;
      } else {
        fn.tag = BoundaryTag::wall;
      }
      topo.faces.push_back(fn);
      if (ey == 0 && !periodic_y) {
        FaceInfo fs;
        fs.elem_minus = eid(ex, ey);
        fs.face_minus = face_south;
        fs.tag = BoundaryTag::wall;
        topo.faces.push_back(fs);
      }
    }
  return topo;
}

/// Build geometry for a structured mesh from a global map (u,v) in [0,1]^2
/// -> (x,y).  Element (ex,ey) covers [ex,ex+1]x[ey,ey+1] / (kx,ky).
inline Mesh structured_mesh(int degree, int kx, int ky, bool periodic_x, bool periodic_y,
                            const std::function<void(double, double, double&, double&)>& map) {
  if (kx < 1 || ky < 1) throw SwdgError("mesh: element counts must be >= 1");
  Mesh mesh;
  mesh.ops = make_operators(degree);
  const int n1 = mesh.ops.n1();
  mesh.geom.resize(kx * ky, n1);

  double x00, y00, x11, y11;
  map(0.0, 0.0, x00, y00);
  map(1.0, 1.0, x11, y11);
  mesh.x_min = x00;
  mesh.y_min = y00;
  mesh.x_max = x11;
  mesh.y_max = y11;
  mesh.topo = structured_topology(kx, ky, periodic_x, periodic_y, x11 - x00, y11 - y00);

  for (int ey = 0; ey < ky; ++ey)
    for (int ex = 0; ex < kx; ++ex) {
      const int e = ey * kx + ex;
      auto curve = [&](double u0, double v0, double u1, double v1) {
        return BoundaryCurve{[=, &map](double s, double& x, double& y) {
          const double t = 0.5 * (1.0 + s);
          map(u0 + t * (u1 - u0), v0 + t * (v1 - v0), x, y);
        }};
      };
      const double u0 = static_cast<double>(ex) / kx, u1 = static_cast<double>(ex + 1) / kx;
      const double v0 = static_cast<double>(ey) / ky, v1 = static_cast<double>(ey + 1) / ky;
      const std::array<BoundaryCurve, 4> curves = {
          curve(u0, v0, u1, v0),   // south
          curve(u1, v0, u1, v1),   // east
          curve(u0, v1, u1, v1),   // north
          curve(u0, v0, u0, v1)};  // west
      std::vector<double> xs, ys;
      build_transfinite_element(curves, mesh.ops, xs, ys);
      const int base = e * mesh.np();
      for (int n = 0; n < mesh.np(); ++n) {
        mesh.geom.x[base + n] = xs[n];
        mesh.geom.y[base + n] = ys[n];
      }
      compute_metrics(mesh.geom, e, mesh.ops);
    }
  return mesh;
}

}  // namespace detail

/// Uniform Cartesian mesh on [x0,x1] x [y0,y1].
inline Mesh build_cartesian_mesh(int degree, int kx, int ky, double x0, double x1, double y0,
                                 double y1, bool periodic_x = false, bool periodic_y = false) {
  auto map = [=](double u, double v, double& x, double& y) {
    x = x0 + u * (x1 - x0);
    y = y0 + v * (y1 - y0);
  };
  return detail::structured_mesh(degree, kx, ky, periodic_x, periodic_y, map);
}

/// Curved mesh aligned with the parabolic dam x = y^2/25 - 1/4: the dam is
/// the vertical mesh line at u = dam_fraction and the other vertical lines
/// blend linearly toward the straight left/right boundaries.
inline Mesh build_curved_dam_mesh(int degree, int kx, int ky, double x0 = -5.0, double x1 = 7.5,
                                  double y0 = -5.0, double y1 = 5.0, double dam_fraction = 0.5) {
  auto dam_x = [](double y) { return y * y / 25.0 - 0.25; };
  auto map = [=](double u, double v, double& x, double& y) {
    y = y0 + v * (y1 - y0);
    const double xd = dam_x(y);
    if (u <= dam_fraction)
      x = x0 + (u / dam_fraction) * (xd - x0);
    else
      x = xd + ((u - dam_fraction) / (1.0 - dam_fraction)) * (x1 - xd);
  };
  return detail::structured_mesh(degree, kx, ky, false, false, map);
}

/// Periodic mesh with curved interior interfaces: the unit square deformed by
/// a sine bump that vanishes on the outer boundary, scaled to [x0,x1]x[y0,y1].
inline Mesh build_wavy_mesh(int degree, int kx, int ky, double x0 = 0.0, double x1 = 1.0,
                            double y0 = 0.0, double y1 = 1.0, double amp = 0.04,
                            bool periodic_x = true, bool periodic_y = true) {
  auto map = [=](double u, double v, double& x, double& y) {
    const double s = std::sin(2.0 * M_PI * u) * std::sin(2.0 * M_PI * v);
    x = x0 + (u + amp * s) * (x1 - x0);
    y = y0 + (v - 0.75 * amp * s) * (y1 - y0);
  };
  return detail::structured_mesh(degree, kx, ky, periodic_x, periodic_y, map);
}

/// Exterior state for boundary faces: walls mirror the normal momentum.
inline Vec3 exterior_state(const Vec3& interior, double nx, double ny, BoundaryTag tag) {
  if (tag != BoundaryTag::wall) throw SwdgError("exterior_state: unknown boundary tag");
  const double mn = interior.hu * nx + interior.hv * ny;
  return {interior.h, interior.hu - 2.0 * mn * nx, interior.hv - 2.0 * mn * ny};
}

/// Largest shared-node coordinate gap across all interior faces.
inline double watertightness_gap(const Mesh& mesh) {
  const int n1 = mesh.n1();
  double worst = 0.0;
  for (const FaceInfo& f : mesh.topo.faces) {
    if (f.tag != BoundaryTag::interior) continue;
    for (int t = 0; t < n1; ++t) {
      const int nm = mesh.geom.node(f.elem_minus, 0, 0) + face_node_index(n1, f.face_minus, t);
      const int tp = MeshTopology::partner_node(f, mesh.ops.degree, t);
      const int np_ = mesh.geom.node(f.elem_plus, 0, 0) + face_node_index(n1, f.face_plus, tp);
      worst = std::max(worst, std::hypot(mesh.geom.x[nm] + f.offset_x - mesh.geom.x[np_],
                                         mesh.geom.y[nm] + f.offset_y - mesh.geom.y[np_]));
    }
  }
  return worst;
}

}  // namespace swdg
