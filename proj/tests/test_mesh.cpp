#include <catch_amalgamated.hpp>

#include <cmath>

#include "swdg/mesh.hpp"

using namespace swdg;

TEST_CASE("transfinite map of straight-sided elements", "[mesh]") {
  const Operators1D ops = make_operators(3);
  SECTION("unit square is the bilinear map") {
    std::array<BoundaryCurve, 4> curves = {
        straight_line(0, 0, 1, 0), straight_line(1, 0, 1, 1),
        straight_line(0, 1, 1, 1), straight_line(0, 0, 0, 1)};
    std::vector<double> x, y;
    build_transfinite_element(curves, ops, x, y);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        CHECK(x[node_index(4, i, j)] == Catch::Approx((ops.nodes[i] + 1) / 2).margin(1e-14));
        CHECK(y[node_index(4, i, j)] == Catch::Approx((ops.nodes[j] + 1) / 2).margin(1e-14));
      }
  }
  SECTION("corner mismatch is rejected") {
    std::array<BoundaryCurve, 4> curves = {
        straight_line(0, 0, 1, 0), straight_line(1, 0.1, 1, 1),  // east start off by 0.1
        straight_line(0, 1, 1, 1), straight_line(0, 0, 0, 1)};
    std::vector<double> x, y;
    CHECK_THROWS_AS(build_transfinite_element(curves, ops, x, y), SwdgError);
  }
  SECTION("parabolic edge matching the dam curve") {
    auto dam = [](double s, double& x, double& y) {
      y = 5.0 * s;  // y in [-5, 5]
      x = y * y / 25.0 - 0.25;
    };
    // dam curve at y = +-5 sits at x = 0.75; shifted east edge ends at 1.75
    std::array<BoundaryCurve, 4> curves = {
        straight_line(-5, -5, 1.75, -5),
        BoundaryCurve{[&](double s, double& x, double& y) {
          dam(s, x, y);
          x += 1.0;
        }},
        straight_line(-5, 5, 1.75, 5),
        straight_line(-5, -5, -5, 5)};
    std::vector<double> x, y;
    build_transfinite_element(curves, ops, x, y);
    // east edge nodes must sit exactly on the shifted parabola
    for (int j = 0; j <= 3; ++j) {
      const int n = node_index(4, 3, j);
      CHECK(x[n] == Catch::Approx(y[n] * y[n] / 25.0 - 0.25 + 1.0).margin(1e-13));
    }
  }
}

TEST_CASE("metric terms and normals", "[mesh]") {
  SECTION("unit-square element") {
    Mesh mesh = build_cartesian_mesh(3, 1, 1, 0.0, 1.0, 0.0, 1.0);
    for (int n = 0; n < mesh.np(); ++n) {
      CHECK(mesh.geom.jac[n] == Catch::Approx(0.25).margin(1e-14));
      CHECK(mesh.geom.x_xi[n] == Catch::Approx(0.5).margin(1e-14));
      CHECK(mesh.geom.y_eta[n] == Catch::Approx(0.5).margin(1e-14));
    }
    const int fe = mesh.geom.fnode(0, face_east, 1);
    CHECK(mesh.geom.face_nx[fe] == Catch::Approx(1.0));
    CHECK(mesh.geom.face_ny[fe] == Catch::Approx(0.0).margin(1e-15));
    const int fs = mesh.geom.fnode(0, face_south, 2);
    CHECK(mesh.geom.face_ny[fs] == Catch::Approx(-1.0));
  }
  SECTION("rotated square has rotated unit normals") {
    const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
    const Operators1D ops = make_operators(4);
    std::array<BoundaryCurve, 4> curves;
    auto corner = [&](double u, double v, double& x, double& y) {
      x = c * u - s * v;
      y = s * u + c * v;
    };
    auto edge = [&](double u0, double v0, double u1, double v1) {
      return BoundaryCurve{[=](double t, double& x, double& y) {
        const double u = 0.5 * (1 - t) * u0 + 0.5 * (1 + t) * u1;
        const double v = 0.5 * (1 - t) * v0 + 0.5 * (1 + t) * v1;
        corner(u, v, x, y);
      }};
    };
    curves = {edge(0, 0, 1, 0), edge(1, 0, 1, 1), edge(0, 1, 1, 1), edge(0, 0, 0, 1)};
    MeshGeometry g;
    g.resize(1, 5);
    std::vector<double> x, y;
    build_transfinite_element(curves, ops, x, y);
    for (int n = 0; n < 25; ++n) {
      g.x[n] = x[n];
      g.y[n] = y[n];
    }
    compute_metrics(g, 0, ops);
    const int fe = g.fnode(0, face_east, 2);
    CHECK(g.face_nx[fe] == Catch::Approx(c).margin(1e-13));
    CHECK(g.face_ny[fe] == Catch::Approx(s).margin(1e-13));
    CHECK(std::hypot(g.face_nx[fe], g.face_ny[fe]) == Catch::Approx(1.0).margin(1e-13));
  }
  SECTION("curved dam mesh: positive Jacobians and metric commutation") {
    Mesh mesh = build_curved_dam_mesh(4, 8, 8);
    const int n1 = mesh.n1();
    for (double j : mesh.geom.jac) CHECK(j > 0.0);
    // mixed derivatives of the coordinate polynomials commute
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) {
          double dxi_yeta = 0.0, deta_yxi = 0.0, dxi_xeta = 0.0, deta_xxi = 0.0;
          for (int m = 0; m < n1; ++m) {
            dxi_yeta += mesh.ops.d(i, m) * mesh.geom.y_eta[mesh.geom.node(e, m, j)];
            deta_yxi += mesh.ops.d(j, m) * mesh.geom.y_xi[mesh.geom.node(e, i, m)];
            dxi_xeta += mesh.ops.d(i, m) * mesh.geom.x_eta[mesh.geom.node(e, m, j)];
            deta_xxi += mesh.ops.d(j, m) * mesh.geom.x_xi[mesh.geom.node(e, i, m)];
          }
          CHECK(std::abs(dxi_yeta - deta_yxi) < 1e-12);
          CHECK(std::abs(dxi_xeta - deta_xxi) < 1e-12);
        }
  }
  SECTION("inverted element is rejected with its id") {
    const Operators1D ops = make_operators(2);
    MeshGeometry g;
    g.resize(1, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        // x decreasing in xi flips the Jacobian sign
        g.x[node_index(3, i, j)] = -ops.nodes[i];
        g.y[node_index(3, i, j)] = ops.nodes[j];
      }
    CHECK_THROWS_WITH(compute_metrics(g, 0, ops), Catch::Matchers::ContainsSubstring("element 0"));
  }
}

TEST_CASE("cartesian mesh bookkeeping", "[mesh]") {
  Mesh mesh = build_cartesian_mesh(3, 50, 50, -20.0, 20.0, -20.0, 20.0, false, true);
  SECTION("uniform Jacobian") {
    for (double j : mesh.geom.jac) CHECK(j == Catch::Approx(0.16).margin(1e-13));
  }
  SECTION("face pairing counts") {
    int interior = 0, wall = 0;
    for (const FaceInfo& f : mesh.topo.faces) {
      if (f.tag == BoundaryTag::interior) ++interior;
      else ++wall;
    }
    // 49*50 interior x-pairings + 50*50 periodic/interior y-pairings
    CHECK(interior == 49 * 50 + 50 * 50);
    CHECK(wall == 2 * 50);
  }
  SECTION("face scaling a = J / Jsurf") {
    // rectangle elements so the two directions differ: dx = 2, dy = 0.5
    Mesh rect = build_cartesian_mesh(2, 4, 4, 0.0, 8.0, 0.0, 2.0);
    for (int e : {0, 5, 15})
      for (int f = 0; f < 4; ++f)
        for (int t = 0; t < 3; ++t) {
          const double a = rect.geom.face_a[rect.geom.fnode(e, f, t)];
          const double expect = (f == face_east || f == face_west) ? 2.0 / 2.0 : 0.5 / 2.0;
          CHECK(a == Catch::Approx(expect).margin(1e-13));
        }
  }
  SECTION("watertight and opposing normals") {
    CHECK(watertightness_gap(mesh) < 1e-10);
    for (const FaceInfo& f : mesh.topo.faces) {
      if (f.tag != BoundaryTag::interior) continue;
      for (int t = 0; t <= 3; ++t) {
        const int fm = mesh.geom.fnode(f.elem_minus, f.face_minus, t);
        const int fp =
            mesh.geom.fnode(f.elem_plus, f.face_plus, MeshTopology::partner_node(f, 3, t));
        CHECK(std::abs(mesh.geom.face_nx[fm] + mesh.geom.face_nx[fp]) < 1e-12);
        CHECK(std::abs(mesh.geom.face_ny[fm] + mesh.geom.face_ny[fp]) < 1e-12);
        CHECK(std::abs(mesh.geom.face_jsurf[fm] - mesh.geom.face_jsurf[fp]) < 1e-12);
      }
    }
  }
}

TEST_CASE("wavy periodic mesh is watertight with curved interfaces", "[mesh]") {
  Mesh mesh = build_wavy_mesh(4, 5, 4);
  CHECK(watertightness_gap(mesh) < 1e-10);
  for (double j : mesh.geom.jac) CHECK(j > 0.0);
  // at least one interior face must actually be curved
  double curve = 0.0;
  for (const FaceInfo& f : mesh.topo.faces) {
    if (f.tag != BoundaryTag::interior) continue;
    const int f0 = mesh.geom.fnode(f.elem_minus, f.face_minus, 0);
    const int f2 = mesh.geom.fnode(f.elem_minus, f.face_minus, 2);
    curve = std::max(curve, std::abs(mesh.geom.face_nx[f0] - mesh.geom.face_nx[f2]));
  }
  CHECK(curve > 1e-3);
}

TEST_CASE("face node pairing honors the reversal flag", "[mesh]") {
  FaceInfo f;
  f.reversed = false;
  CHECK(MeshTopology::partner_node(f, 4, 1) == 1);
  f.reversed = true;
  CHECK(MeshTopology::partner_node(f, 4, 1) == 3);
  CHECK(MeshTopology::partner_node(f, 4, 0) == 4);
}

TEST_CASE("wall exterior state", "[mesh]") {
  SECTION("normal momentum negated") {
    const Vec3 w = exterior_state({1.0, 1.0, 0.0}, 1.0, 0.0, BoundaryTag::wall);
    CHECK(w.h == 1.0);
    CHECK(w.hu == -1.0);
    CHECK(w.hv == 0.0);
  }
  SECTION("tangential momentum preserved") {
    const Vec3 w = exterior_state({1.0, 0.0, 2.0}, 1.0, 0.0, BoundaryTag::wall);
    CHECK(w.hu == 0.0);
    CHECK(w.hv == 2.0);
  }
  SECTION("diagonal wall reflection") {
    const double r = std::sqrt(2.0) / 2.0;
    const Vec3 w = exterior_state({1.0, 1.0, 0.0}, r, r, BoundaryTag::wall);
    CHECK(w.hu == Catch::Approx(0.0).margin(1e-15));
    CHECK(w.hv == Catch::Approx(-1.0).margin(1e-15));
  }
}

TEST_CASE("curved dam mesh aligns with the dam curve", "[mesh]") {
  Mesh mesh = build_curved_dam_mesh(3, 8, 8);
  // the east face of column kx/2-1 sits on x = y^2/25 - 1/4
  const int kx = 8;
  for (int ey = 0; ey < 8; ++ey) {
    const int e = ey * kx + kx / 2 - 1;
    for (int t = 0; t <= 3; ++t) {
      const int n = e * mesh.np() + face_node_index(4, face_east, t);
      CHECK(mesh.geom.x[n] ==
            Catch::Approx(mesh.geom.y[n] * mesh.geom.y[n] / 25.0 - 0.25).margin(1e-12));
    }
  }
}
