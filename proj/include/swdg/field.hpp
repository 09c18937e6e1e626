#pragma once

#include <vector>

#include "swdg/core.hpp"
#include "swdg/mesh.hpp"
#include "swdg/physics.hpp"

namespace swdg {

/// Nodal conserved variables over the whole mesh, element-major flat arrays.
struct State {
  int n_elem = 0;
  int n1 = 0;
  std::vector<double> h, hu, hv;

  void resize(int k, int n1_) {
    n_elem = k;
    n1 = n1_;
    h.assign(k * n1_ * n1_, 0.0);
    hu.assign(k * n1_ * n1_, 0.0);
    hv.assign(k * n1_ * n1_, 0.0);
  }

  int np() const { return n1 * n1; }
  int size() const { return n_elem * np(); }

  Vec3 at(int n) const { return {h[n], hu[n], hv[n]}; }
  void set(int n, const Vec3& w) {
    h[n] = w.h;
    hu[n] = w.hu;
    hv[n] = w.hv;
  }
};

using Residual = State;  // nodal (dh, dhu, dhv), same layout

/// J-weighted quadrature totals used by conservation/entropy diagnostics.
inline double total_mass(const State& s, const Mesh& mesh) {
  const int n1 = mesh.n1();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        const int n = mesh.geom.node(e, i, j);
        sum += s.h[n] * mesh.geom.jac[n] * mesh.ops.weights[i] * mesh.ops.weights[j];
      }
  return sum;
}

inline double total_entropy(const State& s, const Mesh& mesh, const PhysicsParams& p) {
  const int n1 = mesh.n1();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        const int n = mesh.geom.node(e, i, j);
        sum += phys::entropy(s.at(n), mesh.geom.b[n], p) * mesh.geom.jac[n] *
               mesh.ops.weights[i] * mesh.ops.weights[j];
      }
  return sum;
}

inline double min_height(const State& s) {
  double m = s.h.empty() ? 0.0 : s.h[0];
  for (double v : s.h) m = std::min(m, v);
  return m;
}

}  // namespace swdg
