#pragma once

#include <cmath>
#include <vector>

#include "swdg/core.hpp"

namespace swdg {

/// Legendre polynomial L_n and its derivative at x, three-term recurrence.
inline void legendre_eval(int n, double x, double& l, double& dl) {
  double lm1 = 1.0, dlm1 = 0.0;  // L_0
  if (n == 0) {
    l = lm1;
    dl = dlm1;
    return;
  }
  double lk = x, dlk = 1.0;  // L_1
  for (int k = 1; k < n; ++k) {
    const double lp = ((2 * k + 1) * x * lk - k * lm1) / (k + 1);
    const double dlp = dlm1 + (2 * k + 1) * lk;
    lm1 = lk;
    dlm1 = dlk;
    lk = lp;
    dlk = dlp;
  }
  l = lk;
  dl = dlk;
}

/// 1D reference-element operators on Legendre-Gauss-Lobatto nodes.
///
/// All matrices are dense row-major with entry (i,j) at i*(N+1)+j; this
/// layout is shared by every kernel and test in the project.
struct Operators1D {
  int degree = 0;                  // polynomial degree N
  std::vector<double> nodes;       // N+1 LGL nodes, ascending, in [-1,1]
  std::vector<double> weights;     // LGL quadrature weights, sum 2
  std::vector<double> deriv;       // D, nodal polynomial derivative
  std::vector<double> deriv_modified;  // Dtilde = 2D + S (split-form operator)
  std::vector<double> deriv_weak;      // Dhat = -M^{-1} D^T M
  std::vector<double> vandermonde;     // V, nodal <- modal (orthonormal Legendre)
  std::vector<double> vandermonde_inv; // V^{-1} via Gauss-quadrature projection
  std::vector<double> gauss_nodes;     // N+1 Legendre-Gauss nodes (used for V^{-1})
  std::vector<double> gauss_weights;

  int n1() const { return degree + 1; }

  double d(int i, int j) const { return deriv[i * n1() + j]; }
  double dt(int i, int j) const { return deriv_modified[i * n1() + j]; }
  double dh(int i, int j) const { return deriv_weak[i * n1() + j]; }
};

/// LGL nodes and weights: damped Newton on (1-x^2) L'_N(x) with Chebyshev
/// initial guesses.  The Legendre ODE collapses the Newton update to
/// x <- x + (1-x^2) L'_N / (N(N+1) L_N).
inline void build_lgl(int degree, std::vector<double>& nodes, std::vector<double>& weights) {
  if (degree < 1) throw SwdgError("build_lgl: degree must be >= 1");
  const int n1 = degree + 1;
  nodes.assign(n1, 0.0);
  weights.assign(n1, 0.0);
  nodes[0] = -1.0;
  nodes[degree] = 1.0;
  const double nn1 = static_cast<double>(degree) * (degree + 1);
  for (int j = 1; j < degree; ++j) {
    double x = -std::cos(M_PI * j / degree);  // Chebyshev-Lobatto guess
    for (int it = 0; it < 100; ++it) {
      double l, dl;
      legendre_eval(degree, x, l, dl);
      const double dx = (1.0 - x * x) * dl / (nn1 * l);
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[j] = x;
  }
  for (int j = 0; j < n1; ++j) {
    double l, dl;
    legendre_eval(degree, nodes[j], l, dl);
    weights[j] = 2.0 / (nn1 * l * l);
  }
}

/// Legendre-Gauss nodes/weights (roots of L_{n1}), for the modal projection.
inline void build_gauss(int n1, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n1, 0.0);
  weights.assign(n1, 0.0);
  for (int j = 0; j < n1; ++j) {
    double x = -std::cos(M_PI * (2 * j + 1) / (2.0 * n1));
    for (int it = 0; it < 100; ++it) {
      double l, dl;
      legendre_eval(n1, x, l, dl);
      const double dx = -l / dl;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[j] = x;
    double l, dl;
    legendre_eval(n1, x, l, dl);
    weights[j] = 2.0 / ((1.0 - x * x) * dl * dl);
  }
}

/// Nodal derivative matrix D_{ij} = l_j'(x_i).  The LGL closed form
/// D_{ij} = L_N(x_i) / (L_N(x_j) (x_i - x_j)) keeps the discrete
/// summation-by-parts residual at the few-ulp level even for the endpoint
/// rows, where the entries grow like N^2.
inline std::vector<double> build_deriv(const std::vector<double>& nodes) {
  const int n1 = static_cast<int>(nodes.size());
  const int degree = n1 - 1;
  std::vector<double> ln(n1);
  for (int i = 0; i < n1; ++i) {
    double l, dl;
    legendre_eval(degree, nodes[i], l, dl);
    ln[i] = l;
  }
  std::vector<double> d(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      if (i != j) d[i * n1 + j] = ln[i] / (ln[j] * (nodes[i] - nodes[j]));
  d[0] = -0.25 * degree * (degree + 1);
  d[n1 * n1 - 1] = 0.25 * degree * (degree + 1);
  return d;
}

/// Lagrange basis values l_j(x) on the given nodes (barycentric).
inline std::vector<double> lagrange_basis_at(const std::vector<double>& nodes, double x) {
  const int n1 = static_cast<int>(nodes.size());
  std::vector<double> out(n1, 0.0);
  for (int j = 0; j < n1; ++j) {
    if (std::abs(x - nodes[j]) < 1e-14) {
      out[j] = 1.0;
      return out;
    }
  }
  std::vector<double> wb(n1, 1.0);
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n1; ++k)
      if (k != i) wb[i] *= nodes[i] - nodes[k];
  double denom = 0.0;
  for (int j = 0; j < n1; ++j) {
    out[j] = 1.0 / (wb[j] * (x - nodes[j]));
    denom += out[j];
  }
  for (int j = 0; j < n1; ++j) out[j] /= denom;
  return out;
}

inline Operators1D make_operators(int degree) {
  Operators1D ops;
  ops.degree = degree;
  build_lgl(degree, ops.nodes, ops.weights);
  const int n1 = degree + 1;
  ops.deriv = build_deriv(ops.nodes);

  // Dtilde = 2D + S and Dhat = -M^{-1} D^T M, with the surface matrix
  // S = diag(1/w_0, 0, ..., 0, -1/w_N).  SBP gives D = -S + Dhat.
  ops.deriv_modified.assign(n1 * n1, 0.0);
  ops.deriv_weak.assign(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      ops.deriv_modified[i * n1 + j] = 2.0 * ops.deriv[i * n1 + j];
      ops.deriv_weak[i * n1 + j] = -ops.deriv[j * n1 + i] * ops.weights[j] / ops.weights[i];
    }
  ops.deriv_modified[0] += 1.0 / ops.weights[0];
  ops.deriv_modified[n1 * n1 - 1] -= 1.0 / ops.weights[degree];

  // Vandermonde pair for the orthonormal Legendre basis L_j sqrt(j + 1/2);
  // the inverse is the exact L2 projection evaluated with Gauss quadrature.
  build_gauss(n1, ops.gauss_nodes, ops.gauss_weights);
  ops.vandermonde.assign(n1 * n1, 0.0);
  ops.vandermonde_inv.assign(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double l, dl;
      legendre_eval(j, ops.nodes[i], l, dl);
      ops.vandermonde[i * n1 + j] = l * std::sqrt(j + 0.5);
    }
  for (int l = 0; l < n1; ++l) {
    const std::vector<double> lag = lagrange_basis_at(ops.nodes, ops.gauss_nodes[l]);
    for (int i = 0; i < n1; ++i) {
      double li, dli;
      legendre_eval(i, ops.gauss_nodes[l], li, dli);
      for (int j = 0; j < n1; ++j)
        ops.vandermonde_inv[i * n1 + j] += std::sqrt(i + 0.5) * li * lag[j] * ops.gauss_weights[l];
    }
  }
  return ops;
}

/// Tensor modal transform: modal = V^{-1} * nodal * V^{-T}.
inline void nodal_to_modal(const Operators1D& ops, const double* nodal, double* modal) {
  const int n1 = ops.n1();
  std::vector<double> tmp(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int k = 0; k < n1; ++k) s += ops.vandermonde_inv[i * n1 + k] * nodal[k * n1 + j];
      tmp[i * n1 + j] = s;
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int k = 0; k < n1; ++k) s += tmp[i * n1 + k] * ops.vandermonde_inv[j * n1 + k];
      modal[i * n1 + j] = s;
    }
}

inline void modal_to_nodal(const Operators1D& ops, const double* modal, double* nodal) {
  const int n1 = ops.n1();
  std::vector<double> tmp(n1 * n1, 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int k = 0; k < n1; ++k) s += ops.vandermonde[i * n1 + k] * modal[k * n1 + j];
      tmp[i * n1 + j] = s;
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int k = 0; k < n1; ++k) s += tmp[i * n1 + k] * ops.vandermonde[j * n1 + k];
      nodal[i * n1 + j] = s;
    }
}

}  // namespace swdg
