#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swdg {

/// Conserved state (h, hu, hv) or any other 3-component nodal quantity.
struct Vec3 {
  double h = 0.0;
  double hu = 0.0;
  double hv = 0.0;

  Vec3() = default;
  Vec3(double h_, double hu_, double hv_) : h(h_), hu(hu_), hv(hv_) {}

  Vec3& operator+=(const Vec3& o) {
    h += o.h;
    hu += o.hu;
    hv += o.hv;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    h -= o.h;
    hu -= o.hu;
    hv -= o.hv;
    return *this;
  }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.h, s * a.hu, s * a.hv}; }

/// Node layout inside one element: (N+1)x(N+1) tensor grid, xi index i
/// outermost, so node (i,j) sits at i*(N+1)+j.  All nodal element arrays in
/// the code share this ordering.
inline int node_index(int n1, int i, int j) { return i * n1 + j; }

/// Local face ids of the reference square.
enum Face : int {
  face_south = 0,  // eta = -1
  face_east = 1,   // xi  = +1
  face_north = 2,  // eta = +1
  face_west = 3    // xi  = -1
};

/// Element node hit by face node t (t runs along the face).
inline int face_node_index(int n1, int face, int t) {
  switch (face) {
    case face_south: return node_index(n1, t, 0);
    case face_east: return node_index(n1, n1 - 1, t);
    case face_north: return node_index(n1, t, n1 - 1);
    case face_west: return node_index(n1, 0, t);
  }
  throw std::logic_error("face_node_index: bad face id");
}

struct SwdgError : std::runtime_error {
  explicit SwdgError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace swdg
