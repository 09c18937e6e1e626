#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/field.hpp"
#include "swdg/mesh.hpp"
#include "swdg/operators.hpp"
#include "swdg/timeloop.hpp"

namespace swdg {
namespace io {

/// All columnar files are semicolon separated with one '#' metadata line
/// (config hash and, for snapshots, the time) followed by one header line
/// naming every column.  Files are written to a temporary name and renamed,
/// so an abort never leaves a partial file behind.
class AtomicWriter {
 public:
  explicit AtomicWriter(const std::string& path) : path_(path), tmp_(path + ".tmp") {
    out_.open(tmp_);
    if (!out_) throw SwdgError("cannot open output file " + tmp_);
  }
  ~AtomicWriter() {
    if (!committed_) {
      out_.close();
      std::remove(tmp_.c_str());
    }
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.close();
    if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
      throw SwdgError("cannot rename output file to " + path_);
    committed_ = true;
  }

 private:
  std::string path_, tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_snapshot(const std::string& path, const State& s, const Mesh& mesh,
                           double time, const std::vector<double>& eps_elem,
                           const std::string& hash) {
  AtomicWriter w(path);
  auto& out = w.stream();
  out << "# swdg snapshot config=" << hash << " t=" << fmt(time) << "\n";
  out << "element;i;j;x;y;h;hu;hv;b;H;eps\n";
  const int n1 = mesh.n1();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double eps = eps_elem.empty() ? 0.0 : eps_elem[e];
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        const int n = mesh.geom.node(e, i, j);
        out << e << ';' << i << ';' << j << ';' << fmt(mesh.geom.x[n]) << ';'
            << fmt(mesh.geom.y[n]) << ';' << fmt(s.h[n]) << ';' << fmt(s.hu[n]) << ';'
            << fmt(s.hv[n]) << ';' << fmt(mesh.geom.b[n]) << ';'
            << fmt(s.h[n] + mesh.geom.b[n]) << ';' << fmt(eps) << "\n";
      }
  }
  w.commit();
}

/// Reload a snapshot written by write_snapshot; full-precision decimal makes
/// the round trip bitwise exact.
inline State read_snapshot(const std::string& path, const Mesh& mesh, double& time) {
  std::ifstream in(path);
  if (!in) throw SwdgError("cannot open snapshot " + path);
  std::string line;
  std::getline(in, line);
  const auto tpos = line.find(" t=");
  if (line.rfind("# swdg snapshot", 0) != 0 || tpos == std::string::npos)
    throw SwdgError("not a snapshot file: " + path);
  time = std::stod(line.substr(tpos + 3));
  std::getline(in, line);  // column header
  State s;
  s.resize(mesh.n_elements(), mesh.n1());
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    auto next = [&]() {
      if (!std::getline(ls, tok, ';')) throw SwdgError("snapshot row too short: " + line);
      return tok;
    };
    const int e = std::stoi(next());
    const int i = std::stoi(next());
    const int j = std::stoi(next());
    next();  // x
    next();  // y
    const double h = std::stod(next());
    const double hu = std::stod(next());
    const double hv = std::stod(next());
    const int n = mesh.geom.node(e, i, j);
    s.h[n] = h;
    s.hu[n] = hu;
    s.hv[n] = hv;
    ++rows;
  }
  if (rows != mesh.n_elements() * mesh.np())
    throw SwdgError("snapshot row count mismatch in " + path);
  return s;
}

namespace detail {

/// Evaluate the 1D nodal interpolant given values at the LGL nodes.
inline double interp1d(const Operators1D& ops, const std::vector<double>& vals, double s) {
  const std::vector<double> basis = lagrange_basis_at(ops.nodes, s);
  double acc = 0.0;
  for (size_t j = 0; j < vals.size(); ++j) acc += basis[j] * vals[j];
  return acc;
}

/// Solve interp(vals)(s) = target on [-1,1]; the coordinate polynomials of
/// the built-in meshes are monotone along mesh lines, so safeguarded Newton
/// with bisection is enough.  Returns false if the target is not bracketed.
inline bool invert_coordinate(const Operators1D& ops, const std::vector<double>& vals,
                              double target, double& s) {
  double lo = -1.0, hi = 1.0;
  double flo = vals.front() - target, fhi = vals.back() - target;
  if (flo == 0.0) { s = -1.0; return true; }
  if (fhi == 0.0) { s = 1.0; return true; }
  if ((flo > 0.0) == (fhi > 0.0)) return false;
  s = lo + (hi - lo) * (-flo) / (fhi - flo);
  for (int it = 0; it < 60; ++it) {
    const double f = interp1d(ops, vals, s) - target;
    if (std::abs(f) < 1e-14) return true;
    if ((f > 0.0) == (fhi > 0.0)) {
      hi = s;
      fhi = f;
    } else {
      lo = s;
      flo = f;
    }
    // secant proposal, clipped to the bracket
    double prop = lo + (hi - lo) * (-flo) / (fhi - flo);
    if (!(prop > lo && prop < hi)) prop = 0.5 * (lo + hi);
    s = prop;
  }
  return true;
}

}  // namespace detail

/// Extract the solution along an axis-aligned line (axis 'y': the line
/// y = coordinate) by inverting the coordinate polynomial on each crossed
/// element and evaluating the nodal polynomials at the face-aligned LGL
/// points of the other direction.
inline void write_slice(const std::string& path, const State& s, const Mesh& mesh, double time,
                        char axis, double coordinate, const std::vector<double>& eps_elem,
                        const std::string& hash) {
  if (axis != 'x' && axis != 'y') throw SwdgError("slice axis must be 'x' or 'y'");
  AtomicWriter w(path);
  auto& out = w.stream();
  out << "# swdg slice config=" << hash << " t=" << fmt(time) << " axis=" << axis
      << " coord=" << fmt(coordinate) << "\n";
  out << "element;k;x;y;h;hu;hv;b;H;eps\n";
  const int n1 = mesh.n1();
  const std::vector<double>& cross = axis == 'y' ? mesh.geom.y : mesh.geom.x;
  const std::vector<double>& along = axis == 'y' ? mesh.geom.x : mesh.geom.y;
  int hits = 0;
  std::vector<double> line(n1);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int base = e * mesh.np();
    double cmin = cross[base], cmax = cross[base];
    for (int n = 1; n < mesh.np(); ++n) {
      cmin = std::min(cmin, cross[base + n]);
      cmax = std::max(cmax, cross[base + n]);
    }
    if (coordinate < cmin - 1e-12 || coordinate > cmax + 1e-12) continue;
    for (int k = 0; k < n1; ++k) {
      // mesh line at fixed index k in the along direction
      for (int m = 0; m < n1; ++m)
        line[m] = axis == 'y' ? cross[base + node_index(n1, k, m)]
                              : cross[base + node_index(n1, m, k)];
      double sref;
      if (!detail::invert_coordinate(mesh.ops, line, coordinate, sref)) continue;
      auto eval = [&](const std::vector<double>& field) {
        std::vector<double> vals(n1);
        for (int m = 0; m < n1; ++m)
          vals[m] = axis == 'y' ? field[base + node_index(n1, k, m)]
                                : field[base + node_index(n1, m, k)];
        return detail::interp1d(mesh.ops, vals, sref);
      };
      const double pos = eval(along);
      const double h = eval(s.h);
      const double hu = eval(s.hu);
      const double hv = eval(s.hv);
      const double b = eval(mesh.geom.b);
      const double eps = eps_elem.empty() ? 0.0 : eps_elem[e];
      const double xq = axis == 'y' ? pos : coordinate;
      const double yq = axis == 'y' ? coordinate : pos;
      out << e << ';' << k << ';' << fmt(xq) << ';' << fmt(yq) << ';' << fmt(h) << ';' << fmt(hu)
          << ';' << fmt(hv) << ';' << fmt(b) << ';' << fmt(h + b) << ';' << fmt(eps) << "\n";
      ++hits;
    }
  }
  if (hits == 0) throw SwdgError("slice lies outside the mesh");
  w.commit();
}

inline void dump_mesh(const std::string& path, const Mesh& mesh, const std::string& hash) {
  AtomicWriter w(path);
  auto& out = w.stream();
  out << "# swdg mesh config=" << hash << "\n";
  out << "element;i;j;x;y;J;b\n";
  const int n1 = mesh.n1();
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        const int n = mesh.geom.node(e, i, j);
        out << e << ';' << i << ';' << j << ';' << fmt(mesh.geom.x[n]) << ';'
            << fmt(mesh.geom.y[n]) << ';' << fmt(mesh.geom.jac[n]) << ';' << fmt(mesh.geom.b[n])
            << "\n";
      }
  w.commit();
}

/// Step diagnostics series, appended one line per accepted step.
class DiagnosticsWriter {
 public:
  DiagnosticsWriter() = default;
  DiagnosticsWriter(const std::string& path, const std::string& hash) { open(path, hash); }

  void open(const std::string& path, const std::string& hash) {
    out_.open(path);
    if (!out_) throw SwdgError("cannot open diagnostics file " + path);
    out_ << "# swdg diagnostics config=" << hash << "\n";
    out_ << "step;t;dt;mass;entropy;min_h;n_limited;max_eps\n";
  }

  void append(const StepDiagnostics& d) {
    if (!out_.is_open()) return;
    out_ << d.step << ';' << fmt(d.t) << ';' << fmt(d.dt) << ';' << fmt(d.mass) << ';'
         << fmt(d.entropy) << ';' << fmt(d.min_h) << ';' << d.n_limited << ';' << fmt(d.max_eps)
         << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
};

}  // namespace io
}  // namespace swdg
