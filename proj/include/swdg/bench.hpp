#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "swdg/core.hpp"
#include "swdg/dg_rhs.hpp"
#include "swdg/operators.hpp"

namespace swdg {
namespace bench {

/// Scalar that tallies every floating point operation flowing through it.
/// The volume kernels are templated on the number type, so the counting pass
/// runs the exact code path that the timing pass runs with double.
struct CountReal {
  double v = 0.0;

  struct Counter {
    std::uint64_t add = 0, mul = 0, div = 0, abs_ = 0, sqrt_ = 0, flux_evals = 0;
    std::uint64_t flops() const { return add + mul + div + abs_ + sqrt_; }
    void reset() { *this = Counter{}; }
  };
  static Counter& counter() {
    static Counter c;
    return c;
  }

  CountReal() = default;
  CountReal(double x) : v(x) {}  // NOLINT: implicit by design, literals flow in

  friend CountReal operator+(CountReal a, CountReal b) { ++counter().add; return {a.v + b.v}; }
  friend CountReal operator-(CountReal a, CountReal b) { ++counter().add; return {a.v - b.v}; }
  friend CountReal operator*(CountReal a, CountReal b) { ++counter().mul; return {a.v * b.v}; }
  friend CountReal operator/(CountReal a, CountReal b) { ++counter().div; return {a.v / b.v}; }
  CountReal operator-() const { ++counter().add; return {-v}; }
  CountReal& operator+=(CountReal o) { ++counter().add; v += o.v; return *this; }
  CountReal& operator-=(CountReal o) { ++counter().add; v -= o.v; return *this; }
  CountReal& operator*=(CountReal o) { ++counter().mul; v *= o.v; return *this; }
  friend bool operator<(CountReal a, CountReal b) { return a.v < b.v; }
  friend bool operator>(CountReal a, CountReal b) { return a.v > b.v; }
  friend bool operator<=(CountReal a, CountReal b) { return a.v <= b.v; }
  friend bool operator>=(CountReal a, CountReal b) { return a.v >= b.v; }
};

inline CountReal sqrt(CountReal a) { ++CountReal::counter().sqrt_; return {std::sqrt(a.v)}; }
inline CountReal abs(CountReal a) { ++CountReal::counter().abs_; return {std::abs(a.v)}; }

}  // namespace bench

namespace fluxes {
template <>
inline void flux_eval_tick<bench::CountReal>() {
  ++bench::CountReal::counter().flux_evals;
}
}  // namespace fluxes

namespace bench {

struct BenchRecord {
  int degree = 0;
  long k_elements = 0;
  long dofs = 0;  // 3 fields x K x (N+1)^2
  std::uint64_t flux_evals_split = 0;
  std::uint64_t flux_evals_standard = 0;
  std::uint64_t flops_split = 0;
  std::uint64_t flops_standard = 0;
  double t_split = 0.0;     // seconds, median per kernel execution
  double t_standard = 0.0;
  double t_split_mean = 0.0;
  double t_standard_mean = 0.0;
  double t_memcopy = 0.0;
  std::uint64_t bytes_rw = 0;         // bytes read + written by the volume kernel
  double bw_effective = 0.0;          // bytes_rw / t_split
  double bw_memcopy = 0.0;
  double roofline_memcopy = 0.0;      // GFLOPS bound from the memcopy baseline
  double roofline_combined = 0.0;
  double us_per_mdof_split = 0.0;     // microseconds per million DOFs
  double us_per_mdof_standard = 0.0;
  double us_per_mdof_memcopy = 0.0;
  int workers = 1;
};

inline std::uint64_t closed_form_split_evals(int degree, long k) {
  const std::uint64_t n1 = degree + 1;
  return 2 * n1 * n1 * n1 * static_cast<std::uint64_t>(k);
}

inline std::uint64_t closed_form_standard_evals(int degree, long k) {
  const std::uint64_t n1 = degree + 1;
  return 2 * n1 * n1 * static_cast<std::uint64_t>(k);
}

/// Scratch buffers with a seeded random wet field; geometry mimics a
/// uniform element so the kernels run realistic metric data.
struct KernelBuffers {
  int n1 = 0;
  long k = 0;
  std::vector<double> h, hu, hv, yeta, xeta, yxi, xxi, out_h, out_hu, out_hv, scratch;

  void init(int degree, long k_elems, unsigned seed = 20250810) {
    n1 = degree + 1;
    k = k_elems;
    const long n = k * n1 * n1;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> hdist(0.5, 2.0), udist(-1.0, 1.0);
    h.resize(n);
    hu.resize(n);
    hv.resize(n);
    for (long i = 0; i < n; ++i) {
      h[i] = hdist(rng);
      hu[i] = h[i] * udist(rng);
      hv[i] = h[i] * udist(rng);
    }
    yeta.assign(n, 0.5);
    xeta.assign(n, 0.0);
    yxi.assign(n, 0.0);
    xxi.assign(n, 0.5);
    out_h.assign(n, 0.0);
    out_hu.assign(n, 0.0);
    out_hv.assign(n, 0.0);
    scratch.assign(6 * n1 * n1, 0.0);
  }
};

/// One full pass of the split-form volume kernel over all K elements.
inline void run_split_kernel(KernelBuffers& b, const Operators1D& ops, double g) {
  const int np = b.n1 * b.n1;
  for (long e = 0; e < b.k; ++e) {
    const long o = e * np;
    kernels::split_volume_element<double>(
        b.n1, g, 1e-8, b.h.data() + o, b.hu.data() + o, b.hv.data() + o, b.yeta.data() + o,
        b.xeta.data() + o, b.yxi.data() + o, b.xxi.data() + o, ops.deriv_modified.data(),
        b.scratch.data(), b.scratch.data() + np, b.out_h.data() + o, b.out_hu.data() + o,
        b.out_hv.data() + o);
  }
}

inline void run_standard_kernel(KernelBuffers& b, const Operators1D& ops, double g) {
  const int np = b.n1 * b.n1;
  for (long e = 0; e < b.k; ++e) {
    const long o = e * np;
    kernels::standard_volume_element<double>(
        b.n1, g, 1e-8, b.h.data() + o, b.hu.data() + o, b.hv.data() + o, b.yeta.data() + o,
        b.xeta.data() + o, b.yxi.data() + o, b.xxi.data() + o, ops.deriv.data(),
        b.scratch.data(), b.scratch.data() + 3 * np, b.out_h.data() + o, b.out_hu.data() + o,
        b.out_hv.data() + o);
  }
}

/// Instrumented pass: same kernels on the counting scalar, one element is
/// enough because the per-element work is identical.
inline void count_ops(int degree, long k, std::uint64_t& evals_split, std::uint64_t& evals_std,
                      std::uint64_t& flops_split, std::uint64_t& flops_std) {
  const Operators1D ops = make_operators(degree);
  const int n1 = degree + 1;
  const int np = n1 * n1;
  KernelBuffers b;
  b.init(degree, 1);
  std::vector<CountReal> h(b.h.begin(), b.h.end()), hu(b.hu.begin(), b.hu.end()),
      hv(b.hv.begin(), b.hv.end()), yeta(b.yeta.begin(), b.yeta.end()),
      xeta(b.xeta.begin(), b.xeta.end()), yxi(b.yxi.begin(), b.yxi.end()),
      xxi(b.xxi.begin(), b.xxi.end()),
      dtilde(ops.deriv_modified.begin(), ops.deriv_modified.end()),
      deriv(ops.deriv.begin(), ops.deriv.end());
  std::vector<CountReal> out_h(np), out_hu(np), out_hv(np), scratch(6 * np);

  CountReal::counter().reset();
  kernels::split_volume_element<CountReal>(n1, 10.0, 1e-8, h.data(), hu.data(), hv.data(),
                                           yeta.data(), xeta.data(), yxi.data(), xxi.data(),
                                           dtilde.data(), scratch.data(), scratch.data() + np,
                                           out_h.data(), out_hu.data(), out_hv.data());
  evals_split = CountReal::counter().flux_evals * k;
  flops_split = CountReal::counter().flops() * k;

  CountReal::counter().reset();
  kernels::standard_volume_element<CountReal>(n1, 10.0, 1e-8, h.data(), hu.data(), hv.data(),
                                              yeta.data(), xeta.data(), yxi.data(), xxi.data(),
                                              deriv.data(), scratch.data(),
                                              scratch.data() + 3 * np, out_h.data(),
                                              out_hu.data(), out_hv.data());
  evals_std = CountReal::counter().flux_evals * k;
  flops_std = CountReal::counter().flops() * k;
  CountReal::counter().reset();
}

/// Bytes the volume kernel moves through memory: 3 state + 4 metric fields
/// read, 3 residual fields written, plus the operator matrix.
inline std::uint64_t kernel_bytes_rw(int degree, long k) {
  const std::uint64_t np = static_cast<std::uint64_t>(degree + 1) * (degree + 1);
  const std::uint64_t reads = (3 + 4) * np * k + np;
  const std::uint64_t writes = 3 * np * k;
  return (reads + writes) * sizeof(double);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

/// Bulk-copy bandwidth baseline: a buffer of half the kernel's byte traffic
/// copied end to end reads and writes every entry once.
inline double memcopy_baseline(std::uint64_t bytes_rw, int repetitions, double& t_out) {
  const size_t n = bytes_rw / 2 / sizeof(double);
  std::vector<double> src(n, 1.0), dst(n, 0.0);
  std::vector<double> times;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    std::memcpy(dst.data(), src.data(), n * sizeof(double));
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
    if (dst[n / 2] < 0) throw SwdgError("unreachable");
  }
  t_out = median(times);
  return static_cast<double>(bytes_rw) / t_out;
}

inline double effective_bandwidth(std::uint64_t bytes_rw, double t) {
  return static_cast<double>(bytes_rw) / t;
}

/// Performance bound if the kernel streamed its traffic at copy speed.
inline double memcopy_roofline(std::uint64_t flops, std::uint64_t bytes_rw, double bw_memcopy) {
  return static_cast<double>(flops) / static_cast<double>(bytes_rw) * bw_memcopy;
}

/// Shared-memory roofline in FLOPS from device parameters; kept for ports
/// with a real on-chip memory hierarchy (unused on the CPU harness, which
/// substitutes a configured compute ceiling).
inline double shared_memory_roofline(double cores, double simd_lanes, double word_bytes,
                                     double clock_hz, double flops_per_block,
                                     double shared_bytes_per_block) {
  const double shared_bw = cores * simd_lanes * word_bytes * clock_hz;
  return shared_bw * flops_per_block / shared_bytes_per_block;
}

struct BenchOptions {
  int repetitions = 200;
  double compute_ceiling_gflops = 50.0;  // combined-roofline compute cap
};

inline BenchRecord time_kernels(int degree, long k, const BenchOptions& opt = {}) {
  BenchRecord rec;
  rec.degree = degree;
  rec.k_elements = k;
  rec.dofs = 3 * k * static_cast<long>(degree + 1) * (degree + 1);
  count_ops(degree, k, rec.flux_evals_split, rec.flux_evals_standard, rec.flops_split,
            rec.flops_standard);

  const Operators1D ops = make_operators(degree);
  KernelBuffers b;
  b.init(degree, k);
  std::vector<double> ts, tstd;
  for (int r = 0; r < opt.repetitions; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    run_split_kernel(b, ops, 9.81);
    const auto t1 = std::chrono::steady_clock::now();
    run_standard_kernel(b, ops, 9.81);
    const auto t2 = std::chrono::steady_clock::now();
    ts.push_back(std::chrono::duration<double>(t1 - t0).count());
    tstd.push_back(std::chrono::duration<double>(t2 - t1).count());
  }
  rec.t_split = median(ts);
  rec.t_standard = median(tstd);
  rec.t_split_mean = mean(ts);
  rec.t_standard_mean = mean(tstd);

  rec.bytes_rw = kernel_bytes_rw(degree, k);
  rec.bw_memcopy = memcopy_baseline(rec.bytes_rw, std::max(5, opt.repetitions / 4), rec.t_memcopy);
  rec.bw_effective = effective_bandwidth(rec.bytes_rw, rec.t_split);
  rec.roofline_memcopy = memcopy_roofline(rec.flops_split, rec.bytes_rw, rec.bw_memcopy);
  rec.roofline_combined = std::min(rec.roofline_memcopy, opt.compute_ceiling_gflops * 1e9);
  const double mdof = rec.dofs / 1e6;
  rec.us_per_mdof_split = rec.t_split * 1e6 / mdof;
  rec.us_per_mdof_standard = rec.t_standard * 1e6 / mdof;
  rec.us_per_mdof_memcopy = rec.t_memcopy * 1e6 / mdof;
  return rec;
}

/// Element count that fills the memory budget at this degree, mirroring the
/// fixed-load protocol (per-element footprint = the 10 nodal fields).
inline long elements_for_budget(int degree, std::uint64_t budget_bytes) {
  const std::uint64_t per_elem = 10ull * (degree + 1) * (degree + 1) * sizeof(double);
  return std::max<long>(1, static_cast<long>(budget_bytes / per_elem));
}

inline std::string table_header() {
  return "N;K;DOFs;evals_split;evals_std;flops_split;flops_std;t_split;t_std;t_memcpy;bw_eff;"
         "roofline";
}

inline std::string table_row(const BenchRecord& r) {
  std::ostringstream os;
  os.precision(6);
  os << r.degree << ';' << r.k_elements << ';' << r.dofs << ';' << r.flux_evals_split << ';'
     << r.flux_evals_standard << ';' << r.flops_split << ';' << r.flops_standard << ';'
     << std::scientific << r.t_split << ';' << r.t_standard << ';' << r.t_memcopy << ';'
     << r.bw_effective << ';' << r.roofline_combined;
  return os.str();
}

}  // namespace bench
}  // namespace swdg
