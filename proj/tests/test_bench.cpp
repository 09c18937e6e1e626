#include <catch_amalgamated.hpp>

#include <sstream>

#include "swdg/bench.hpp"

using namespace swdg;

TEST_CASE("flux evaluation counters match the closed forms", "[bench]") {
  for (int n : {1, 2, 3, 7, 15}) {
    std::uint64_t es, ed, fs, fd;
    bench::count_ops(n, 1, es, ed, fs, fd);
    const std::uint64_t n1 = n + 1;
    CHECK(es == 2 * n1 * n1 * n1);
    CHECK(ed == 2 * n1 * n1);
    CHECK(fs > fd);
  }
  SECTION("N=3, K=1: 128 vs 32") {
    std::uint64_t es, ed, fs, fd;
    bench::count_ops(3, 1, es, ed, fs, fd);
    CHECK(es == 128);
    CHECK(ed == 32);
  }
  SECTION("split/standard evaluation ratio is N+1") {
    CHECK(bench::closed_form_split_evals(15, 1) / bench::closed_form_standard_evals(15, 1) == 16);
  }
}

TEST_CASE("instrumented FLOP ratio lands in the expected window", "[bench]") {
  std::uint64_t es, ed, fs, fd;
  bench::count_ops(15, 1, es, ed, fs, fd);
  const double ratio = static_cast<double>(fs) / static_cast<double>(fd);
  CHECK(ratio >= 4.0);
  CHECK(ratio <= 8.0);
}

TEST_CASE("kernel outputs agree between counting and plain passes", "[bench]") {
  // the counting scalar must not change the arithmetic
  const int degree = 3;
  const Operators1D ops = make_operators(degree);
  bench::KernelBuffers b;
  b.init(degree, 4);
  bench::run_split_kernel(b, ops, 9.81);
  const std::vector<double> plain = b.out_hu;

  const int np = (degree + 1) * (degree + 1);
  std::vector<bench::CountReal> h(b.h.begin(), b.h.end()), hu(b.hu.begin(), b.hu.end()),
      hv(b.hv.begin(), b.hv.end()), ye(b.yeta.begin(), b.yeta.end()),
      xe(b.xeta.begin(), b.xeta.end()), yx(b.yxi.begin(), b.yxi.end()),
      xx(b.xxi.begin(), b.xxi.end()), dt(ops.deriv_modified.begin(), ops.deriv_modified.end());
  std::vector<bench::CountReal> oh(4 * np), ohu(4 * np), ohv(4 * np), scratch(2 * np);
  for (int e = 0; e < 4; ++e)
    kernels::split_volume_element<bench::CountReal>(
        degree + 1, 9.81, 1e-8, h.data() + e * np, hu.data() + e * np, hv.data() + e * np,
        ye.data() + e * np, xe.data() + e * np, yx.data() + e * np, xx.data() + e * np,
        dt.data(), scratch.data(), scratch.data() + np, oh.data() + e * np, ohu.data() + e * np,
        ohv.data() + e * np);
  for (int k = 0; k < 4 * np; ++k) CHECK(ohu[k].v == plain[k]);
}

TEST_CASE("timing record and bandwidth formulas", "[bench]") {
  SECTION("dofs and byte counts") {
    bench::BenchOptions opt;
    opt.repetitions = 3;
    const bench::BenchRecord r = bench::time_kernels(3, 32, opt);
    CHECK(r.dofs == 3 * 32 * 16);
    CHECK(r.flux_evals_split == bench::closed_form_split_evals(3, 32));
    CHECK(r.t_split > 0.0);
    CHECK(r.bw_effective > 0.0);
    CHECK(r.roofline_combined <= opt.compute_ceiling_gflops * 1e9);
  }
  SECTION("effective bandwidth doubles when time halves") {
    CHECK(bench::effective_bandwidth(1000, 0.5) == Catch::Approx(2000.0));
    CHECK(bench::effective_bandwidth(1000, 0.25) == Catch::Approx(4000.0));
  }
  SECTION("kernel at memcopy speed hits its own GFLOPS as the roofline") {
    const std::uint64_t flops = 5000, bytes = 4000;
    const double bw = 1e9;
    const double gflops_at_copy_speed = flops / (bytes / bw);
    CHECK(bench::memcopy_roofline(flops, bytes, bw) ==
          Catch::Approx(gflops_at_copy_speed).margin(1e-6));
  }
  SECTION("shared-memory roofline formula") {
    // device-parameter form: bandwidth = cores x lanes x word x clock
    const double roof = bench::shared_memory_roofline(20, 32, 4, 1.607e9, 100, 50);
    CHECK(roof == Catch::Approx(20 * 32 * 4 * 1.607e9 * 2.0));
  }
  SECTION("doubling K at most doubles the time, loosely") {
    bench::BenchOptions opt;
    opt.repetitions = 25;
    const bench::BenchRecord r1 = bench::time_kernels(4, 256, opt);
    const bench::BenchRecord r2 = bench::time_kernels(4, 512, opt);
    CHECK(r2.t_split <= 2.5 * r1.t_split);
  }
}

TEST_CASE("budget table", "[bench]") {
  CHECK(bench::elements_for_budget(3, 10ull * 16 * sizeof(double) * 100) == 100);
  std::ostringstream os;
  os << bench::table_header();
  const std::string header = os.str();
  CHECK(header.find("evals_split") != std::string::npos);
  CHECK(header.find("roofline") != std::string::npos);
  bench::BenchOptions opt;
  opt.repetitions = 2;
  const std::string row = bench::table_row(bench::time_kernels(2, 8, opt));
  // column count matches the header
  const auto count = [](const std::string& s) {
    return std::count(s.begin(), s.end(), ';');
  };
  CHECK(count(row) == count(header));
}
