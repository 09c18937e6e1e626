// swdg: entropy-stable DG shallow water solver with shock capturing,
// wet/dry handling, and a volume-kernel performance harness.
//
// Subcommands:
//   run       advance a built-in scenario (config file and/or flag overrides)
//   bench     volume-kernel operation counts, timings, and roofline table
//   validate  run the acceptance suite (all criteria or a named one)
//
// Exit codes: 0 success, 1 criterion failure, 2 configuration error,
// 3 numerical abort.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swdg/bench.hpp"
#include "swdg/config.hpp"
#include "swdg/driver.hpp"
#include "swdg/validate.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& scenario_id, int degree, int kx,
            int ky, double final_time, double cfl, const std::string& mode, bool no_limiter,
            bool no_viscosity, const std::string& out_dir, double snapshot_dt, bool dump_mesh,
            const std::string& slice_spec) {
  swdg::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = swdg::parse_config_file(config_path);
  } else if (!scenario_id.empty()) {
    cfg = swdg::make_scenario(scenario_id).config;
  } else {
    std::cerr << "run: need --config or --scenario\n";
    return 2;
  }
  if (degree > 0) cfg.degree = degree;
  if (kx > 0) cfg.kx = kx;
  if (ky > 0) cfg.ky = ky;
  if (final_time > 0.0) cfg.final_time = final_time;
  if (cfl > 0.0) cfg.cfl = cfl;
  if (mode == "es") cfg.mode = swdg::SchemeMode::es;
  else if (mode == "standard") cfg.mode = swdg::SchemeMode::standard;
  else if (!mode.empty()) {
    std::cerr << "run: unknown mode '" << mode << "'\n";
    return 2;
  }
  if (no_limiter) cfg.limiter_enabled = false;
  if (no_viscosity) cfg.visc.enabled = false;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (snapshot_dt > 0.0) cfg.snapshot_dt = snapshot_dt;
  if (dump_mesh) cfg.dump_mesh = true;
  if (cfg.degree < 2) cfg.visc.enabled = false;
  swdg::validate_config(cfg);

  swdg::RunOptions opt;
  opt.write_files = true;
  opt.keep_series = false;

  const swdg::RunResult out = swdg::run_simulation(cfg, opt);
  std::printf("completed scenario %s: t=%.6g steps=%ld\n", cfg.scenario.c_str(), out.t,
              out.steps);

  if (!slice_spec.empty()) {
    const auto eq = slice_spec.find('=');
    if (eq == std::string::npos || (slice_spec[0] != 'x' && slice_spec[0] != 'y')) {
      std::cerr << "run: --slice expects x=<val> or y=<val>\n";
      return 2;
    }
    const swdg::Scenario sc = swdg::make_scenario(cfg.scenario);
    swdg::Mesh mesh = swdg::build_mesh(cfg);
    swdg::sample_bathymetry(mesh, sc.bathymetry);
    swdg::io::write_slice(cfg.out_dir + "/slice.txt", out.state, mesh, out.t, slice_spec[0],
                          std::stod(slice_spec.substr(eq + 1)), {}, swdg::config_hash(cfg));
    std::printf("wrote %s/slice.txt\n", cfg.out_dir.c_str());
  }
  return 0;
}

int cmd_bench(int degree, long k_side, int nmax, double budget_mb, int reps,
              double ceiling_gflops) {
  swdg::bench::BenchOptions opt;
  opt.repetitions = reps;
  opt.compute_ceiling_gflops = ceiling_gflops;
  std::cout << swdg::bench::table_header() << "\n";
  if (degree > 0) {
    const long k = k_side > 0 ? k_side * k_side : 64;
    const swdg::bench::BenchRecord rec = swdg::bench::time_kernels(degree, k, opt);
    std::cout << swdg::bench::table_row(rec) << "\n";
    std::printf("# split %llu flux evaluations vs standard %llu (K=%ld)\n",
                static_cast<unsigned long long>(rec.flux_evals_split),
                static_cast<unsigned long long>(rec.flux_evals_standard), k);
    return 0;
  }
  const std::uint64_t budget = static_cast<std::uint64_t>(budget_mb * (1ull << 20));
  for (int n = 1; n <= nmax; ++n) {
    const long k = swdg::bench::elements_for_budget(n, budget);
    std::cout << swdg::bench::table_row(swdg::bench::time_kernels(n, k, opt)) << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& suite) {
  int failures = 0;
  for (const auto& [name, fn] : swdg::validate::registry()) {
    if (!suite.empty() && suite != name) continue;
    const swdg::validate::CriterionResult res = fn();
    std::printf("[%s] %2d %s — %s\n", res.pass ? "PASS" : "FAIL", res.id, res.name.c_str(),
                res.detail.c_str());
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }
  if (!suite.empty()) {
    bool known = false;
    for (const auto& [name, fn] : swdg::validate::registry()) known = known || name == suite;
    if (!known) {
      std::cerr << "validate: unknown suite '" << suite << "'\n";
      return 2;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-stable DG shallow water solver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "advance a scenario");
  std::string config_path, scenario_id, mode, out_dir, slice_spec;
  int degree = 0, kx = 0, ky = 0;
  double final_time = 0.0, cfl = 0.0, snapshot_dt = 0.0;
  bool no_limiter = false, no_viscosity = false, dump_mesh = false;
  run->add_option("--config", config_path, "config file (sectioned key=value)");
  run->add_option("--scenario", scenario_id, "built-in scenario id");
  run->add_option("--n", degree, "polynomial degree override");
  run->add_option("--kx", kx, "elements in x");
  run->add_option("--ky", ky, "elements in y");
  run->add_option("--t", final_time, "final time override");
  run->add_option("--cfl", cfl, "CFL number override");
  run->add_option("--mode", mode, "es | standard");
  run->add_flag("--no-limiter", no_limiter, "disable the positivity limiter");
  run->add_flag("--no-viscosity", no_viscosity, "disable shock capturing");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--snapshot-dt", snapshot_dt, "field snapshot cadence");
  run->add_flag("--dump-mesh", dump_mesh, "write the mesh table");
  run->add_option("--slice", slice_spec, "write a final slice, e.g. y=0");

  auto* bench = app.add_subcommand("bench", "volume-kernel benchmark");
  int bench_n = 0, bench_nmax = 15, bench_reps = 200;
  long bench_k = 0;
  double budget_mb = 64.0, ceiling = 50.0;
  bench->add_option("--n", bench_n, "single polynomial degree");
  bench->add_option("--k", bench_k, "elements per direction (total K = k*k)");
  bench->add_option("--nmax", bench_nmax, "table for N = 1..nmax");
  bench->add_option("--budget", budget_mb, "memory budget in MiB for the table");
  bench->add_option("--reps", bench_reps, "timing repetitions");
  bench->add_option("--peak-gflops", ceiling, "compute ceiling for the combined roofline");

  auto* val = app.add_subcommand("validate", "acceptance suite");
  std::string suite;
  val->add_option("--suite", suite, "run one named criterion suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, scenario_id, degree, kx, ky, final_time, cfl, mode, no_limiter,
                     no_viscosity, out_dir, snapshot_dt, dump_mesh, slice_spec);
    if (bench->parsed())
      return cmd_bench(bench_n, bench_k, bench_nmax, budget_mb, bench_reps, ceiling);
    if (val->parsed()) return cmd_validate(suite);
  } catch (const swdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const swdg::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
