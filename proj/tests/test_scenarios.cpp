#include <catch_amalgamated.hpp>

#include <cmath>

#include "swdg/limiter.hpp"
#include "swdg/scenarios.hpp"

using namespace swdg;

TEST_CASE("catalogue constants", "[scenarios]") {
  SECTION("three-mound bathymetry peak") {
    const Scenario sc = make_scenario("three_mound");
    CHECK(sc.bathymetry(47.5, 15.0) == Catch::Approx(2.8).margin(1e-14));
    CHECK(sc.bathymetry(30.0, 22.5) == Catch::Approx(1.0).margin(1e-14));
    CHECK(sc.bathymetry(5.0, 5.0) == 0.0);
  }
  SECTION("oscillating lake initial transverse velocity") {
    const Scenario sc = make_scenario("oscillating_lake");
    const Vec3 w = sc.initial(0.0, 0.0);
    const double sigma_omega = 0.5 * std::sqrt(2.0 * 9.81 * 0.1);
    CHECK(w.hv / w.h == Catch::Approx(sigma_omega).margin(1e-12));
    CHECK(w.hu == 0.0);
    CHECK(sc.orbital_period == Catch::Approx(2.0 * M_PI / std::sqrt(1.962)).margin(1e-12));
  }
  SECTION("wet/dry dam break is dry downstream") {
    const Scenario sc = make_scenario("wetdry_dambreak");
    CHECK(sc.initial(5.0, 0.0).h == 0.0);
    CHECK(sc.initial(-5.0, 0.0).h == 10.0);
    CHECK(sc.config.phys.g == 9.81);
    CHECK(sc.config.visc.epsilon0 == 0.1);
  }
  SECTION("entropy glitch setup") {
    const Scenario sc = make_scenario("entropy_glitch");
    CHECK(sc.config.degree == 1);
    CHECK(sc.config.phys.g == 10.0);
    CHECK_FALSE(sc.config.visc.enabled);
    CHECK(sc.initial(-0.5, 0.0).h == 1.0);
    CHECK(sc.initial(0.5, 0.0).h == Catch::Approx(0.1));
  }
  SECTION("conical island: cone height and solitary wave") {
    const Scenario sc = make_scenario("conical_island");
    CHECK(sc.bathymetry(12.5, 15.0) == Catch::Approx(0.93).margin(1e-14));
    CHECK(sc.bathymetry(12.5, 15.0 + 3.6) == Catch::Approx(0.0).margin(1e-14));
    // wave crest at x = 2.5: eta = A/h0 and u = eta sqrt(g/h0)
    const Vec3 w = sc.initial(2.5, 5.0);
    const double eta = 0.064 / 0.32;
    CHECK(w.h == Catch::Approx(0.32 + eta).margin(1e-14));
    CHECK(w.hu / w.h == Catch::Approx(eta * std::sqrt(9.81 / 0.32)).margin(1e-12));
  }
  SECTION("parabolic dam variants") {
    const Scenario wet = make_scenario("parabolic_dam_wet");
    const Scenario dry = make_scenario("parabolic_dam_dry");
    CHECK(wet.initial(-1.0, 0.0).h == 10.0);
    CHECK(wet.initial(1.0, 0.0).h == 5.0);
    CHECK(dry.initial(1.0, 0.0).h == 0.0);
    CHECK(wet.config.final_time == 1.5);
    CHECK(dry.config.final_time == 1.0);
    CHECK(wet.config.phys.g == 1.0);
    CHECK(wet.config.mesh_kind == MeshKind::curved_dam);
    // the initial discontinuity follows the dam curve, not a vertical line:
    // x = 0 is downstream at y = 0 (dam at -1/4) but upstream at y = 4
    // (dam at 0.39)
    CHECK(dry.initial(0.0, 0.0).h == 0.0);
    CHECK(dry.initial(0.0, 4.0).h == 10.0);
  }
  SECTION("unknown id rejected") {
    CHECK_THROWS_AS(make_scenario("no_such_case"), SwdgError);
  }
}

TEST_CASE("initial states pass the limiter", "[scenarios]") {
  for (const std::string& id : scenario_ids()) {
    const Scenario sc = make_scenario(id);
    RunConfig cfg = sc.config;
    cfg.kx = std::min(cfg.kx, 12);
    cfg.ky = std::min(cfg.ky, 12);
    Mesh mesh = build_mesh(cfg);
    State s = initial_state(sc, mesh);
    CHECK(min_height(s) >= 0.0);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const Vec3 before = element_average(s, mesh, e);
      const LimiterReport rep = limit_element(s, mesh, e, cfg.phys, false);
      const Vec3 after = element_average(s, mesh, e);
      // clipping by max(0, .) keeps nodal h nonnegative, so theta stays 1
      CHECK(rep.theta == 1.0);
      CHECK(std::abs(after.h - before.h) <= 1e-14 * std::max(1.0, std::abs(before.h)));
    }
  }
}

TEST_CASE("every scenario advances a few steps at reduced size", "[scenarios]") {
  for (const std::string& id : scenario_ids()) {
    DYNAMIC_SECTION(id) {
      const Scenario sc = make_scenario(id);
      RunConfig cfg = sc.config;
      cfg.kx = std::max(2, cfg.kx / 8);
      cfg.ky = std::max(2, cfg.ky / 8);
      Mesh mesh = build_mesh(cfg);
      State s = initial_state(sc, mesh);
      TimeIntegrator integ(mesh, cfg);
      const double mass0 = total_mass(s, mesh);
      double t = 0.0;
      for (int k = 0; k < 5; ++k) {
        double dt = compute_dt(s, mesh, cfg.phys, cfg.cfl);
        int rej = 0;
        while (!integ.try_step(s, t, dt)) {
          dt *= 0.5;
          REQUIRE(++rej < 10);
        }
        t += dt;
      }
      CHECK(min_height(s) >= 0.0);
      CHECK(std::abs(total_mass(s, mesh) - mass0) <= 1e-12 * std::abs(mass0));
    }
  }
}

TEST_CASE("oscillating lake exact solution is periodic", "[scenarios]") {
  const Scenario sc = make_scenario("oscillating_lake");
  Vec3 w0, w1;
  const bool wet0 = sc.exact(0.3, -0.2, 0.0, 1e-3, w0);
  const bool wet1 = sc.exact(0.3, -0.2, sc.orbital_period, 1e-3, w1);
  CHECK(wet0 == wet1);
  CHECK(w0.h == Catch::Approx(w1.h).margin(1e-12));
  CHECK(w0.hv == Catch::Approx(w1.hv).margin(1e-12));
}
