#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "swdg/fluxes.hpp"

using namespace swdg;

namespace {
PhysicsParams params(double g) {
  PhysicsParams p;
  p.g = g;
  return p;
}

Vec3 random_state(std::mt19937& rng, double dry_prob) {
  std::uniform_real_distribution<double> dh(0.0, 3.0), dv(-3.0, 3.0), d01(0.0, 1.0);
  if (d01(rng) < dry_prob) return {0.0, 0.0, 0.0};
  const double h = dh(rng) + 0.05;
  return {h, h * dv(rng), h * dv(rng)};
}
}  // namespace

TEST_CASE("two-point volume flux", "[fluxes]") {
  const PhysicsParams p = params(10.0);
  SECTION("consistency on identical states") {
    const Vec3 w{1.0, 2.0, 0.0};  // u = 2
    Vec3 f, g;
    fluxes::volume_flux_sharp(w, w, p, f, g);
    CHECK(f.h == Catch::Approx(2.0));
    CHECK(f.hu == Catch::Approx(9.0));  // h u^2 + g h^2 / 2 = 4 + 5
    CHECK(f.hv == Catch::Approx(0.0));
  }
  SECTION("symmetry") {
    std::mt19937 rng(1);
    for (int k = 0; k < 200; ++k) {
      const Vec3 a = random_state(rng, 0.1), b = random_state(rng, 0.1);
      Vec3 f1, g1, f2, g2;
      fluxes::volume_flux_sharp(a, b, p, f1, g1);
      fluxes::volume_flux_sharp(b, a, p, f2, g2);
      CHECK(f1.h == f2.h);
      CHECK(f1.hu == f2.hu);
      CHECK(g1.hv == g2.hv);
    }
  }
  SECTION("pressure-term average, hand value") {
    const PhysicsParams p1 = params(1.0);
    Vec3 f, g;
    fluxes::volume_flux_sharp({1.0, 0.0, 0.0}, {4.0, 0.0, 0.0}, p1, f, g);
    CHECK(f.hu == Catch::Approx(2.0).margin(1e-14));  // g<h>^2 - g<h^2>/2 = 6.25 - 4.25
    CHECK(g.hv == Catch::Approx(2.0).margin(1e-14));
  }
}

TEST_CASE("contravariant volume flux", "[fluxes]") {
  const Vec3 f{1.0, 2.0, 3.0}, g{4.0, 5.0, 6.0};
  Vec3 ft, gt;
  SECTION("cartesian metric picks y_eta F") {
    fluxes::contravariant_volume_flux(f, g, 0.4, 0.0, 0.0, 0.5, ft, gt);
    CHECK(ft.h == Catch::Approx(0.4 * 1.0));
    CHECK(ft.hu == Catch::Approx(0.4 * 2.0));
    CHECK(gt.h == Catch::Approx(0.5 * 4.0));
  }
  SECTION("zero metrics give zero") {
    fluxes::contravariant_volume_flux(f, g, 0.0, 0.0, 0.0, 0.0, ft, gt);
    CHECK(ft.hu == 0.0);
    CHECK(gt.hv == 0.0);
  }
  SECTION("termwise recomputation on random metrics") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> dm(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const double ye = dm(rng), xe = dm(rng), yx = dm(rng), xx = dm(rng);
      fluxes::contravariant_volume_flux(f, g, ye, xe, yx, xx, ft, gt);
      CHECK(ft.hv == Catch::Approx(ye * f.hv - xe * g.hv).margin(1e-15));
      CHECK(gt.hv == Catch::Approx(-yx * f.hv + xx * g.hv).margin(1e-15));
    }
  }
}

TEST_CASE("entropy conserving interface flux", "[fluxes]") {
  const PhysicsParams p = params(1.0);
  SECTION("consistency") {
    const Vec3 w{2.0, 1.0, 3.0};
    const Vec3 f = fluxes::ec_surface_flux_x(w, w, p);
    Vec3 fx, fy;
    phys::physical_flux(w, p, fx, fy);
    CHECK(f.h == Catch::Approx(fx.h).margin(1e-14));
    CHECK(f.hu == Catch::Approx(fx.hu).margin(1e-14));
    CHECK(f.hv == Catch::Approx(fx.hv).margin(1e-14));
  }
  SECTION("Tadmor condition, hand pair") {
    const Vec3 wm{1.0, 1.0, 0.0}, wp{4.0, -2.0, 0.0};
    const Vec3 f = fluxes::ec_surface_flux_x(wm, wp, p);
    const Vec3 jq = phys::entropy_vars(wp, 0.0, p) - phys::entropy_vars(wm, 0.0, p);
    double um, vm, up, vp;
    phys::velocity(wm, p, um, vm);
    phys::velocity(wp, p, up, vp);
    const double jpsi = 0.5 * p.g * (wp.h * wp.h * up - wm.h * wm.h * um);
    CHECK(std::abs(jq.h * f.h + jq.hu * f.hu + jq.hv * f.hv - jpsi) < 1e-12);
  }
  SECTION("argument-swap symmetry") {
    std::mt19937 rng(3);
    for (int k = 0; k < 100; ++k) {
      const Vec3 a = random_state(rng, 0.0), b = random_state(rng, 0.0);
      const Vec3 f1 = fluxes::ec_surface_flux_x(a, b, p);
      const Vec3 f2 = fluxes::ec_surface_flux_x(b, a, p);
      CHECK(f1.hu == f2.hu);
    }
  }
}

TEST_CASE("entropy stable normal flux", "[fluxes]") {
  const PhysicsParams p = params(9.81);
  SECTION("zero jump reduces to the EC flux") {
    const Vec3 w{1.5, 0.6, -0.9};
    const Vec3 es = fluxes::es_surface_flux_normal(w, w, 0.2, 0.2, 1.0, 0.0, p);
    const Vec3 ec = fluxes::ec_surface_flux_x(w, w, p);
    CHECK(es.h == Catch::Approx(ec.h).margin(1e-14));
    CHECK(es.hu == Catch::Approx(ec.hu).margin(1e-14));
    CHECK(es.hv == Catch::Approx(ec.hv).margin(1e-14));
  }
  SECTION("dry-side sign structure of B") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dv(-3.0, 3.0), dh(0.1, 2.0);
    for (int k = 0; k < 500; ++k) {
      const double hp = dh(rng), up = dv(rng);
      const Vec3 wm{0.0, 0.0, 0.0}, wp{hp, hp * up, 0.0};
      const double cavg = 0.5 * std::sqrt(p.g * hp);
      const double uavg = 0.5 * up;
      const double b = std::abs(uavg + cavg) - std::abs(uavg - cavg);
      CHECK(b * up >= 0.0);                      // sign(B) = sign(<u_n>)
      CHECK(cavg * b * up >= 0.0);               // the dry-side cross term is nonnegative
    }
  }
  SECTION("compact mass flux equals the matrix form") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> da(0.0, 2.0 * M_PI);
    for (int k = 0; k < 20000; ++k) {
      const Vec3 wm = random_state(rng, 0.15), wp = random_state(rng, 0.15);
      const double a = da(rng), nx = std::cos(a), ny = std::sin(a);
      const Vec3 es = fluxes::es_surface_flux_normal(wm, wp, 0.1, 0.1, nx, ny, p);
      const double compact = fluxes::h_flux_compact(wm, wp, 0.1, 0.1, nx, ny, p);
      CHECK(std::abs(es.h - compact) < 1e-12);
    }
  }
  SECTION("hand value for a dry-right pair at rest") {
    const PhysicsParams p10 = params(10.0);
    const Vec3 wm{1.0, 0.0, 0.0}, wp{0.0, 0.0, 0.0};
    const double f1 = fluxes::h_flux_compact(wm, wp, 0.0, 0.0, 1.0, 0.0, p10);
    CHECK(f1 == Catch::Approx(std::sqrt(10.0) / 4.0).margin(1e-14));
  }
  SECTION("bounds on A and B") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> da(0.0, 2.0 * M_PI);
    for (int k = 0; k < 2000; ++k) {
      const Vec3 wm = random_state(rng, 0.1), wp = random_state(rng, 0.1);
      const double ang = da(rng), nx = std::cos(ang), ny = std::sin(ang);
      double um, vm, up, vp, unm, utm, unp, utp;
      phys::velocity(wm, p, um, vm);
      phys::velocity(wp, p, up, vp);
      phys::rotate(um, vm, nx, ny, unm, utm);
      phys::rotate(up, vp, nx, ny, unp, utp);
      const double uavg = 0.5 * (unm + unp);
      const double cavg = 0.5 * (std::sqrt(p.g * wm.h) + std::sqrt(p.g * wp.h));
      const double a = std::abs(uavg + cavg) + std::abs(uavg - cavg);
      const double b = std::abs(uavg + cavg) - std::abs(uavg - cavg);
      const double lmax = phys::max_wave_speed(wm, wp, nx, ny, p);
      CHECK(a >= 2.0 * std::abs(uavg) - 1e-14);
      CHECK(std::abs(b) <= lmax + 1e-12);
      CHECK(b * uavg >= 0.0);
    }
  }
  SECTION("dissipation operator is positive semidefinite") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dv(-3.0, 3.0), dh(0.0, 2.0), dx(-5.0, 5.0);
    for (int k = 0; k < 2000; ++k) {
      const fluxes::DissipationOperator d = fluxes::make_dissipation(
          dh(rng), dv(rng), dv(rng), 0.5 * std::sqrt(9.81 * dh(rng)), 9.81);
      for (double lam : d.lam) CHECK(lam >= 0.0);
      const std::array<double, 3> x = {dx(rng), dx(rng), dx(rng)};
      CHECK(fluxes::dissipation_quadratic_form(d, x) >= 0.0);
      // the assembled matrix route agrees with the factored form
      const std::array<double, 3> y = fluxes::apply_dissipation(d, x);
      const double quad = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
      CHECK(quad == Catch::Approx(fluxes::dissipation_quadratic_form(d, x)).margin(1e-10));
    }
  }
  SECTION("non-unit normal rejected") {
    CHECK_THROWS_AS(
        fluxes::es_surface_flux_normal({1, 0, 0}, {1, 0, 0}, 0, 0, 0.9, 0.0, params(9.81)),
        SwdgError);
  }
}

TEST_CASE("local Lax-Friedrichs flux", "[fluxes]") {
  const PhysicsParams p = params(10.0);
  SECTION("zero jump is the pointwise normal flux") {
    const Vec3 w{1.2, 0.5, -0.3};
    const Vec3 f = fluxes::llf_surface_flux(w, w, 0.0, 1.0, p);
    Vec3 fx, fy;
    phys::physical_flux(w, p, fx, fy);
    CHECK(f.h == Catch::Approx(fy.h).margin(1e-14));
    CHECK(f.hu == Catch::Approx(fy.hu).margin(1e-14));
    CHECK(f.hv == Catch::Approx(fy.hv).margin(1e-14));
  }
  SECTION("rest-state hand value") {
    const Vec3 wm{1.0, 0.0, 0.0}, wp{0.1, 0.0, 0.0};
    const Vec3 f = fluxes::llf_surface_flux(wm, wp, 1.0, 0.0, p);
    CHECK(f.h == Catch::Approx(0.45 * std::sqrt(10.0)).margin(1e-14));
  }
  SECTION("upwind-consistent dissipation sign for co-moving states") {
    const Vec3 wm{1.0, 3.0, 0.0}, wp{0.8, 2.6, 0.0};  // both supersonic to the right
    const Vec3 f = fluxes::llf_surface_flux(wm, wp, 1.0, 0.0, p);
    Vec3 fxm, fym, fxp, fyp;
    phys::physical_flux(wm, p, fxm, fym);
    phys::physical_flux(wp, p, fxp, fyp);
    const Vec3 central = 0.5 * (fxm + fxp);
    CHECK(f.h > central.h);  // jump(h) < 0 and -lambda/2 * jump adds mass flux
  }
}

TEST_CASE("EC shuffle property over random pairs", "[fluxes]") {
  std::mt19937 rng(13);
  const PhysicsParams p = params(9.81);
  double worst_f = 0.0, worst_g = 0.0;
  for (int k = 0; k < 50000; ++k) {
    const Vec3 a = random_state(rng, 0.0), b = random_state(rng, 0.0);
    const Vec3 jq = phys::entropy_vars(b, 0.0, p) - phys::entropy_vars(a, 0.0, p);
    double ua, va, ub, vb;
    phys::velocity(a, p, ua, va);
    phys::velocity(b, p, ub, vb);
    const Vec3 fec = fluxes::ec_surface_flux_x(a, b, p);
    worst_f = std::max(worst_f, std::abs(jq.h * fec.h + jq.hu * fec.hu + jq.hv * fec.hv -
                                         0.5 * p.g * (b.h * b.h * ub - a.h * a.h * ua)));
    const Vec3 gec = fluxes::ec_surface_flux_y(a, b, p);
    worst_g = std::max(worst_g, std::abs(jq.h * gec.h + jq.hu * gec.hu + jq.hv * gec.hv -
                                         0.5 * p.g * (b.h * b.h * vb - a.h * a.h * va)));
  }
  CHECK(worst_f < 1e-12);
  CHECK(worst_g < 1e-12);
}
