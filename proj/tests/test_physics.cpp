#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "swdg/physics.hpp"

using namespace swdg;

namespace {
PhysicsParams params(double g) {
  PhysicsParams p;
  p.g = g;
  return p;
}
}  // namespace

TEST_CASE("velocity recovery", "[physics]") {
  const PhysicsParams p = params(9.81);
  double u, v;
  phys::velocity({1.0, 2.0, 3.0}, p, u, v);
  CHECK(u == 2.0);
  CHECK(v == 3.0);
  phys::velocity({0.0, 0.0, 0.0}, p, u, v);
  CHECK(u == 0.0);
  CHECK(v == 0.0);
  phys::velocity({1e-9, 1e-9, 0.0}, p, u, v);  // below the 1e-8 floor
  CHECK(u == 0.0);
  CHECK(v == 0.0);
}

TEST_CASE("physical fluxes", "[physics]") {
  Vec3 fx, fy;
  phys::physical_flux({1.0, 0.0, 0.0}, params(9.81), fx, fy);
  CHECK(fx.h == 0.0);
  CHECK(fx.hu == Catch::Approx(4.905).margin(1e-14));
  CHECK(fx.hv == 0.0);
  CHECK(fy.hv == Catch::Approx(4.905).margin(1e-14));

  phys::physical_flux({2.0, 6.0, 0.0}, params(10.0), fx, fy);  // u = 3
  CHECK(fx.h == Catch::Approx(6.0));
  CHECK(fx.hu == Catch::Approx(38.0));
  CHECK(fx.hv == 0.0);

  phys::physical_flux({0.0, 0.0, 0.0}, params(10.0), fx, fy);
  CHECK(fx.hu == 0.0);
  CHECK(fy.hv == 0.0);
}

TEST_CASE("entropy function and fluxes", "[physics]") {
  double e, ef, eg;
  phys::entropy_and_flux({1.0, 0.0, 0.0}, 0.0, params(9.81), e, ef, eg);
  CHECK(e == Catch::Approx(4.905).margin(1e-14));
  CHECK(ef == 0.0);
  CHECK(eg == 0.0);

  phys::entropy_and_flux({1.0, 1.0, 0.0}, 1.0, params(10.0), e, ef, eg);
  CHECK(e == Catch::Approx(15.5).margin(1e-13));
  CHECK(ef == Catch::Approx(20.5).margin(1e-13));

  phys::entropy_and_flux({0.0, 0.0, 0.0}, 3.7, params(10.0), e, ef, eg);
  CHECK(e == 0.0);
  CHECK(ef == 0.0);
}

TEST_CASE("entropy variables", "[physics]") {
  Vec3 q = phys::entropy_vars({1.0, 0.0, 0.0}, 0.0, params(9.81));
  CHECK(q.h == Catch::Approx(9.81));
  CHECK(q.hu == 0.0);

  q = phys::entropy_vars({2.0, 6.0, 8.0}, 1.0, params(10.0));  // u=3, v=4
  CHECK(q.h == Catch::Approx(17.5));
  CHECK(q.hu == Catch::Approx(3.0));
  CHECK(q.hv == Catch::Approx(4.0));

  // lake at rest: q is constant wherever h + b is
  const double c = 1.3;
  for (double b : {0.0, 0.4, 0.9}) {
    q = phys::entropy_vars({c - b, 0.0, 0.0}, b, params(9.81));
    CHECK(q.h == Catch::Approx(9.81 * c).margin(1e-13));
  }
}

TEST_CASE("entropy pair consistency via the flux potential", "[physics]") {
  // q . f - F = g h^2 u / 2 for wet states
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dh(0.1, 4.0), du(-3.0, 3.0), db(-1.0, 1.0);
  const PhysicsParams p = params(9.81);
  for (int k = 0; k < 2000; ++k) {
    const double h = dh(rng), u = du(rng), v = du(rng), b = db(rng);
    const Vec3 w{h, h * u, h * v};
    Vec3 fx, fy;
    phys::physical_flux(w, p, fx, fy);
    double e, ef, eg;
    phys::entropy_and_flux(w, b, p, e, ef, eg);
    const Vec3 q = phys::entropy_vars(w, b, p);
    const double psi = 0.5 * p.g * h * h * u;
    // the b-dependent parts of q.f and F cancel, leaving the flat potential
    const double lhs = q.h * fx.h + q.hu * fx.hu + q.hv * fx.hv - ef;
    CHECK(std::abs(lhs - psi) < 1e-12 * std::max(1.0, std::abs(psi)));
  }
}

TEST_CASE("rotation", "[physics]") {
  double un, ut, u, v;
  phys::rotate(2.0, 3.0, 1.0, 0.0, un, ut);
  CHECK(un == 2.0);
  CHECK(ut == 3.0);
  phys::rotate(2.0, 3.0, 0.0, 1.0, un, ut);
  CHECK(un == 3.0);
  CHECK(ut == -2.0);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> da(0.0, 2.0 * M_PI), dv(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double a = da(rng), nx = std::cos(a), ny = std::sin(a);
    const double u0 = dv(rng), v0 = dv(rng);
    phys::rotate(u0, v0, nx, ny, un, ut);
    phys::unrotate(un, ut, nx, ny, u, v);
    CHECK(std::abs(u - u0) < 1e-14);
    CHECK(std::abs(v - v0) < 1e-14);
  }
  CHECK_THROWS_AS(phys::check_unit_normal(0.5, 0.0), SwdgError);
}

TEST_CASE("rotational invariance of the flux", "[physics]") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> da(0.0, 2.0 * M_PI), dh(0.1, 3.0), dv(-2.0, 2.0);
  const PhysicsParams p = params(9.81);
  for (int k = 0; k < 500; ++k) {
    const double a = da(rng), nx = std::cos(a), ny = std::sin(a);
    const double h = dh(rng), u = dv(rng), v = dv(rng);
    const Vec3 w{h, h * u, h * v};
    const Vec3 wr = phys::rotate_state(w, nx, ny);
    Vec3 fr, gr;
    phys::physical_flux(wr, p, fr, gr);
    const Vec3 back = phys::unrotate_state(fr, nx, ny);
    Vec3 fx, fy;
    phys::physical_flux(w, p, fx, fy);
    const Vec3 expect = nx * fx + ny * fy;
    CHECK(std::abs(back.h - expect.h) < 1e-12);
    CHECK(std::abs(back.hu - expect.hu) < 1e-12);
    CHECK(std::abs(back.hv - expect.hv) < 1e-12);
  }
}

TEST_CASE("max wave speed", "[physics]") {
  const PhysicsParams p1 = params(9.81);
  CHECK(phys::max_wave_speed({1, 0, 0}, {1, 0, 0}, 1, 0, p1) ==
        Catch::Approx(std::sqrt(9.81)).margin(1e-13));
  const PhysicsParams p2 = params(1.0);
  CHECK(phys::max_wave_speed({1, 2, 0}, {4, 0, 0}, 1, 0, p2) == Catch::Approx(3.0));
  CHECK(phys::max_wave_speed({0, 0, 0}, {0, 0, 0}, 1, 0, p1) == 0.0);
}

TEST_CASE("entropy Hessian is symmetric positive definite", "[physics]") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dh(0.3, 3.0), dv(-2.0, 2.0);
  const PhysicsParams p = params(9.81);
  const double step = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 w{dh(rng), 0.0, 0.0};
    Vec3 w0 = w;
    w0.hu = w.h * dv(rng);
    w0.hv = w.h * dv(rng);
    auto e = [&](double a, double b, double c) {
      return phys::entropy({w0.h + a, w0.hu + b, w0.hv + c}, 0.0, p);
    };
    double hess[3][3];
    const double base = e(0, 0, 0);
    const double d1[3] = {e(step, 0, 0), e(0, step, 0), e(0, 0, step)};
    const double m1[3] = {e(-step, 0, 0), e(0, -step, 0), e(0, 0, -step)};
    for (int i = 0; i < 3; ++i) hess[i][i] = (d1[i] - 2 * base + m1[i]) / (step * step);
    hess[0][1] = hess[1][0] =
        (e(step, step, 0) - e(step, -step, 0) - e(-step, step, 0) + e(-step, -step, 0)) /
        (4 * step * step);
    hess[0][2] = hess[2][0] =
        (e(step, 0, step) - e(step, 0, -step) - e(-step, 0, step) + e(-step, 0, -step)) /
        (4 * step * step);
    hess[1][2] = hess[2][1] =
        (e(0, step, step) - e(0, step, -step) - e(0, -step, step) + e(0, -step, -step)) /
        (4 * step * step);
    // positive definiteness via leading principal minors
    const double m11 = hess[0][0];
    const double m22 = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
    const double m33 = hess[0][0] * (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1]) -
                       hess[0][1] * (hess[1][0] * hess[2][2] - hess[1][2] * hess[2][0]) +
                       hess[0][2] * (hess[1][0] * hess[2][1] - hess[1][1] * hess[2][0]);
    CHECK(m11 > 0.0);
    CHECK(m22 > 0.0);
    CHECK(m33 > 0.0);
  }
}
