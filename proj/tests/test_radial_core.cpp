#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "doctest.h"
#include "hartree/errors.hpp"
#include "hartree/quadrature.hpp"
#include "hartree/radial_core.hpp"

using namespace hartree;

namespace {

const double kPi = M_PI;
const double kS4 = 8.0 * kPi * kPi / 3.0;  // |S^4|

// adaptive 1-D oracle for radial integrals in R^5
template <class F>
double oracle_radial(F f, double a = 0.0, double b = INFINITY) {
  auto g = [&](double r) {
    double v = kS4 * std::pow(r, 4) * f(r);
    return std::isfinite(v) ? v : 0.0;
  };
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> es;
    double head = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, a + 5.0, 30, 1e-14);
    return head + es.integrate(g, a + 5.0, INFINITY);
  }
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 30, 1e-14);
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

GridPtr default_grid() { return RadialGrid::make(5, 400, 40.0, 1.02); }

RadialFn bubble_shape(const GridPtr& g, double d) {
  auto f = [d](double r) { return std::pow(d / (d * d + r * r), 1.5); };
  Tail t{3.0, std::pow(d, 1.5), f};
  return RadialFn::sample(g, f, t);
}

RadialFn bump(double delta, double amp = 1.0) {
  auto g = RadialGrid::make(5, 128, delta, 1.0);
  return RadialFn::sample(g, [=](double r) {
    double x = r / delta;
    return x < 1.0 ? amp * std::exp(-1.0 / (1.0 - x * x)) : 0.0;
  });
}

}  // namespace

TEST_CASE("grid volume and construction") {
  auto g = default_grid();
  double vol = 0.0;
  for (double w : g->weights()) vol += w;
  CHECK(rel(vol, kS4 * std::pow(40.0, 5) / 5.0) < 1e-8);
  CHECK(g->nodes().back() == 40.0);
  for (double w : g->weights()) CHECK(w > 0.0);

  auto coarse = RadialGrid::make(5, 16, 1.0, 1.0);
  CHECK(coarse->size() == 16);
  CHECK_THROWS_AS(RadialGrid::make(4, 400, 40.0, 1.02), ParameterError);
  CHECK_THROWS_AS(RadialGrid::make(5, 8, 40.0, 1.02), ParameterError);
  CHECK_THROWS_AS(RadialGrid::make(5, 400, -1.0, 1.02), ParameterError);
}

TEST_CASE("power moments are reproduced") {
  auto g = default_grid();
  for (int k = 0; k <= 5; ++k) {
    auto f = RadialFn::sample(g, [k](double r) { return std::pow(r, k); });
    double exact = kS4 * std::pow(40.0, 5 + k) / (5 + k);
    CHECK(rel(integrate(f), exact) < 1e-10);
  }
}

TEST_CASE("integrate against closed forms and oracle") {
  auto g = default_grid();
  auto gauss = RadialFn::sample(g, [](double r) { return std::exp(-r * r); });
  CHECK(rel(integrate(gauss), std::pow(kPi, 2.5)) < 1e-8);
  CHECK(integrate(RadialFn::zero(g)) == 0.0);

  auto p5 = [](double r) { return std::pow(1.0 + r * r, -5.0); };
  auto f = RadialFn::sample(g, p5, Tail{10.0, 1.0, p5});
  CHECK(rel(integrate(f), oracle_radial(p5)) < 1e-8);
  auto f_pow = f.with_tail(Tail::power(10.0, 1.0));
  CHECK(rel(integrate(f_pow), oracle_radial(p5)) < 1e-8);

  auto slow = RadialFn::sample(g, [](double r) { return 1.0 / (1.0 + r * r * r); }, Tail::power(3.0, 1.0));
  CHECK_THROWS_AS(integrate(slow), DivergenceError);
}

TEST_CASE("dirichlet seminorm") {
  auto g = default_grid();
  // smoothed plateau with explicit derivative
  auto fermi = [](double r) { return 1.0 / (1.0 + std::exp((r - 3.0) / 0.3)); };
  auto dfermi = [&](double r) {
    double e = std::exp((r - 3.0) / 0.3);
    return -e / (0.3 * (1.0 + e) * (1.0 + e));
  };
  auto f = RadialFn::sample(g, fermi);
  double want = oracle_radial([&](double r) { return dfermi(r) * dfermi(r); }, 0.0, 40.0);
  auto res = dirichlet_seminorm_checked(f);
  CHECK(rel(res.value, want) < 1e-7);
  CHECK_FALSE(res.accuracy_warning);

  double base = 15.0 / 32.0 * std::pow(kPi, 3);
  for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double k = dirichlet_seminorm(bubble_shape(g, d));
    CHECK(rel(k, base) < 1e-4);
  }

  auto coarse = RadialGrid::make(5, 16, 40.0, 1.0);
  auto rough = dirichlet_seminorm_checked(bubble_shape(coarse, 1.0));
  CHECK(rough.accuracy_warning);
}

TEST_CASE("lp norms") {
  auto g = default_grid();
  auto b1 = bump(2.0);
  auto b2 = bump(2.0, 2.0);
  for (double p : {1.0, 2.0, 10.0 / 3.0}) CHECK(rel(lp_norm(b2, p), 2.0 * lp_norm(b1, p)) < 1e-13);

  auto u = bubble_shape(g, 1.0);
  double q = 10.0 / 3.0;
  double want = std::pow(oracle_radial([q](double r) { return std::pow(1.0 + r * r, -1.5 * q); }), 1.0 / q);
  CHECK(rel(lp_norm(u, q), want) < 1e-8);

  auto vfun = [](double r) { return 0.1 * std::pow(1.0 + r * r, -2.0); };
  auto V = RadialFn::sample(g, vfun, Tail{4.0, 0.1, vfun});
  double vwant = std::pow(oracle_radial([](double r) { return std::pow(1.0 + r * r, -5.0); }), 0.4);
  CHECK(rel(lp_norm(V, 2.5), 0.1 * vwant) < 1e-8);
  CHECK_THROWS_AS(lp_norm(V, 0.5), ParameterError);
}

TEST_CASE("bicenter integral") {
  auto g = default_grid();
  auto ga = RadialFn::sample(g, [](double r) { return std::exp(-r * r); });
  auto gb = RadialFn::sample(g, [](double r) { return std::exp(-2.0 * r * r); });
  CHECK(bicenter_integral(ga, gb, 0.0) == integrate(ga * gb));

  // e^{-|x|^2} * e^{-|x-y|^2} integrates to (pi/2)^{5/2} e^{-rho^2/2}
  double want = std::pow(kPi / 2.0, 2.5) * std::exp(-0.5);
  CHECK(rel(bicenter_integral(ga, ga, 1.0), want) < 1e-6);
  // with a and b: (pi/(a+b))^{5/2} exp(-ab rho^2/(a+b))
  for (double rho : {0.5, 1.0, 2.5}) {
    double w2 = std::pow(kPi / 3.0, 2.5) * std::exp(-2.0 * rho * rho / 3.0);
    double ab = bicenter_integral(ga, gb, rho);
    double ba = bicenter_integral(gb, ga, rho);
    CHECK(rel(ab, w2) < 1e-6);
    CHECK(std::fabs(ab - ba) <= 1e-10 * std::fabs(ab));
    double one_sided_a = overlap(ga, OffsetFn{gb, rho});
    double one_sided_b = overlap(gb, OffsetFn{ga, rho});
    CHECK(rel(one_sided_a, one_sided_b) < 1e-7);
  }

  auto b1 = bump(1.0);
  CHECK(std::fabs(bicenter_integral(b1, b1, 5.0)) < 1e-14);
  CHECK(bicenter_integral(b1, b1, 1.5) > 0.0);
}

TEST_CASE("axis moments") {
  auto g = default_grid();
  auto u = bubble_shape(g, 1.0);
  auto m0 = axis_moment_integrals(OffsetFn{u, 0.0}, 0.0);
  CHECK(m0.axial_first_moment == 0.0);
  double q = 10.0 / 3.0;
  CHECK(rel(m0.mass, std::pow(lp_norm(u, q), q)) < 1e-10);

  auto narrow = bump(1e-3);
  auto m3 = axis_moment_integrals(OffsetFn{narrow, 3.0}, 0.0);
  CHECK(std::fabs(m3.axial_first_moment / m3.mass - 0.75) < 1e-2);
  auto mc = axis_moment_integrals(OffsetFn{narrow, 3.0}, 0.75);
  CHECK(mc.spread / mc.mass < 1e-3);
}
