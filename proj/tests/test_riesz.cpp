#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "doctest.h"
#include "hartree/errors.hpp"
#include "hartree/quadrature.hpp"
#include "hartree/riesz.hpp"

using namespace hartree;

namespace {

const double kPi = M_PI;
const double kS4 = 8.0 * kPi * kPi / 3.0;
const double kS3 = 2.0 * kPi * kPi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// closed form of K(r, s) for N = 5, alpha = 4; series near s/r -> 0
double kernel_n5(double r, double s) {
  if (s > r) std::swap(r, s);
  double x = s / r;
  double bracket;  // (1 + x^2) ln((1+x)/(1-x)) - 2x
  if (x < 0.1) {
    bracket = 0.0;
    double xp = x * x * x;
    for (int k = 1; k < 30; ++k) {
      bracket += 2.0 * xp * (1.0 / (2 * k + 1) + 1.0 / (2 * k - 1));
      xp *= x * x;
    }
  } else {
    bracket = (1.0 + x * x) * 2.0 * std::atanh(x) - 2.0 * x;
  }
  return kS3 * bracket / (2.0 * x * x * x) * std::pow(r, -4.0);
}

double hls_oracle(int N, int alpha) {
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::pow;
  using boost::multiprecision::tgamma;
  cpp_bin_float_50 pi = boost::math::constants::pi<cpp_bin_float_50>();
  cpp_bin_float_50 n = N, a = alpha;
  cpp_bin_float_50 v = pow(pi, a / 2) * tgamma((n - a) / 2) / tgamma((2 * n - a) / 2) *
                       pow(tgamma(n / 2) / tgamma(n), -(n - a) / n);
  return static_cast<double>(v);
}

GridPtr default_grid() { return RadialGrid::make(5, 400, 40.0, 1.02); }

RadialFn unit_bubble_sq(const GridPtr& g) {
  auto f = [](double r) { return std::pow(1.0 + r * r, -3.0); };
  return RadialFn::sample(g, f, Tail{6.0, 1.0, f});
}

}  // namespace

TEST_CASE("hls constant against high-precision gamma") {
  CHECK(rel(hls_constant(5, 4.0), hls_oracle(5, 4)) < 1e-12);
  CHECK(rel(hls_constant(6, 4.0), hls_oracle(6, 4)) < 1e-12);
  CHECK_THROWS_AS(hls_constant(5, 5.0), ParameterError);
  CHECK_THROWS_AS(hls_constant(5, 0.0), ParameterError);
}

TEST_CASE("angular kernel") {
  CHECK(rel(angular_kernel(4.0, 1.0, 0.0, 5), kS4) < 1e-15);
  CHECK(rel(angular_kernel(4.0, 2.0, 0.0, 5), kS4 / 16.0) < 1e-15);
  CHECK(angular_kernel(4.0, 2.0, 1.0, 5) == doctest::Approx(angular_kernel(4.0, 1.0, 2.0, 5)).epsilon(1e-14));
  for (double r : {0.01, 1.0, 30.0})
    for (double x : {1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999, 1.0 + 1e-6, 1.01, 1.5, 3.0, 100.0, 1e4})
      CHECK(rel(angular_kernel(4.0, r, r * x, 5), kernel_n5(r, r * x)) < 1e-10);
  CHECK_THROWS_AS(angular_kernel(4.0, 0.0, 0.0, 5), SingularInputError);
  CHECK_THROWS_AS(angular_kernel(4.0, 1.0, 1.0, 5), SingularInputError);
  // below the N-1 threshold the diagonal is finite
  CHECK(std::isfinite(angular_kernel(4.0, 1.0, 1.0, 6)));
  // N = 5, alpha = 3, r = s = 1: |S^3| int_0^pi cos^3(t/2) dt = 8 pi^2 / 3
  CHECK(rel(angular_kernel(3.0, 1.0, 1.0, 5), 8.0 * kPi * kPi / 3.0) < 1e-12);
  CHECK(rel(angular_kernel(3.0, 1.0, 1.0 + 1e-9, 5), 8.0 * kPi * kPi / 3.0) < 1e-8);
}

TEST_CASE("angular kernel against Monte-Carlo sphere average") {
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> nd;
  struct Case {
    double alpha, r, s;
    int N;
  };
  for (Case c : {Case{4.0, 1.0, 2.0, 5}, Case{3.0, 1.0, 1.3, 5}}) {
    const int n = 4000000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      double w[8], nrm = 0.0;
      for (int d = 0; d < c.N; ++d) {
        w[d] = nd(rng);
        nrm += w[d] * w[d];
      }
      nrm = std::sqrt(nrm);
      double dx = c.r - c.s * w[0] / nrm;
      double d2 = dx * dx;
      for (int d = 1; d < c.N; ++d) d2 += (c.s * w[d] / nrm) * (c.s * w[d] / nrm);
      sum += std::pow(d2, -0.5 * c.alpha);
    }
    double mc = unit_sphere_area(c.N) * sum / n;
    CHECK(rel(angular_kernel(c.alpha, c.r, c.s, c.N), mc) < 1e-3);
  }
}

TEST_CASE("riesz convolution") {
  auto g = default_grid();
  auto u2 = unit_bubble_sq(g);
  auto c = riesz_convolve(u2, 4.0);
  // conv((1+r^2)^{-3}) = kappa (1+r^2)^{-2}, kappa = |S^4| B(1/2,5/2)/2 = pi^3/2
  const double kappa = kPi * kPi * kPi / 2.0;
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < g->size(); ++i) {
    double r = g->nodes()[i];
    if (r > 10.0) break;
    double ratio = c.values()[i] * std::pow(1.0 + r * r, 2.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK((hi - lo) / lo < 1e-3);
  CHECK(rel(lo, kappa) < 1e-6);
  CHECK(rel(hi, kappa) < 1e-6);

  auto bump = RadialFn::sample(g, [](double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; });
  auto cb = riesz_convolve(bump, 4.0);
  double mass = integrate(bump);
  CHECK(rel(cb(30.0), mass * std::pow(30.0, -4.0)) < 1e-3);
  CHECK(rel(cb(60.0), mass * std::pow(60.0, -4.0)) < 1e-12);

  auto z = riesz_convolve(RadialFn::zero(g), 4.0);
  for (double x : z.values()) CHECK(x == 0.0);

  auto gs = RadialFn::sample(g, [](double r) { return std::exp(-r * r); });
  auto lin = riesz_convolve(2.0 * u2 + (-3.0) * gs, 4.0);
  auto sep = 2.0 * riesz_convolve(u2, 4.0) + (-3.0) * riesz_convolve(gs, 4.0);
  double scale = 0.0, err = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    scale = std::max(scale, std::fabs(sep.values()[i]));
    err = std::max(err, std::fabs(lin.values()[i] - sep.values()[i]));
  }
  CHECK(err <= 1e-12 * scale);

  auto slow = RadialFn::sample(g, [](double r) { return std::pow(1.0 + r * r, -1.5); }, Tail::power(3.0, 1.0));
  CHECK_THROWS_AS(riesz_convolve(slow, 4.0), DivergenceError);
}

TEST_CASE("double energy") {
  auto g = default_grid();
  const double C2 = 30.0 / std::pow(kPi, 3);  // C_5^2 from the conformal identity
  auto u2 = C2 * unit_bubble_sq(g);
  auto uf = [](double r) { return std::pow(1.0 + r * r, -1.5); };
  auto u = std::sqrt(C2) * RadialFn::sample(g, uf, Tail{3.0, 1.0, uf});
  const double shl2 = 450.0 / 32.0;
  CHECK(rel(double_energy(u2, u2, 4.0), shl2) < 1e-4);
  CHECK(rel(dirichlet_seminorm(u), shl2) < 1e-4);
  CHECK(rel(double_energy(u2, u2, 4.0), dirichlet_seminorm(u)) < 1e-4);

  auto gs = RadialFn::sample(g, [](double r) { return std::exp(-r * r); });
  double a = double_energy(u2, gs, 4.0), b = double_energy(gs, u2, 4.0);
  CHECK(std::fabs(a - b) <= 1e-12 * std::fabs(a));
  CHECK(double_energy(RadialFn::zero(g), RadialFn::zero(g), 4.0) == 0.0);

  // HLS inequality on random bumps
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> width(0.1, 5.0), amp(0.1, 3.0);
  const double C = hls_constant(5, 4.0);
  const double q = 5.0 / 3.0;
  for (int k = 0; k < 20; ++k) {
    double w1 = width(rng), w2 = width(rng), a1 = amp(rng), a2 = amp(rng);
    auto f = RadialFn::sample(g, [=](double r) { return r < w1 ? a1 * std::exp(-1.0 / (1.0 - r * r / (w1 * w1))) : 0.0; });
    auto h = RadialFn::sample(g, [=](double r) { return r < w2 ? a2 * std::exp(-1.0 / (1.0 - r * r / (w2 * w2))) : 0.0; });
    double d = double_energy(f, h, 4.0);
    CHECK(d > 0.0);
    CHECK(d <= C * lp_norm(f, q) * lp_norm(h, q));
    CHECK(double_energy(f, f, 4.0) > 0.0);
  }
}

TEST_CASE("sobolev constant and table") {
  auto g = default_grid();
  double S = sobolev_constant(5);
  CHECK(rel(sobolev_rayleigh(g, 1.0), S) < 1e-3);
  CHECK(rel(sobolev_rayleigh(g, 3.0), sobolev_rayleigh(g, 1.0)) < 1e-4);
  CHECK_THROWS_AS(sobolev_constant(2), ParameterError);

  auto t = constants_table(5, std::sqrt(30.0 / std::pow(kPi, 3)));
  CHECK(rel(t.sobolev_hl * t.sobolev_hl, t.sobolev * t.sobolev / t.hls) < 1e-12);
  CHECK(rel(t.sobolev_hl * t.sobolev_hl, 450.0 / 32.0) < 1e-12);
}
