#include "hartree/riesz.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "hartree/errors.hpp"
#include "hartree/quadrature.hpp"

namespace hartree {

namespace {

inline double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

// d^{-alpha/2} with an integer fast path
struct NegPow {
  double half;
  int ihalf;
  bool integral;
  explicit NegPow(double alpha) : half(0.5 * alpha), ihalf(static_cast<int>(std::lround(0.5 * alpha))) {
    integral = std::fabs(half - ihalf) < 1e-15 && ihalf > 0;
  }
  double operator()(double d) const { return integral ? 1.0 / ipow(d, ihalf) : std::pow(d, -half); }
};

double kernel_raw(double alpha, double r, double s, int N) {
  const NegPow np(alpha);
  const double d2 = (r - s) * (r - s);
  const double rs = r * s;
  auto F = [&](double t) {
    double sh = std::sin(0.5 * t);
    return np(d2 + 4.0 * rs * sh * sh) * ipow(std::sin(t), N - 2);
  };
  const double theta_c = std::fabs(r - s) / std::sqrt(rs);
  double total = 0.0;
  if (theta_c >= 1.0) {
    const GaussRule& gl = gauss_legendre(24);
    const int panels = 2;
    for (int p = 0; p < panels; ++p) {
      double a = M_PI * p / panels, h = M_PI / panels;
      for (std::size_t q = 0; q < gl.x.size(); ++q) total += gl.w[q] * h * F(a + h * gl.x[q]);
    }
  } else {
    // z = ln(theta); theta F(theta) is smooth in z and decays below theta_c
    const double z1 = std::log(M_PI);
    // below theta_c the integrand decays like theta^{N-1}; above it like theta^{N-1-alpha}
    double z0 = theta_c > 0.0 ? std::log(theta_c) - 40.0 / (N - 1) : -HUGE_VAL;
    if (alpha < N - 1) z0 = std::max(z0, z1 - 40.0 / (N - 1 - alpha));
    const int panels = std::max(4, static_cast<int>(std::ceil(z1 - z0)));
    const double h = (z1 - z0) / panels;
    const GaussRule& gl = gauss_legendre(10);
    for (int p = 0; p < panels; ++p) {
      double a = z0 + p * h;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        double t = std::exp(a + h * gl.x[q]);
        total += gl.w[q] * h * t * F(t);
      }
    }
  }
  return unit_sphere_area(N - 1) * total;
}

struct KernelTable {
  int M = 0;
  std::vector<double> W;  // row-major, unit radius
  std::map<double, std::vector<double>> tail_cache;
  std::mutex mu;
};

constexpr int kFarGauss = 8;
constexpr int kNearGauss = 16;

// Product-integration weights of s^{N-1} K(r, s) against the grid's local
// Lagrange basis, accumulated per node.
void accumulate_row(const RadialGrid& g, double alpha, double r, int singular, double* row) {
  const int N = g.dim();
  const auto& ivs = g.intervals();
  const GaussRule& far = gauss_legendre(kFarGauss);
  const GaussRule& near = gauss_legendre(kNearGauss);
  double b[RadialGrid::kStencil];
  for (int k = 0; k < g.size(); ++k) {
    const auto& I = ivs[k];
    const double h = I.b - I.a;
    auto add = [&](double s, double w) {
      double val = w * angular_kernel(alpha, r, s, N) * ipow(s, N - 1);
      I.basis(s, b);
      for (int m = 0; m < I.n; ++m) row[I.node[m]] += val * b[m];
    };
    if (singular >= 0 && k == singular) {
      for (std::size_t q = 0; q < near.x.size(); ++q) {
        double u = near.x[q];
        add(I.b - h * u * u * u, near.w[q] * 3.0 * h * u * u);
      }
    } else if (singular >= 0 && k == singular + 1) {
      for (std::size_t q = 0; q < near.x.size(); ++q) {
        double u = near.x[q];
        add(I.a + h * u * u * u, near.w[q] * 3.0 * h * u * u);
      }
    } else if (singular >= 0 && std::abs(k - singular) <= 3) {
      for (std::size_t q = 0; q < near.x.size(); ++q) add(I.a + h * near.x[q], near.w[q] * h);
    } else {
      for (std::size_t q = 0; q < far.x.size(); ++q) add(I.a + h * far.x[q], far.w[q] * h);
    }
  }
}

std::shared_ptr<KernelTable> kernel_table(const RadialGrid& g, double alpha) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<KernelTable>> cache;
  char key[160];
  std::snprintf(key, sizeof key, "%s|%.17g", g.shape_key().c_str(), alpha);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto unit = RadialGrid::make(g.dim(), g.size(), 1.0, g.stretch());
  auto t = std::make_shared<KernelTable>();
  const int M = g.size();
  t->M = M;
  t->W.assign(static_cast<std::size_t>(M) * M, 0.0);
  for (int i = 0; i < M; ++i) accumulate_row(*unit, alpha, unit->nodes()[i], i, &t->W[static_cast<std::size_t>(i) * M]);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  cache[key] = t;
  return t;
}

// Integral over s > R of K(r, s) F(s) s^{N-1} ds, with t = R/s.
double tail_kernel_integral(double alpha, int N, double r, double R, const std::function<double(double)>& F) {
  const GaussRule& gl = gauss_legendre(kNearGauss);
  double total = 0.0;
  auto add = [&](double t, double w) {
    if (t <= 0.0) return;
    double s = R / t;
    total += w * angular_kernel(alpha, r, s, N) * F(s) * ipow(s, N - 1) * R / (t * t);
  };
  for (std::size_t q = 0; q < gl.x.size(); ++q) add(0.5 * gl.x[q], 0.5 * gl.w[q]);
  for (std::size_t q = 0; q < gl.x.size(); ++q) {
    double u = gl.x[q];
    add(1.0 - 0.5 * u * u * u, gl.w[q] * 1.5 * u * u);
  }
  return total;
}

const std::vector<double>& power_tail_weights(KernelTable& t, const RadialGrid& g, double alpha, double p) {
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.tail_cache.find(p);
  if (it != t.tail_cache.end()) return it->second;
  auto unit = RadialGrid::make(g.dim(), g.size(), 1.0, g.stretch());
  std::vector<double> tau(g.size());
  for (int i = 0; i < g.size(); ++i)
    tau[i] = tail_kernel_integral(alpha, g.dim(), unit->nodes()[i], 1.0, [p](double s) { return std::pow(s, -p); });
  return t.tail_cache.emplace(p, std::move(tau)).first->second;
}

void check_alpha(int N, double alpha) {
  if (!(alpha > 0.0 && alpha < N)) throw ParameterError("Riesz exponent must lie in (0, N)");
}

}  // namespace

double hls_constant(int N, double alpha) {
  if (N < 1) throw ParameterError("hls_constant: N must be positive");
  check_alpha(N, alpha);
  using boost::math::tgamma;
  const double pi = M_PI;
  return std::pow(pi, 0.5 * alpha) * tgamma(0.5 * (N - alpha)) / tgamma(0.5 * (2.0 * N - alpha)) *
         std::pow(tgamma(0.5 * N) / tgamma(static_cast<double>(N)), -(N - alpha) / N);
}

double angular_kernel(double alpha, double r, double s, int N) {
  if (N < 2) throw ParameterError("angular_kernel: N must be >= 2");
  check_alpha(N, alpha);
  if (!(r >= 0.0) || !(s >= 0.0)) throw ParameterError("angular_kernel: radii must be >= 0");
  if (r == 0.0 && s == 0.0) throw SingularInputError("angular_kernel: r = s = 0");
  if (r == s && alpha >= N - 1) throw SingularInputError("angular_kernel: non-integrable diagonal for alpha >= N-1");
  if (s == 0.0) return unit_sphere_area(N) * std::pow(r, -alpha);
  if (r == 0.0) return unit_sphere_area(N) * std::pow(s, -alpha);
  return kernel_raw(alpha, r, s, N);
}

RadialFn riesz_convolve(const RadialFn& f, double alpha) {
  const RadialGrid& g = *f.grid();
  const int N = g.dim();
  const int M = g.size();
  check_alpha(N, alpha);
  const double mass = integrate(f);
  auto table = kernel_table(g, alpha);
  const double R = g.r_max();
  const double scale = std::pow(R, N - alpha);
  std::vector<double> out(M, 0.0);
  const auto& fv = f.values();
  for (int i = 0; i < M; ++i) {
    const double* row = &table->W[static_cast<std::size_t>(i) * M];
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += row[j] * fv[j];
    out[i] = scale * s;
  }
  const Tail& t = f.tail();
  if (!t.zero()) {
    if (t.exact) {
      for (int i = 0; i < M; ++i) out[i] += tail_kernel_integral(alpha, N, g.nodes()[i], R, t.exact);
    } else {
      const auto& tau = power_tail_weights(*table, g, alpha, t.p);
      const double ts = t.c * std::pow(R, N - alpha - t.p);
      for (int i = 0; i < M; ++i) out[i] += ts * tau[i];
    }
  }
  Tail res;
  if (mass != 0.0) res = Tail::power(alpha, mass);
  return RadialFn(f.grid(), std::move(out), res);
}

double double_energy(const RadialFn& f, const RadialFn& g, double alpha) {
  const double a = integrate(g * riesz_convolve(f, alpha));
  if (&f == &g) return a;
  const double b = integrate(f * riesz_convolve(g, alpha));
  return 0.5 * (a + b);
}

double sobolev_constant(int N) {
  if (N < 3) throw ParameterError("sobolev_constant: N must be >= 3");
  using boost::math::tgamma;
  return M_PI * N * (N - 2.0) * std::pow(tgamma(0.5 * N) / tgamma(static_cast<double>(N)), 2.0 / N);
}

double sobolev_rayleigh(const GridPtr& grid, double delta) {
  const int N = grid->dim();
  const double e = 0.5 * (N - 2);
  auto f = [delta, e](double r) { return std::pow(delta / (delta * delta + r * r), e); };
  RadialFn u = RadialFn::sample(grid, f, Tail{N - 2.0, std::pow(delta, e), f});
  const double two_star = 2.0 * N / (N - 2.0);
  const double l = lp_norm(u, two_star);
  return dirichlet_seminorm(u) / (l * l);
}

ConstantsTable constants_table(int N, double bubble_norm) {
  ConstantsTable c;
  c.N = N;
  c.hls = hls_constant(N, 4.0);
  c.sobolev = sobolev_constant(N);
  c.sobolev_hl = c.sobolev / std::sqrt(c.hls);
  c.bubble_norm = bubble_norm;
  c.sphere = unit_sphere_area(N);
  return c;
}

}  // namespace hartree
