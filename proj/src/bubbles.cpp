#include "hartree/bubbles.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <map>
#include <mutex>

#include "hartree/errors.hpp"

namespace hartree {

namespace {

RadialFn unit_profile(const GridPtr& grid, double delta) {
  const int N = grid->dim();
  const double e = 0.5 * (N - 2);
  auto f = [delta, e](double r) { return std::pow(delta / (delta * delta + r * r), e); };
  return RadialFn::sample(grid, f, Tail{N - 2.0, std::pow(delta, e), f});
}

// smooth step: 1 for x >= 1, 0 for x <= 0
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

GridPtr default_grid(int N) {
  static std::mutex mu;
  static std::map<int, GridPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& g = cache[N];
  if (!g) g = RadialGrid::make(N, 400, 40.0, 1.02);
  return g;
}

double bubble_constant(int N, const GridPtr& grid) {
  if (N < 5) throw ParameterError("bubble_constant: N must be >= 5");
  if (grid->dim() != N) throw ParameterError("bubble_constant: grid dimension mismatch");
  RadialFn u1 = unit_profile(grid, 1.0);
  RadialFn sq = u1 * u1;
  const double K = dirichlet_seminorm(u1);
  const double D = double_energy(sq, sq, 4.0);
  if (!(K > 0.0) || !(D > 0.0) || !std::isfinite(K / D))
    throw NumericalError("bubble_constant: degenerate energies K=" + std::to_string(K) + " D=" + std::to_string(D));
  return std::sqrt(K / D);
}

double bubble_constant(int N) {
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  double c = bubble_constant(N, default_grid(N));
  std::lock_guard<std::mutex> lock(mu);
  cache[N] = c;
  return c;
}

double Bubble::operator()(double r) const {
  return C * std::pow(delta / (delta * delta + r * r), 0.5 * (N - 2));
}

RadialFn Bubble::profile(const GridPtr& grid) const {
  if (grid->dim() != N) throw ParameterError("Bubble: grid dimension mismatch");
  return C * unit_profile(grid, delta);
}

Bubble make_bubble(double delta, double rho, int N, double C) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("make_bubble: delta must be positive");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("make_bubble: rho must be >= 0");
  if (N < 5) throw ParameterError("make_bubble: N must be >= 5");
  return Bubble{delta, rho, N, C};
}

Bubble make_bubble(double delta, double rho, int N) {
  if (N < 5) throw ParameterError("make_bubble: N must be >= 5");
  return make_bubble(delta, rho, N, bubble_constant(N));
}

CouplingConstants coupling_constants(double mu1, double mu2, double beta, int N) {
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw ParameterError("coupling constants: mu1, mu2 must be positive");
  if (!(beta > std::max(mu1, mu2)))
    throw DomainError("coupling constants: beta must exceed max(mu1, mu2)");
  CouplingConstants c;
  c.N = N;
  c.mu1 = mu1;
  c.mu2 = mu2;
  c.beta = beta;
  const double det = beta * beta - mu1 * mu2;
  c.k1 = (beta - mu2) / det;
  c.k2 = (beta - mu1) / det;
  const ConstantsTable t = constants_table(N, 0.0);
  c.shl2 = t.sobolev_hl * t.sobolev_hl;
  c.c_inf = 0.25 * (c.k1 + c.k2) * c.shl2;
  c.m1_inf = c.shl2 / (4.0 * mu1);
  c.m2_inf = c.shl2 / (4.0 * mu2);
  c.identity_gap = std::fabs(mu1 * c.k1 * c.k1 + mu2 * c.k2 * c.k2 + 2.0 * beta * c.k1 * c.k2 - (c.k1 + c.k2));
  return c;
}

QuotientInfimum quotient_infimum(double mu1, double mu2, double beta) {
  coupling_constants(mu1, mu2, beta);  // domain check
  auto f = [&](double t) { return (1.0 + t) * (1.0 + t) / (mu1 * t * t + 2.0 * beta * t + mu2); };
  QuotientInfimum q;
  // stationarity reduces to (beta - mu1) t = beta - mu2
  q.t_star = (beta - mu2) / (beta - mu1);
  q.value = f(q.t_star);

  // brute force on a log-spaced grid over [0, 1e3], then golden-section refinement
  double best_t = 0.0, best = f(0.0);
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    double t = 1e-6 * std::pow(1e9, static_cast<double>(i) / n);
    double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = best_t / 1.002, b = best_t * 1.002;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    double c = b - gr * (b - a), d = a + gr * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  q.brute_t = 0.5 * (a + b);
  q.brute_value = std::min(best, f(q.brute_t));
  return q;
}

Pair ground_pair(double delta, double rho, const CouplingConstants& cc, const GridPtr& grid) {
  Bubble b = make_bubble(delta, rho, grid->dim());
  RadialFn U = b.profile(grid);
  return Pair(std::sqrt(cc.k1) * U, std::sqrt(cc.k2) * U, rho);
}

TrialProfile make_trial_profile(double support_fraction, const CouplingConstants& cc, double cbar,
                                const TrialOptions& opt) {
  if (!(support_fraction > 0.0 && support_fraction < 1.0))
    throw ParameterError("make_trial_profile: support_fraction must lie in (0, 1)");
  if (!(cbar > cc.c_inf)) throw ParameterError("make_trial_profile: cbar must exceed c_inf");
  if (opt.mollify_cells < 1) throw ParameterError("make_trial_profile: mollify_cells must be >= 1");
  const int N = cc.N;
  auto grid = RadialGrid::make(N, opt.M, 1.0, opt.stretch);
  const auto& r = grid->nodes();
  const double width = 1.0 - r[std::max(0, opt.M - 1 - opt.mollify_cells)];

  // share of |grad u1|^2 inside radius s is I_w(N/2 + 1, (N-2)/2), w = s^2/(1+s^2)
  const double w = boost::math::ibeta_inv(0.5 * N + 1.0, 0.5 * (N - 2), support_fraction);
  double eps = std::sqrt((1.0 - w) / w);

  TrialProfile best;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double e = 0.5 * (N - 2);
    auto U = [eps, e](double x) { return std::pow(eps / (eps * eps + x * x), e); };
    const double U1 = U(1.0);
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      v[i] = r[i] >= 1.0 ? 0.0 : (U(r[i]) - U1) * smooth_step((1.0 - r[i]) / width);
    RadialFn th0(grid, std::move(v));
    RadialFn sq = th0 * th0;
    const double K0 = dirichlet_seminorm(th0);
    const double D0 = double_energy(sq, sq, 4.0);
    const double t = std::sqrt(K0 / D0);

    TrialProfile p;
    p.grid = grid;
    p.theta = t * th0;
    p.N = N;
    p.eps = eps;
    p.amplitude = t;
    p.kinetic = t * t * K0;
    p.nonlocal = t * t * t * t * D0;
    p.sigma = 0.25 * (cc.k1 + cc.k2) * p.kinetic;
    p.c_inf = cc.c_inf;
    p.cbar = cbar;
    p.l2star = lp_norm(p.theta, 2.0 * N / (N - 2.0));
    p.iterations = it;
    if (p.sigma > cc.c_inf && p.sigma < cbar) return p;
    if (it == 1 || std::fabs(p.sigma - cc.c_inf) < std::fabs(best.sigma - cc.c_inf)) best = p;
    if (!(p.sigma > cc.c_inf)) break;  // below c_inf: refinement cannot help
    eps *= opt.shrink;
  }
  throw ConstructionError("make_trial_profile: energy window (c_inf, cbar) not met; achieved sigma/c_inf = " +
                              std::to_string(best.sigma / cc.c_inf),
                          best.sigma);
}

OffsetFn trial_member(const TrialProfile& profile, double delta, double rho) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("trial_member: delta must be positive");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("trial_member: rho must be >= 0");
  if (delta == 1.0) return OffsetFn{profile.theta, rho};
  const double s = std::pow(delta, -0.5 * (profile.N - 2));
  std::vector<double> v(profile.theta.values());
  for (double& x : v) x *= s;
  return OffsetFn{RadialFn(profile.grid->scaled(delta), std::move(v)), rho};
}

}  // namespace hartree
