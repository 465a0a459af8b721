#include "hartree/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hartree/errors.hpp"
#include "hartree/riesz.hpp"

namespace hartree {

namespace {

constexpr double kAlpha = 4.0;

RadialFn power_tail_only(const RadialFn& f) {
  const Tail& t = f.tail();
  if (t.zero()) return f;
  return f.with_tail(Tail::power(t.p, t.c));
}

struct State {
  Pair p;
  RadialFn cu, cv;
  double ku = 0.0, kv = 0.0, nl = 0.0;

  double kinetic() const { return ku + kv; }
  double energy() const { return 0.5 * kinetic() - 0.25 * nl; }
};

State evaluate(const Pair& p, const Problem& pr, bool scalar) {
  State s;
  s.p = p;
  RadialFn up = positive_part(p.u), vp = positive_part(p.v);
  RadialFn u2 = up * up, v2 = vp * vp;
  s.cu = riesz_convolve(u2, kAlpha);
  s.ku = dirichlet_seminorm(p.u);
  const double d11 = integrate(u2 * s.cu);
  if (scalar) {
    s.cv = RadialFn::zero(p.grid());
    s.nl = pr.mu1 * d11;
    return s;
  }
  s.cv = riesz_convolve(v2, kAlpha);
  s.kv = dirichlet_seminorm(p.v);
  const double d22 = integrate(v2 * s.cv);
  const double d12 = 0.5 * (integrate(v2 * s.cu) + integrate(u2 * s.cv));
  s.nl = pr.mu1 * d11 + pr.mu2 * d22 + 2.0 * pr.beta * d12;
  return s;
}

State scaled(const State& s, double t) {
  State r;
  r.p = s.p.scaled(t);
  r.cu = (t * t) * s.cu;
  r.cv = (t * t) * s.cv;
  r.ku = t * t * s.ku;
  r.kv = t * t * s.kv;
  r.nl = t * t * t * t * s.nl;
  return r;
}

State project(const State& s) {
  if (!(s.nl > 0.0)) throw NumericalError("flow: positive parts vanished");
  return scaled(s, std::sqrt(s.kinetic() / s.nl));
}

double negative_mass(const RadialFn& f) {
  std::vector<double> v(f.values());
  for (double& x : v) x = std::min(x, 0.0);
  RadialFn n(f.grid(), std::move(v));
  return integrate(n * n);
}

RadialFn rescale_profile(const RadialFn& u, double s) {
  const RadialGrid& g = *u.grid();
  const double e = 0.5 * (g.dim() - 2);
  const double a = std::pow(s, e);
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = a * u(s * g.nodes()[i]);
  Tail t;
  if (!u.tail().zero()) t = Tail::power(u.tail().p, u.tail().c * a * std::pow(s, -u.tail().p));
  return RadialFn(u.grid(), std::move(v), t);
}

void bulk_ratio(const Pair& p, double& mean, double& spread) {
  const auto& u = p.u.values();
  const auto& v = p.v.values();
  double umax = 0.0;
  for (double x : u) umax = std::max(umax, x);
  double s = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.01 * umax) {
      s += v[i] / u[i];
      ++n;
    }
  mean = n ? s / n : 0.0;
  spread = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.01 * umax) spread = std::max(spread, std::fabs(v[i] / u[i] - mean));
}

Pair gaussian_start(const FlowConfig& cfg, const GridPtr& g, bool scalar) {
  const double w = cfg.start_width;
  auto u = RadialFn::sample(g, [&](double r) { return cfg.start_u * std::exp(-r * r / (w * w)); });
  auto v = scalar ? RadialFn::zero(g) : RadialFn::sample(g, [&](double r) { return cfg.start_v * std::exp(-r * r / (w * w)); });
  return Pair(u, v);
}

FlowDiagnostics run_flow(const Problem& pr, const FlowConfig& cfg, Pair start, bool scalar) {
  if (!(cfg.step > 0.0)) throw ParameterError("flow: step must be positive");
  if (!(cfg.tolerance > 0.0)) throw ParameterError("flow: tolerance must be positive");
  if (cfg.max_iterations < 0 || cfg.residual_every < 1 || cfg.project_every < 1)
    throw ParameterError("flow: invalid iteration settings");
  const int N = start.grid()->dim();
  const auto tests = default_test_set(N);
  start = Pair(power_tail_only(start.u), power_tail_only(start.v));
  if (start.u.is_zero() || (!scalar && start.v.is_zero()))
    throw ParameterError("flow: initial state needs nonzero positive parts");

  FlowDiagnostics d;
  State cur = project(evaluate(start, pr, scalar));
  double E = cur.energy();
  double tau = cfg.step;
  double residual = weak_residual(cur.p, pr, tests).relative;
  d.trace.push_back({0, E, cur.kinetic() - cur.nl, residual, tau, 0.0});
  int it = 0;
  if (residual < cfg.tolerance) {
    d.converged = true;
    d.verdict = "converged";
  }
  while (!d.converged && it < cfg.max_iterations) {
    ++it;
    RadialFn up = positive_part(cur.p.u), vp = positive_part(cur.p.v);
    RadialFn wu = inverse_laplacian((pr.mu1 * cur.cu + pr.beta * cur.cv) * up);
    RadialFn wv = scalar ? RadialFn::zero(cur.p.grid()) : inverse_laplacian((pr.mu2 * cur.cv + pr.beta * cur.cu) * vp);
    State next;
    double clamped = 0.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      RadialFn nu = (1.0 - tau) * cur.p.u + tau * wu;
      RadialFn nv = (1.0 - tau) * cur.p.v + tau * wv;
      clamped = negative_mass(nu) + negative_mass(nv);
      Pair np(positive_part(nu), positive_part(nv));
      next = evaluate(np, pr, scalar);
      if (it % cfg.project_every == 0) next = project(next);
      if (next.energy() <= E + 1e-12 * std::fabs(E)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      d.verdict = "stalled";
      break;
    }
    d.max_energy_increase = std::max(d.max_energy_increase, next.energy() - E);
    cur = next;
    E = cur.energy();

    const double ku = cur.ku, kv = cur.kv;
    if (!scalar && std::min(ku, kv) < 1e-8 * std::max(ku, kv)) {
      d.verdict = "semi-trivial attractor";
      break;
    }
    if (cfg.recentre_every > 0 && it % cfg.recentre_every == 0) {
      double s = fit_bubble_scale(cur.p.u);
      if (std::fabs(s - 1.0) > 1e-2) {
        Pair rp(rescale_profile(cur.p.u, s), scalar ? cur.p.v : rescale_profile(cur.p.v, s));
        cur = project(evaluate(rp, pr, scalar));
        E = cur.energy();
      }
    }
    FlowRecord rec{it, E, cur.kinetic() - cur.nl, -1.0, tau, clamped};
    if (it % cfg.residual_every == 0 || it == cfg.max_iterations) {
      residual = weak_residual(cur.p, pr, tests).relative;
      rec.residual = residual;
      if (residual < cfg.tolerance) {
        d.converged = true;
        d.verdict = "converged";
      }
    }
    d.trace.push_back(rec);
    tau = std::min(cfg.step, 2.0 * tau);
  }
  if (d.verdict.empty()) d.verdict = "budget exhausted";
  d.final_pair = cur.p;
  d.iterations = it;
  d.energy = E;
  d.residual = residual;
  d.delta_hat = fit_bubble_scale(cur.p.u);
  if (!scalar) bulk_ratio(cur.p, d.amplitude_ratio, d.ratio_spread);
  return d;
}

}  // namespace

RadialFn inverse_laplacian(const RadialFn& F) {
  const RadialGrid& g = *F.grid();
  const int N = g.dim(), M = g.size();
  const auto mwN = g.moment_weights(N - 1);
  const auto mw1 = g.moment_weights(1);
  const auto& iv = g.intervals();
  const auto& f = F.values();
  std::vector<double> a(M), b(M);
  for (int k = 0; k < M; ++k) {
    double sa = 0.0, sb = 0.0;
    for (int m = 0; m < iv[k].n; ++m) {
      sa += mwN[k][m] * f[iv[k].node[m]];
      sb += mw1[k][m] * f[iv[k].node[m]];
    }
    a[k] = sa;
    b[k] = sb;
  }
  double a_tail = 0.0, b_tail = 0.0;
  const Tail& t = F.tail();
  if (!t.zero()) {
    if (!(t.p > N)) throw DivergenceError("inverse_laplacian: source tail not integrable");
    const double R = g.r_max();
    if (t.exact) {
      a_tail = tail_integral(g, t) / g.sphere();
      b_tail = tail_integral(g, [&t, N](double r) { return t(r) * std::pow(r, 2.0 - N); }, t.p + N - 2) / g.sphere();
    } else {
      a_tail = t.c * std::pow(R, N - t.p) / (t.p - N);
      b_tail = t.c * std::pow(R, 2.0 - t.p) / (t.p - 2.0);
    }
  }
  std::vector<double> out(M);
  double A = 0.0;
  std::vector<double> Bcum(M + 1, 0.0);
  Bcum[M] = b_tail;
  for (int k = M - 1; k >= 0; --k) Bcum[k] = Bcum[k + 1] + b[k];
  for (int i = 0; i < M; ++i) {
    A += a[i];
    const double r = g.nodes()[i];
    out[i] = (std::pow(r, 2.0 - N) * A + Bcum[i + 1]) / (N - 2.0);
  }
  const double M0 = A + a_tail;
  Tail wt;
  if (M0 != 0.0) wt = Tail::power(N - 2.0, M0 / (N - 2.0));
  return RadialFn(F.grid(), std::move(out), wt);
}

double fit_bubble_scale(const RadialFn& u) {
  const int N = u.grid()->dim();
  const double u0 = u(0.0);
  if (!(u0 > 0.0)) throw NumericalError("fit_bubble_scale: profile not positive at the origin");
  const auto& r = u.grid()->nodes();
  const double half = 0.5 * u0;
  int k = 0;
  while (k < u.grid()->size() && u.values()[k] > half) ++k;
  if (k == u.grid()->size()) throw NumericalError("fit_bubble_scale: half maximum beyond the grid");
  double lo = k == 0 ? 0.0 : r[k - 1], hi = r[k];
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (u(mid) > half ? lo : hi) = mid;
  }
  const double rh = 0.5 * (lo + hi);
  return rh / std::sqrt(std::pow(2.0, 2.0 / (N - 2)) - 1.0);
}

FlowDiagnostics solve_limit_ground_state(const CouplingConstants& cc, const FlowConfig& cfg, const Pair& start) {
  if (start.rho != 0.0) throw ParameterError("flow: start must be centred");
  return run_flow(Problem::limit(cc), cfg, start, false);
}

FlowDiagnostics solve_limit_ground_state(const CouplingConstants& cc, const FlowConfig& cfg) {
  GridPtr g = cfg.grid ? cfg.grid : default_grid(cc.N);
  if (cfg.start == "ground") return solve_limit_ground_state(cc, cfg, ground_pair(1.0, 0.0, cc, g));
  if (cfg.start != "gaussian") throw ParameterError("flow: unknown start '" + cfg.start + "'");
  return solve_limit_ground_state(cc, cfg, gaussian_start(cfg, g, false));
}

FlowDiagnostics solve_scalar_choquard(double mu, const FlowConfig& cfg, const RadialFn& start) {
  if (!(mu > 0.0)) throw ParameterError("solve_scalar_choquard: mu must be positive");
  Problem pr;
  pr.N = start.grid()->dim();
  pr.mu1 = mu;
  pr.mu2 = 1.0;
  pr.beta = 0.0;
  return run_flow(pr, cfg, Pair(start, RadialFn::zero(start.grid())), true);
}

FlowDiagnostics solve_scalar_choquard(double mu, const FlowConfig& cfg) {
  GridPtr g = cfg.grid ? cfg.grid : default_grid(5);
  if (cfg.start == "ground") return solve_scalar_choquard(mu, cfg, make_bubble(1.0, 0.0, g->dim()).profile(g));
  if (cfg.start != "gaussian") throw ParameterError("flow: unknown start '" + cfg.start + "'");
  return solve_scalar_choquard(mu, cfg, gaussian_start(cfg, g, true).u);
}

std::vector<VanishingRow> vanishing_energy_limit(const Problem& prob, int mu_index, const std::vector<double>& deltas,
                                                 const GridPtr& grid) {
  if (mu_index != 1 && mu_index != 2) throw ParameterError("vanishing_energy_limit: mu_index must be 1 or 2");
  GridPtr g = grid ? grid : default_grid(prob.N);
  const double mu = mu_index == 1 ? prob.mu1 : prob.mu2;
  const double lam = mu_index == 1 ? prob.lambda1 : prob.lambda2;
  const RadialFn& V = mu_index == 1 ? prob.V1 : prob.V2;
  RadialFn U1 = make_bubble(1.0, 0.0, g->dim()).profile(g);
  const double u1_l2 = integrate(U1 * U1);
  std::vector<VanishingRow> rows;
  for (double d : deltas) {
    RadialFn phi = (1.0 / std::sqrt(mu)) * make_bubble(d, 0.0, g->dim()).profile(g);
    RadialFn sq = phi * phi;
    VanishingRow row;
    row.delta = d;
    const double l2 = integrate(sq);
    row.lambda_mass = lam * l2;
    row.lambda_law = lam * d * d / mu * u1_l2;
    row.potential_mass = row.lambda_mass + (V.grid() ? integrate(sq * V) : 0.0);
    const double K = dirichlet_seminorm(phi);
    const double D = double_energy(sq, sq, kAlpha);
    const double A = K + row.potential_mass;
    row.t = std::sqrt(A / (mu * D));
    row.energy = 0.25 * row.t * row.t * A;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BrezisLiebRow> brezis_lieb_check(const RadialFn& u0, const RadialFn& bubble_profile,
                                             const std::vector<double>& sigmas, const std::vector<double>& offsets,
                                             const RadialFn& v0) {
  if (sigmas.size() != offsets.size()) throw ParameterError("brezis_lieb_check: sequences differ in length");
  if (u0.grid() != v0.grid()) throw ParameterError("brezis_lieb_check: u0 and v0 must share a grid");
  for (double o : offsets)
    if (o != 0.0) throw ParameterError("brezis_lieb_check: only zero offsets are supported");
  const GridPtr& g = u0.grid();
  const int N = g->dim();
  auto D = [](const RadialFn& f, const RadialFn& h) {
    RadialFn fp = positive_part(f), hp = positive_part(h);
    return double_energy(fp * fp, hp * hp, kAlpha);
  };
  const double d_uu = D(u0, u0), d_uv = D(u0, v0);
  std::vector<BrezisLiebRow> rows;
  for (std::size_t n = 0; n < sigmas.size(); ++n) {
    const double s = sigmas[n];
    if (!(s > 0.0)) throw ParameterError("brezis_lieb_check: sigma must be positive");
    const double a = std::pow(s, -0.5 * (N - 2));
    auto bf = [&bubble_profile, a, s](double r) { return a * bubble_profile(r / s); };
    Tail bt;
    if (!bubble_profile.tail().zero()) {
      bt.p = bubble_profile.tail().p;
      bt.c = a * bubble_profile.tail().c * std::pow(s, bt.p);
      bt.exact = bf;
    }
    RadialFn b = RadialFn::sample(g, bf, bt);
    RadialFn un = u0 + b, vn = v0 + b;
    BrezisLiebRow row;
    row.sigma = s;
    row.offset = offsets[n];
    row.d_full = D(un, un);
    row.self_error = std::fabs(row.d_full - D(un - u0, un - u0) - d_uu);
    row.mixed_error = std::fabs(D(un, vn) - D(un - u0, vn - v0) - d_uv);
    rows.push_back(row);
  }
  return rows;
}

std::vector<BrezisLiebRow> brezis_lieb_check(const RadialFn& u0, const RadialFn& bubble_profile,
                                             const std::vector<double>& sigmas, const std::vector<double>& offsets) {
  return brezis_lieb_check(u0, bubble_profile, sigmas, offsets, 0.5 * u0);
}

}  // namespace hartree
