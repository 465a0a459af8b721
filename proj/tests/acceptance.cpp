// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "hartree/errors.hpp"
#include "hartree/riesz.hpp"
#include "hartree/solver.hpp"
#include "hartree/verifier.hpp"

using namespace hartree;

namespace {

// N = 5 closed forms
const double kShl2 = 450.0 / 32.0;
const double kC2 = 30.0 / (M_PI * M_PI * M_PI);
const double kS4 = 8.0 * M_PI * M_PI / 3.0;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string g(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

CouplingConstants random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mu(0.1, 5.0), gap(0.01, 5.0);
  double m1 = mu(rng), m2 = mu(rng);
  return coupling_constants(m1, m2, std::max(m1, m2) + gap(rng));
}

// independent minimiser of (1 + t)^2 / (mu1 t^2 + 2 beta t + mu2) on t >= 0
double brute_infimum(double mu1, double mu2, double beta) {
  auto f = [&](double t) { return (1 + t) * (1 + t) / (mu1 * t * t + 2 * beta * t + mu2); };
  double best_t = 0.0, best = f(0.0);
  for (int i = 0; i <= 20000; ++i) {
    double t = 1e-8 * std::pow(1e16, i / 20000.0);
    if (f(t) < best) best = f(t), best_t = t;
  }
  best = std::min(best, 1.0 / mu1);  // t -> infinity
  double a = best_t / 1.01, b = best_t * 1.01;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 200; ++i) {
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (f(x1) < f(x2))
      b = x2;
    else
      a = x1;
  }
  return std::min(best, f(0.5 * (a + b)));
}

RadialFn gaussian(const GridPtr& gr, double a, double w) {
  return RadialFn::sample(gr, [a, w](double r) { return a * std::exp(-r * r / (w * w)); });
}

VerifierConfig reference_config() { return load_config(HARTREE_CONFIG); }

Outcome c1() {
  Outcome o;
  auto gr = default_grid(5);
  const double C = bubble_constant(5, gr);
  ConstantsTable t = constants_table(5, C);
  double chain = rel(t.sobolev_hl * t.sobolev_hl, t.sobolev * t.sobolev / t.hls);
  RadialFn U = make_bubble(1.0, 0.0, 5, C).profile(gr);
  double D = double_energy(U * U, U * U, 4.0), K = dirichlet_seminorm(U);
  o.detail << "chain " << g(chain) << ", D " << g(rel(D, kShl2)) << ", grad " << g(rel(K, kShl2));
  o.require(chain <= 1e-12, "S_HL^2 = S^2 / C(5,4) to 1e-12");
  o.require(rel(t.sobolev_hl * t.sobolev_hl, kShl2) <= 1e-12, "S_HL^2 closed form");
  o.require(rel(D, kShl2) <= 1e-3, "D(U^2,U^2) = S_HL^2 to 1e-3");
  o.require(rel(K, kShl2) <= 1e-3, "|grad U|^2 = S_HL^2 to 1e-3");
  return o;
}

Outcome c2() {
  Outcome o;
  auto gr = default_grid(5);
  const double C = bubble_constant(5, gr);
  Problem pr;
  pr.mu1 = pr.mu2 = 1.0;
  auto tests = default_test_set(5);
  auto res = [&](double c) {
    return weak_residual(Pair(make_bubble(1.0, 0.0, 5, c).profile(gr), RadialFn::zero(gr)), pr, tests).relative;
  };
  double r1 = res(C), r2 = res(2 * C);
  o.detail << "residual " << g(r1) << ", 2 C_N control " << g(r2) << ", C_N^2 vs 30/pi^3 " << g(rel(C * C, kC2));
  o.require(tests.size() == 20, "20 test functions");
  o.require(r1 < 1e-3, "residual < 1e-3");
  o.require(r2 > 0.1, "negative control > 0.1");
  return o;
}

Outcome c3() {
  Outcome o;
  std::mt19937_64 rng(3);
  double worst_id = 0.0, worst_q = 0.0;
  for (int i = 0; i < 100; ++i) {
    CouplingConstants c = random_triple(rng);
    const double d = c.beta * c.beta - c.mu1 * c.mu2;
    const double k1 = (c.beta - c.mu2) / d, k2 = (c.beta - c.mu1) / d;
    worst_id = std::max({worst_id, std::fabs(c.mu1 * k1 * k1 + c.mu2 * k2 * k2 + 2 * c.beta * k1 * k2 - (k1 + k2)),
                         std::fabs(c.mu1 * c.k1 * c.k1 + c.mu2 * c.k2 * c.k2 + 2 * c.beta * c.k1 * c.k2 - (c.k1 + c.k2))});
    double q = quotient_infimum(c.mu1, c.mu2, c.beta).value;
    worst_q = std::max({worst_q, std::fabs(q - (c.k1 + c.k2)), std::fabs(q - brute_infimum(c.mu1, c.mu2, c.beta))});
  }
  o.detail << "identity " << g(worst_id) << ", infimum " << g(worst_q);
  o.require(worst_id <= 1e-12, "identity to 1e-12");
  o.require(worst_q <= 1e-10, "infimum to 1e-10");
  return o;
}

Outcome c4() {
  Outcome o;
  auto gr = default_grid(5);
  std::mt19937_64 rng(4);
  std::vector<CouplingConstants> cs{coupling_constants(1, 2, 3)};
  for (int i = 0; i < 10; ++i) cs.push_back(random_triple(rng));
  double worst = 0.0, margin = 1e300;
  for (const auto& c : cs) {
    double target = 0.25 * (c.k1 + c.k2) * kShl2;
    worst = std::max(worst, rel(energy_I_infty(ground_pair(1.0, 0.0, c, gr), c).total, target));
    margin = std::min(margin, std::min(kShl2 / (4 * c.mu1), kShl2 / (4 * c.mu2)) - target);
  }
  o.detail << "energy " << g(worst) << ", min threshold margin " << g(margin);
  o.require(worst < 1e-3, "I_inf(ground pair) to 1e-3");
  o.require(margin > 0.0, "c_inf < min S_HL^2/(4 mu_j)");
  return o;
}

Outcome c5() {
  Outcome o;
  auto c = coupling_constants(1, 2, 3);
  FlowConfig cfg;
  cfg.max_iterations = 5000;
  auto d = solve_limit_ground_state(c, cfg);
  double gap = pohozaev_residual(d.final_pair, Problem::limit(c)).identity_gap;
  o.detail << d.iterations << " iterations, residual " << g(d.residual) << ", v/u - sqrt2 "
           << g(d.amplitude_ratio - std::sqrt(2.0)) << ", Pohozaev " << g(gap);
  o.require(d.residual < 1e-3 && d.iterations <= 5000, "residual < 1e-3 within 5000 iterations");
  o.require(std::fabs(d.amplitude_ratio - std::sqrt(2.0)) < 1e-3, "v/u = sqrt 2");
  o.require(gap < 1e-3, "Pohozaev gap");
  return o;
}

Outcome c6() {
  Outcome o;
  auto gr = default_grid(5);
  auto c = coupling_constants(1, 2, 3);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> amp(0.1, 3.0), wid(0.3, 4.0), v0(0.0, 1.0), lam(0.0, 0.5);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    Problem pr = Problem::limit(c);
    pr.lambda1 = lam(rng);
    pr.lambda2 = lam(rng);
    pr.V1 = power_potential(gr, v0(rng), 2.0);
    pr.V2 = power_potential(gr, v0(rng), 1.5);
    double a1 = amp(rng), w1 = wid(rng), a2 = amp(rng), w2 = wid(rng);
    Pair p(gaussian(gr, a1, w1), gaussian(gr, a2, w2));
    if (!(nehari_project(p, Problem::limit(c)).t <= nehari_project(p, pr).t)) ++bad;
  }
  o.detail << bad << " violations over 50 pairs";
  o.require(bad == 0, "tau <= t");
  return o;
}

Outcome c7() {
  Outcome o;
  auto gr = default_grid(5);
  const std::vector<double> ds{1.0, 0.3, 0.1, 0.03};
  const double u_l2 = kC2 * kS4 * 3.0 * M_PI / 16.0;
  double worst_ratio = 0.0, worst_e = 0.0, worst_law = 0.0;
  bool monotone = true;
  for (int j = 1; j <= 2; ++j) {
    Problem pr;
    pr.mu1 = 1.0;
    pr.mu2 = 2.0;
    pr.beta = 3.0;
    (j == 1 ? pr.V1 : pr.V2) = power_potential(gr, 0.1, 2.0);
    (j == 1 ? pr.lambda1 : pr.lambda2) = 0.1;
    auto rows = vanishing_energy_limit(pr, j, ds);
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].potential_mass < rows[i - 1].potential_mass;
    worst_ratio = std::max(worst_ratio, rows.back().potential_mass / rows.front().potential_mass);
    const double mu = j == 1 ? 1.0 : 2.0;
    worst_e = std::max(worst_e, rel(rows.back().energy, kShl2 / (4 * mu)));

    Problem lam;
    lam.mu1 = 1.0;
    lam.mu2 = 2.0;
    lam.beta = 3.0;
    (j == 1 ? lam.lambda1 : lam.lambda2) = 0.1;
    for (const auto& r : vanishing_energy_limit(lam, j, ds))
      worst_law = std::max(worst_law, rel(r.lambda_mass, 0.1 * r.delta * r.delta / mu * u_l2));
  }
  o.detail << "final/initial " << g(worst_ratio) << ", energy " << g(worst_e) << ", lambda law " << g(worst_law);
  o.require(monotone, "decreasing");
  o.require(worst_ratio < 0.1, "final < 10% of initial");
  o.require(worst_e < 1e-3, "energy to 1e-3 of S_HL^2/(4 mu_j)");
  o.require(worst_law < 1e-6, "lambda law to 1e-6");
  return o;
}

Outcome c8() {
  Outcome o;
  auto gr = default_grid(5);
  auto u0 = gaussian(gr, 1.0, 2.0);
  auto b = make_bubble(1.0).profile(gr);
  auto rows = brezis_lieb_check(u0, b, {1.0, 0.3, 0.1}, {0.0, 0.0, 0.0});
  bool dec = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    dec = dec && rows[i].self_error < rows[i - 1].self_error && rows[i].mixed_error < rows[i - 1].mixed_error;
  double rs = rows.back().self_error / rows.front().self_error, rm = rows.back().mixed_error / rows.front().mixed_error;
  auto st = brezis_lieb_check(u0, b, {1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0});
  double drift = 0.0;
  for (const auto& r : st)
    drift = std::max({drift, std::fabs(r.self_error - st[0].self_error), std::fabs(r.mixed_error - st[0].mixed_error)});
  o.detail << "self " << g(rs) << ", mixed " << g(rm) << ", stationary drift " << g(drift);
  o.require(dec, "decreasing");
  o.require(rs < 0.1 && rm < 0.1, "final < 10% of initial");
  o.require(drift < 1e-10, "stationary control");
  return o;
}

Outcome c9(Verifier& v) {
  Outcome o;
  const auto& c = v.coupling();
  const TrialProfile& th = v.trial();
  double xi0 = trial_barycenter(th, 1.0, 0.0, c).xi;
  double xig = barycenter(ground_pair(1.0, 0.0, c, v.grid()), c).xi;
  OffsetFn h = trial_member(th, 1.0, 1.5);
  Pair q(std::sqrt(c.k1) * h.profile, std::sqrt(c.k2) * h.profile, 1.5);
  Barycenter bq = barycenter(q, c);
  double inv = 0.0;
  for (double s : {0.5, 2.0}) {
    Barycenter bs = barycenter(q.scaled(s), c);
    inv = std::max({inv, rel(bs.xi, bq.xi), rel(bs.gamma, bq.gamma)});
  }
  double gs = 0.0, gl = 0.0;
  for (double rho : {0.0, 1.0, 2.0, 3.0}) {
    gs = std::max(gs, trial_barycenter(th, 0.01, rho, c).gamma);
    gl = std::max(gl, std::fabs(trial_barycenter(th, 1e3, rho, c).gamma - 1.0));
  }
  double sign = 1e300;
  int n = 0;
  for (double d : {0.01, 0.1, 1.0, 10.0, 100.0})
    for (double rho : {0.1, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      sign = std::min(sign, barycenter_axis_sign(th, d, rho, c));
      ++n;
    }
  o.detail << "xi centred " << g(xi0) << ", invariance " << g(inv) << ", gamma(0.01) " << g(gs) << ", |gamma(1e3) - 1| "
           << g(gl) << ", min <xi|y> " << g(sign) << " over " << n;
  o.require(xi0 == 0.0 && xig == 0.0, "xi = 0 exactly when centred");
  o.require(inv <= 1e-12, "scale invariance 1e-12");
  o.require(gs < 4 * 0.01, "gamma < 4 delta");
  o.require(gl < 0.05, "gamma within 0.05 of 1");
  o.require(n == 30 && sign > 0.0, "<xi|y> > 0 on 30 points");
  return o;
}

Outcome c10(Verifier& v) {
  Outcome o;
  const auto& cfg = v.config();
  const auto& adm = v.admissibility();
  const RegionScan& s = v.scan();
  const auto& c = v.coupling();
  const double thr = std::min({kShl2 / (4 * c.mu1), kShl2 / (4 * c.mu2), 2 * c.c_inf});
  std::vector<double> ss;
  for (int i = 0; i < 9; ++i) ss.push_back(i / 8.0);
  HomotopyClearance cl;
  LemmaReport h = homotopy_boundary_check(s, ss, &cl);
  o.detail << "V0 = " << g(cfg.V1.V0) << ", region (" << g(s.delta1) << ", " << g(s.delta2) << ", " << g(s.rbar)
           << "), K/c_inf " << g(s.K / c.c_inf) << ", margin " << g(thr - s.K) << ", clearances " << g(cl.h1) << " "
           << g(cl.h2) << " " << g(cl.h3);
  o.require(cfg.V1.kind == "power" && cfg.V1.s == 2.0 && cfg.V2.kind == "power" && cfg.V2.s == 2.0,
            "reference potential V0 (1 + r^2)^-2");
  o.require(adm.satisfied_A3 && adm.margin_A3 > 0.0, "smallness condition holds");
  o.require(s.found, "region found");
  o.require(s.max_gamma_h1 < 0.5 && s.min_gamma_h2 > 0.5 && s.boundary_sup < s.cbar, "region constraints");
  o.require(s.K < thr && thr - s.K > 0.0, "K below threshold");
  o.require(h.status == "pass" && cl.h1 > 0 && cl.h2 > 0 && cl.h3 > 0, "homotopy clearances");
  return o;
}

Outcome c11() {
  Outcome o;
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / ("hartree_acceptance_" + std::to_string(::getpid()));
  std::string bytes[2];
  for (int i = 0; i < 2; ++i) {
    fs::path out = base / std::to_string(i);
    std::string cmd = std::string("\"") + HARTREE_VERIFY_EXE + "\" --config \"" + HARTREE_CONFIG + "\" --seed 7 --out \"" +
                      out.string() + "\" run-all > /dev/null";
    int rc = std::system(cmd.c_str());
    o.require(rc == 0, "run-all exit status 0 (run " + std::to_string(i + 1) + ")");
    std::ifstream in(out / "report.json", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bytes[i] = ss.str();
  }
  std::error_code ec;
  fs::remove_all(base, ec);
  o.detail << "report.json " << bytes[0].size() << " bytes";
  o.require(!bytes[0].empty(), "report written");
  o.require(bytes[0] == bytes[1], "byte-identical report.json");
  return o;
}

}  // namespace

int main() {
  Verifier v(reference_config());
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants chain", c1},
      {"bubble certification", c2},
      {"algebraic identities", c3},
      {"ground pair energy", c4},
      {"ground state solver", c5},
      {"projection ordering", c6},
      {"vanishing limits", c7},
      {"nonlocal splitting", c8},
      {"barycenter", [&] { return c9(v); }},
      {"region and bounds", [&] { return c10(v); }},
      {"determinism", c11}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << ": "
              << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
