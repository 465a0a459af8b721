#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <thread>

#include "hartree/errors.hpp"
#include "hartree/verifier.hpp"

namespace hartree {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  v.back() = b;
  return v;
}

using Key = std::pair<double, double>;

class SampleCache {
 public:
  explicit SampleCache(const ScanContext& ctx) : ctx_(ctx) {}

  // evaluates missing points in parallel, results in input order
  std::vector<ScanSample> get(const std::vector<Key>& pts) {
    std::vector<Key> todo;
    for (const Key& k : pts)
      if (!map_.count(k) && std::find(todo.begin(), todo.end(), k) == todo.end()) todo.push_back(k);
    const std::size_t nt = std::max(1u, std::thread::hardware_concurrency());
    std::vector<ScanSample> res(todo.size());
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < nt; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = t; i < todo.size(); i += nt) res[i] = scan_sample(ctx_, todo[i].first, todo[i].second);
      }));
    }
    for (auto& j : jobs) j.get();
    for (std::size_t i = 0; i < todo.size(); ++i) map_[todo[i]] = res[i];
    std::vector<ScanSample> out;
    out.reserve(pts.size());
    for (const Key& k : pts) out.push_back(map_.at(k));
    return out;
  }

 private:
  const ScanContext& ctx_;
  std::map<Key, ScanSample> map_;
};

std::vector<Key> keys(double delta, const std::vector<double>& rhos) {
  std::vector<Key> k;
  for (double r : rhos) k.emplace_back(delta, r);
  return k;
}

RegionScan evaluate_cached(SampleCache& cache, const ScanContext& ctx, const VerifierConfig& cfg, double d1, double d2,
                           double rbar) {
  RegionScan s;
  s.delta1 = d1;
  s.delta2 = d2;
  s.rbar = rbar;
  s.c_inf = ctx.cc->c_inf;
  s.cbar = ctx.cbar;
  s.c_star_lower = ctx.c_star_lower;
  s.threshold = std::min({ctx.cc->m1_inf, ctx.cc->m2_inf, 2.0 * ctx.cc->c_inf});
  if (!(d1 > 0.0 && d1 < 0.5 && d2 > 0.5 && rbar > 0.0)) {
    s.failing = "ordering delta1 < 1/2 < delta2, rbar > 0";
    return s;
  }
  const int n = cfg.boundary_points;
  const auto rhos = linspace(0.0, rbar, n);
  s.h1 = cache.get(keys(d1, rhos));
  s.far = cache.get(keys(d1, cfg.far_rhos));
  s.max_gamma_h1 = 0.0;
  for (const auto* v : {&s.h1, &s.far})
    for (const auto& x : *v) s.max_gamma_h1 = std::max(s.max_gamma_h1, x.gamma);
  if (!(s.max_gamma_h1 < 0.5)) {
    s.failing = "gamma below 1/2 at delta1";
    return s;
  }
  s.h2 = cache.get(keys(d2, rhos));
  s.min_gamma_h2 = 1e300;
  for (const auto& x : s.h2) s.min_gamma_h2 = std::min(s.min_gamma_h2, x.gamma);
  if (!(s.min_gamma_h2 > 0.5)) {
    s.failing = "gamma above 1/2 at delta2";
    return s;
  }
  std::vector<Key> h3;
  for (double d : logspace(d1, d2, n)) h3.emplace_back(d, rbar);
  s.h3 = cache.get(h3);
  s.boundary_sup = 0.0;
  for (const auto* v : {&s.h1, &s.h2, &s.h3})
    for (const auto& x : *v) s.boundary_sup = std::max(s.boundary_sup, x.i0);
  if (!(s.boundary_sup < s.cbar)) {
    s.failing = "boundary energy below cbar";
    return s;
  }
  std::vector<Key> in;
  for (double d : logspace(d1, d2, cfg.interior_deltas))
    for (double r : linspace(0.0, rbar, cfg.interior_rhos)) in.emplace_back(d, r);
  s.interior = cache.get(in);
  s.K = s.boundary_sup;
  for (const auto& x : s.interior) s.K = std::max(s.K, x.i0);
  s.found = true;
  return s;
}

void lambda_sweep(RegionScan& s, const ScanContext& ctx, const VerifierConfig& cfg) {
  const double k1 = ctx.cc->k1, k2 = ctx.cc->k2;
  std::vector<double> lams = cfg.lambda_sweep;
  std::sort(lams.begin(), lams.end(), std::greater<double>());
  for (double lam : lams) {
    LambdaRow r;
    r.lambda = lam;
    for (const auto* v : {&s.h1, &s.h2, &s.h3})
      for (const auto& x : *v) r.k_tilde = std::max(r.k_tilde, x.i_lam(lam, lam, k1, k2));
    r.s_tilde = r.k_tilde;
    for (const auto& x : s.interior) r.s_tilde = std::max(r.s_tilde, x.i_lam(lam, lam, k1, k2));
    r.gamma_ok = s.max_gamma_h1 < 0.5 && s.min_gamma_h2 > 0.5;  // barycenters ignore the projection
    r.boundary_ok = r.k_tilde < s.cbar;
    r.region_ok = r.s_tilde < s.threshold;
    r.feasible = r.gamma_ok && r.boundary_ok && r.region_ok;
    s.lambda_rows.push_back(r);
  }
  // rows run from large to small lambda: once feasible, every smaller lambda must be too
  bool seen = false;
  for (const auto& r : s.lambda_rows) {
    if (r.feasible && !seen) {
      seen = true;
      s.lambda_proxy = r.lambda;
    } else if (seen && !r.feasible) {
      s.lambda_monotone = false;
    }
  }
}

}  // namespace

double ScanSample::i_lam(double lam1, double lam2, double k1, double k2) const {
  const double A = a0 + (k1 * lam1 + k2 * lam2) * l2_mass;
  return 0.25 * A * A / b;
}

AdmissibilityReport check_A3(const Problem& prob, const ConstantsTable& t) {
  coupling_constants(prob.mu1, prob.mu2, prob.beta, prob.N);
  AdmissibilityReport r;
  const double mu1 = prob.mu1, mu2 = prob.mu2, b = prob.beta;
  const double den = 2.0 * b - mu1 - mu2;
  r.w1 = (b - mu2) / den;
  r.w2 = (b - mu1) / den;
  const double q = b * b - mu1 * mu2;
  r.m = std::min({std::sqrt(q / (mu1 * den)), std::sqrt(q / (mu2 * den)), std::sqrt(2.0)});
  const double p = 0.5 * prob.N;
  r.norm_V1 = prob.V1.grid() ? lp_norm(prob.V1, p) : 0.0;
  r.norm_V2 = prob.V2.grid() ? lp_norm(prob.V2, p) : 0.0;
  r.nonzero = r.norm_V1 > 0.0 || r.norm_V2 > 0.0;
  r.left_A3 = r.w1 * r.norm_V1 + r.w2 * r.norm_V2;
  r.right_A3 = (r.m - 1.0) * t.sobolev;
  r.margin_A3 = r.right_A3 - r.left_A3;
  r.left_C3 = r.left_A3 / std::sqrt(t.hls);
  r.right_C3 = (r.m - 1.0) * t.sobolev_hl;
  r.margin_C3 = r.right_C3 - r.left_C3;
  r.satisfied_A3 = r.nonzero && r.left_A3 > 0.0 && r.margin_A3 > 0.0;
  r.satisfied_C3 = r.nonzero && r.left_C3 > 0.0 && r.margin_C3 > 0.0;
  return r;
}

ThresholdChoice choose_a_and_cbar(const Problem& prob, const ConstantsTable& t, double c_star_lower,
                                  const std::string& convention) {
  AdmissibilityReport adm = check_A3(prob, t);
  double left, base;
  if (convention == "A3") {
    left = adm.left_A3;
    base = t.sobolev;
  } else if (convention == "C3") {
    left = adm.left_C3;
    base = t.sobolev_hl;
  } else {
    throw ParameterError("choose_a_and_cbar: convention must be A3 or C3");
  }
  const CouplingConstants cc = coupling_constants(prob.mu1, prob.mu2, prob.beta, prob.N);
  if (!(c_star_lower > cc.c_inf)) throw ParameterError("choose_a_and_cbar: c_star_lower must exceed c_inf");
  auto f = [&](double x) { return std::pow(2.0, -0.5 * (1.0 - x)) * adm.m * base - base; };
  ThresholdChoice c;
  c.a = 1.0 - 2.0 * std::log2(adm.m * base / (left + base));
  if (!(c.a > 0.0 && c.a < 1.0))
    throw AdmissibilityError("choose_a_and_cbar: a = " + std::to_string(c.a) + " outside (0, 1); smallness condition fails");
  c.f_increasing = f(1.0) > 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= 100; ++i) {
    double cur = f(i / 100.0);
    if (!(cur > prev)) c.f_increasing = false;
    prev = cur;
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < left ? lo : hi) = mid;
  }
  c.a_bisect = 0.5 * (lo + hi);
  c.c_inf = cc.c_inf;
  c.c_star_lower = c_star_lower;
  c.two_pow = std::pow(2.0, 1.0 - c.a) * cc.c_inf;
  c.cbar = 0.5 * (cc.c_inf + std::min(0.5 * (c_star_lower + cc.c_inf), c.two_pow));
  c.chain_min = std::min({cc.m1_inf, cc.m2_inf, 2.0 * cc.c_inf});
  c.chain_ok = c.two_pow <= c.chain_min * (1.0 + 1e-12);
  c.boundary = c.a > 1.0 - 1e-9;
  return c;
}

ScanSample scan_sample(const ScanContext& ctx, double delta, double rho) {
  Problem bare = *ctx.prob;
  bare.lambda1 = bare.lambda2 = 0.0;
  TrialScalars t = trial_projection_scalars(*ctx.profile, delta, rho, bare, *ctx.cc);
  Barycenter b = trial_barycenter(*ctx.profile, delta, rho, *ctx.cc);
  ScanSample s;
  s.delta = delta;
  s.rho = rho;
  s.gamma = b.gamma;
  s.xi = b.xi;
  const double ks = ctx.cc->k1 + ctx.cc->k2;
  s.a0 = ks * t.kinetic + t.v_term;
  s.b = ks * t.nonlocal;
  s.l2_mass = t.l2_mass;
  s.t0 = t.t0;
  s.i0 = t.i0;
  return s;
}

RegionScan evaluate_region(const ScanContext& ctx, const VerifierConfig& cfg, double delta1, double delta2,
                           double rbar) {
  SampleCache cache(ctx);
  RegionScan s = evaluate_cached(cache, ctx, cfg, delta1, delta2, rbar);
  if (s.found) lambda_sweep(s, ctx, cfg);
  return s;
}

RegionScan scan_region(const ScanContext& ctx, const VerifierConfig& cfg) {
  SampleCache cache(ctx);
  std::vector<double> d1s = cfg.delta1_candidates, d2s = cfg.delta2_candidates, rbs = cfg.rbar_candidates;
  std::sort(d1s.begin(), d1s.end(), std::greater<double>());
  std::sort(d2s.begin(), d2s.end());
  std::sort(rbs.begin(), rbs.end(), std::greater<double>());
  RegionScan best;
  best.failing = "no candidates";
  for (double d2 : d2s) {
    if (!(d2 > 0.5)) continue;
    if (!(cache.get({{d2, 0.0}})[0].gamma > 0.5)) {
      best.failing = "gamma above 1/2 at delta2";
      continue;
    }
    for (double rb : rbs) {
      if (!(cache.get({{d2, rb}})[0].gamma > 0.5)) continue;
      for (double d1 : d1s) {
        RegionScan s = evaluate_cached(cache, ctx, cfg, d1, d2, rb);
        if (s.found) {
          lambda_sweep(s, ctx, cfg);
          return s;
        }
        best = s;
        if (s.failing == "gamma below 1/2 at delta1") continue;  // smaller delta1 may help
        if (s.failing == "boundary energy below cbar") continue;
        break;
      }
    }
  }
  return best;
}

void LemmaReport::check(const std::string& name, double value, const std::string& op, double bound) {
  Row r{name, value, op, bound, false};
  if (op == "<") r.pass = value < bound;
  else if (op == "<=") r.pass = value <= bound;
  else if (op == ">") r.pass = value > bound;
  else if (op == ">=") r.pass = value >= bound;
  else if (op == "==") r.pass = value == bound;
  else throw ParameterError("LemmaReport: unknown comparison " + op);
  if (!std::isfinite(value)) r.pass = false;
  rows.push_back(r);
}

void LemmaReport::info(const std::string& name, double value) { rows.push_back(Row{name, value, "info", 0.0, true}); }

void LemmaReport::finish() {
  bool any_check = false, ok = true;
  for (const Row& r : rows) {
    if (r.op == "info") continue;
    any_check = true;
    ok = ok && r.pass;
  }
  status = !any_check ? "informational" : ok ? "pass" : "fail";
}

LemmaReport homotopy_boundary_check(const RegionScan& scan, const std::vector<double>& s_samples,
                                    HomotopyClearance* clearance) {
  LemmaReport rep;
  rep.id = "homotopy";
  rep.title = "Homotopy to the identity avoids (1/2, 0) on the region boundary";
  if (!scan.found) {
    rep.check("region available", 0.0, ">", 0.0);
    rep.notes.push_back("region scan failed: " + scan.failing);
    rep.finish();
    return rep;
  }
  Table t;
  t.name = "homotopy_boundary";
  t.columns = {"piece", "delta", "rho", "s", "first", "axial", "clearance"};
  HomotopyClearance c{1e300, 1e300, 1e300};
  for (double s : s_samples) {
    for (const auto& x : scan.h1) {
      double first = (1 - s) * x.delta + s * x.gamma;
      double cl = 0.5 - first;
      c.h1 = std::min(c.h1, cl);
      t.rows.push_back({1, x.delta, x.rho, s, first, (1 - s) * x.rho + s * x.xi, cl});
    }
    for (const auto& x : scan.h2) {
      double first = (1 - s) * x.delta + s * x.gamma;
      double cl = first - 0.5;
      c.h2 = std::min(c.h2, cl);
      t.rows.push_back({2, x.delta, x.rho, s, first, (1 - s) * x.rho + s * x.xi, cl});
    }
    for (const auto& x : scan.h3) {
      // <(1-s) y + s xi | y> / |y| with y on the axis, |y| = rbar
      double axial = (1 - s) * x.rho + s * x.xi;
      c.h3 = std::min(c.h3, axial);
      t.rows.push_back({3, x.delta, x.rho, s, (1 - s) * x.delta + s * x.gamma, axial, axial});
    }
  }
  rep.check("min clearance on delta = delta1", c.h1, ">", 0.0);
  rep.check("min clearance on delta = delta2", c.h2, ">", 0.0);
  rep.check("min axial clearance on |y| = rbar", c.h3, ">", 0.0);
  rep.info("s samples", static_cast<double>(s_samples.size()));
  rep.info("points per piece", static_cast<double>(scan.h1.size()));
  rep.tables.push_back(std::move(t));
  rep.finish();
  rep.notes.push_back(rep.status == "pass"
                          ? "degree one supported by sampled boundary non-vanishing (sampling, not a proof)"
                          : "sampled boundary hits (1/2, 0); degree argument not supported");
  if (clearance) *clearance = c;
  return rep;
}

}  // namespace hartree
