#include "hartree/variational.hpp"

#include <cmath>

#include "hartree/errors.hpp"
#include "hartree/riesz.hpp"

namespace hartree {

namespace {

constexpr double kAlpha = 4.0;

bool present(const RadialFn& V) { return static_cast<bool>(V.grid()); }

// int V(|x|) f(|x - y|) dx with |y| = rho
double potential_overlap(const RadialFn& V, const RadialFn& f, double rho) {
  if (!present(V)) return 0.0;
  if (rho == 0.0) return integrate(f * V);
  return overlap(V, OffsetFn{f, rho});
}

struct Nonlocal {
  RadialFn cu, cv;  // conv(u+^2), conv(v+^2)
  double d11 = 0.0, d22 = 0.0, d12 = 0.0;
};

Nonlocal nonlocal_parts(const Pair& p) {
  Nonlocal n;
  RadialFn up = positive_part(p.u), vp = positive_part(p.v);
  RadialFn u2 = up * up, v2 = vp * vp;
  n.cu = riesz_convolve(u2, kAlpha);
  n.cv = riesz_convolve(v2, kAlpha);
  n.d11 = integrate(u2 * n.cu);
  n.d22 = integrate(v2 * n.cv);
  n.d12 = 0.5 * (integrate(v2 * n.cu) + integrate(u2 * n.cv));
  return n;
}

double l2sq(const RadialFn& f) { return integrate(f * f); }

double potential_energy(const Pair& p, const Problem& prob) {
  double s = 0.0;
  if (prob.lambda1 != 0.0) s += prob.lambda1 * l2sq(p.u);
  if (prob.lambda2 != 0.0) s += prob.lambda2 * l2sq(p.v);
  if (present(prob.V1)) s += potential_overlap(prob.V1, p.u * p.u, p.rho);
  if (present(prob.V2)) s += potential_overlap(prob.V2, p.v * p.v, p.rho);
  return s;
}

RadialFn neg_laplacian(const RadialFn& f) {
  const RadialGrid& g = *f.grid();
  auto d1 = g.derivative(f.values());
  auto d2 = g.second_derivative(f.values());
  std::vector<double> out(g.size());
  for (int i = 0; i < g.size(); ++i) out[i] = -d2[i] - (g.dim() - 1) * d1[i] / g.nodes()[i];
  return RadialFn(f.grid(), std::move(out));
}

// r u u' with the tail induced by a power tail of u
RadialFn radial_virial(const RadialFn& u) {
  const RadialGrid& g = *u.grid();
  auto d = g.derivative(u.values());
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = g.nodes()[i] * u.values()[i] * d[i];
  Tail t;
  const Tail& a = u.tail();
  if (!a.zero()) {
    t.p = 2.0 * a.p;
    t.c = -a.p * a.c * a.c;
    if (a.exact) {
      t.exact = [a](double r) {
        const double h = 1e-4;
        double du = (a(r * (1 + h)) - a(r * (1 - h))) / (2 * h);
        return a(r) * du;
      };
    }
  }
  return RadialFn(u.grid(), std::move(v), std::move(t));
}

}  // namespace

void Problem::validate() const {
  if (N < 5) throw ParameterError("Problem: N must be >= 5");
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw ParameterError("Problem: mu1, mu2 must be positive");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw ParameterError("Problem: lambda_j must be >= 0");
  for (const RadialFn* V : {&V1, &V2}) {
    if (!present(*V)) continue;
    if (V->grid()->dim() != N) throw ParameterError("Problem: potential grid dimension mismatch");
    for (double x : V->values())
      if (x < 0.0) throw ParameterError("Problem: potentials must be nonnegative");
    lp_norm(*V, 0.5 * N);  // throws on a divergent tail
  }
}

Problem Problem::limit(const CouplingConstants& cc) {
  Problem p;
  p.N = cc.N;
  p.mu1 = cc.mu1;
  p.mu2 = cc.mu2;
  p.beta = cc.beta;
  return p;
}

RadialFn power_potential(const GridPtr& grid, double V0, double s) {
  auto f = [V0, s](double r) { return V0 * std::pow(1.0 + r * r, -s); };
  return RadialFn::sample(grid, f, Tail{2.0 * s, V0, f});
}

EnergyBreakdown energy_I(const Pair& p, const Problem& prob) {
  EnergyBreakdown e;
  e.kinetic = dirichlet_seminorm(p.u) + dirichlet_seminorm(p.v);
  e.potential = potential_energy(p, prob);
  Nonlocal n = nonlocal_parts(p);
  e.nonlocal_11 = prob.mu1 * n.d11;
  e.nonlocal_22 = prob.mu2 * n.d22;
  e.nonlocal_12 = 2.0 * prob.beta * n.d12;
  const double A = e.kinetic + e.potential;
  e.total = 0.5 * A - 0.25 * e.nonlocal();
  e.nehari_defect = A - e.nonlocal();
  return e;
}

EnergyBreakdown energy_I_infty(const Pair& p, const CouplingConstants& cc) {
  return energy_I(p, Problem::limit(cc));
}

Projection nehari_project(const Pair& p, const Problem& prob) {
  EnergyBreakdown e = energy_I(p, prob);
  if (!(e.nonlocal() > 0.0)) throw NumericalError("nehari_project: positive parts vanish, projection undefined");
  Projection pr;
  pr.t = std::sqrt((e.kinetic + e.potential) / e.nonlocal());
  pr.projected = p.scaled(pr.t);
  return pr;
}

TrialScalars trial_projection_scalars(const TrialProfile& profile, double delta, double rho, const Problem& prob,
                                      const CouplingConstants& cc) {
  OffsetFn h = trial_member(profile, delta, rho);
  RadialFn sq = h.profile * h.profile;
  TrialScalars s;
  // both energies are dilation and translation invariant
  s.kinetic = profile.kinetic;
  s.nonlocal = profile.nonlocal;
  s.l2_mass = integrate(sq);
  if (present(prob.V1)) s.v_term += cc.k1 * potential_overlap(prob.V1, sq, rho);
  if (present(prob.V2)) s.v_term += cc.k2 * potential_overlap(prob.V2, sq, rho);
  s.l_term = (cc.k1 * prob.lambda1 + cc.k2 * prob.lambda2) * s.l2_mass;
  const double ks = cc.k1 + cc.k2;
  const double A0 = ks * s.kinetic + s.v_term;
  const double Al = A0 + s.l_term;
  const double B = ks * s.nonlocal;
  s.t0 = std::sqrt(A0 / B);
  s.t_lam = std::sqrt(Al / B);
  s.i0 = 0.25 * s.t0 * s.t0 * A0;
  s.i_lam = 0.25 * s.t_lam * s.t_lam * Al;
  return s;
}

Barycenter barycenter(const Pair& p, double mu1, double mu2, double beta) {
  const int N = p.grid()->dim();
  const double q = 2.0 * N / (N - 2.0);
  RadialFn up = positive_part(p.u), vp = positive_part(p.v);
  const auto& uv = up.values();
  const auto& vv = vp.values();
  std::vector<double> h(uv.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    double d = mu1 * std::pow(uv[i], q) + 2.0 * beta * std::pow(uv[i] * vv[i], 0.5 * q) + mu2 * std::pow(vv[i], q);
    h[i] = std::pow(std::max(d, 0.0), 1.0 / q);
  }
  Tail t;
  if (!up.tail().zero() || !vp.tail().zero()) {
    Tail a = up.tail(), b = vp.tail();
    t.p = std::min(a.zero() ? 1e300 : a.p, b.zero() ? 1e300 : b.p);
    t.exact = [a, b, mu1, mu2, beta, q](double r) {
      double x = a(r), y = b(r);
      double d = mu1 * std::pow(x, q) + 2.0 * beta * std::pow(x * y, 0.5 * q) + mu2 * std::pow(y, q);
      return std::pow(std::max(d, 0.0), 1.0 / q);
    };
    t.c = t.exact(p.grid()->r_max()) * std::pow(p.grid()->r_max(), t.p);
  }
  OffsetFn dens{RadialFn(p.grid(), std::move(h), std::move(t)), p.rho};
  AxisMoments m0 = axis_moment_integrals(dens, 0.0);
  if (!(m0.mass > 0.0)) throw NumericalError("barycenter: zero density");
  Barycenter b;
  b.mass = m0.mass;
  b.xi = m0.axial_first_moment / m0.mass;
  AxisMoments m = axis_moment_integrals(dens, b.xi);
  b.gamma = m.spread / m.mass;
  return b;
}

Barycenter barycenter(const Pair& p, const CouplingConstants& cc) { return barycenter(p, cc.mu1, cc.mu2, cc.beta); }

Barycenter trial_barycenter(const TrialProfile& profile, double delta, double rho, const CouplingConstants& cc) {
  OffsetFn h = trial_member(profile, delta, rho);
  return barycenter(Pair(std::sqrt(cc.k1) * h.profile, std::sqrt(cc.k2) * h.profile, rho), cc);
}

double barycenter_axis_sign(const TrialProfile& profile, double delta, double rho, const CouplingConstants& cc) {
  if (!(rho > 0.0)) throw ParameterError("barycenter_axis_sign: rho must be positive");
  return trial_barycenter(profile, delta, rho, cc).xi * rho;
}

PohozaevResult pohozaev_residual(const Pair& p, const Problem& prob) {
  PohozaevResult res;
  if (p.rho != 0.0 && prob.has_potential())
    throw ParameterError("pohozaev_residual: translated pairs need V = 0");
  const int N = p.grid()->dim();
  const double K = dirichlet_seminorm(p.u) + dirichlet_seminorm(p.v);
  const double Lu = prob.lambda1 != 0.0 ? prob.lambda1 * l2sq(p.u) : 0.0;
  const double Lv = prob.lambda2 != 0.0 ? prob.lambda2 * l2sq(p.v) : 0.0;
  res.lambda_mass = Lu + Lv;
  // -1/2 int (N V + r V') u^2 = int V r u u'
  double vir = 0.0, pot = 0.0;
  if (present(prob.V1)) {
    vir += integrate(radial_virial(p.u) * prob.V1);
    pot += integrate((p.u * p.u) * prob.V1);
  }
  if (present(prob.V2)) {
    vir += integrate(radial_virial(p.v) * prob.V2);
    pot += integrate((p.v * p.v) * prob.V2);
  }
  Nonlocal n = nonlocal_parts(p);
  const double B = prob.mu1 * n.d11 + prob.mu2 * n.d22 + 2.0 * prob.beta * n.d12;
  const double c = 0.5 * (N - 2);
  res.pohozaev = -c * K + vir - 0.5 * N * res.lambda_mass + c * B;
  const double scale = K + std::fabs(pot) + res.lambda_mass + B;
  res.identity_gap = scale > 0.0 ? std::fabs(res.pohozaev) / scale : 0.0;
  return res;
}

std::vector<TestFunction> default_test_set(int N, int count, double d_min, double d_max) {
  static const double offsets[3] = {0.0, 1.0, 5.0};
  std::vector<TestFunction> out;
  for (int k = 0; k < count; ++k) {
    double d = count == 1 ? d_min : d_min * std::pow(d_max / d_min, static_cast<double>(k) / (count - 1));
    auto g = RadialGrid::make(N, 128, d, 1.0);
    auto phi = RadialFn::sample(g, [d](double r) {
      double x = r / d;
      return x < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    });
    out.push_back(TestFunction{std::move(phi), offsets[k % 3]});
  }
  return out;
}

std::pair<RadialFn, RadialFn> residual_densities(const Pair& p, const Problem& prob) {
  Nonlocal n = nonlocal_parts(p);
  RadialFn up = positive_part(p.u), vp = positive_part(p.v);
  auto dens = [&](const RadialFn& w, const RadialFn& wp, const RadialFn& V, double lam, double mu, const RadialFn& self,
                  const RadialFn& other) {
    RadialFn r = neg_laplacian(w);
    std::vector<double> v(r.values());
    const auto& g = *w.grid();
    for (int i = 0; i < g.size(); ++i) {
      double pot = lam + (present(V) ? V(g.nodes()[i]) : 0.0);
      double nl = mu * self.values()[i] + prob.beta * other.values()[i];
      v[i] += pot * w.values()[i] - nl * wp.values()[i];
    }
    return RadialFn(w.grid(), std::move(v));
  };
  return {dens(p.u, up, prob.V1, prob.lambda1, prob.mu1, n.cu, n.cv),
          dens(p.v, vp, prob.V2, prob.lambda2, prob.mu2, n.cv, n.cu)};
}

WeakResidual weak_residual(const Pair& p, const Problem& prob, const std::vector<TestFunction>& tests) {
  WeakResidual res;
  if (p.u.is_zero() && p.v.is_zero()) return res;
  if (p.rho != 0.0 && prob.has_potential()) throw ParameterError("weak_residual: translated pairs need V = 0");
  auto [Ru, Rv] = residual_densities(p, prob);
  for (const TestFunction& tf : tests) {
    const RadialFn sq = tf.phi * tf.phi;
    const double grad = dirichlet_seminorm(tf.phi);
    const double l2 = integrate(sq);
    OffsetFn h{tf.phi, tf.rho};
    for (int comp = 0; comp < 2; ++comp) {
      const RadialFn& R = comp == 0 ? Ru : Rv;
      const RadialFn& V = comp == 0 ? prob.V1 : prob.V2;
      const double lam = comp == 0 ? prob.lambda1 : prob.lambda2;
      double norm2 = grad + lam * l2 + potential_overlap(V, sq, tf.rho);
      double val = std::fabs(overlap(R, h));
      res.absolute = std::max(res.absolute, val / std::sqrt(norm2));
    }
  }
  const double pn = std::sqrt(dirichlet_seminorm(p.u) + dirichlet_seminorm(p.v) + potential_energy(p, prob));
  res.relative = pn > 0.0 ? res.absolute / pn : 0.0;
  return res;
}

}  // namespace hartree
