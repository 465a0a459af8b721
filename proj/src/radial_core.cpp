#include "hartree/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hartree/errors.hpp"
#include "hartree/quadrature.hpp"

namespace hartree {

namespace {

constexpr int kIntervalGauss = 16;
constexpr int kTailGauss = 32;
constexpr int kMaxPanels = 48;

std::function<double(double)> full_eval(const RadialFn& f) {
  return [f](double r) { return f(r); };
}

bool same_radius(const RadialFn& f, const RadialFn& g) {
  return f.grid()->r_max() == g.grid()->r_max();
}

}  // namespace

void RadialGrid::Interval::basis(double r, double* out) const {
  for (int m = 0; m < n; ++m) {
    double p = 1.0;
    for (int l = 0; l < n; ++l)
      if (l != m) p *= (r - x[l]);
    out[m] = p / denom[m];
  }
  for (int m = n; m < kStencil; ++m) out[m] = 0.0;
}

GridPtr RadialGrid::make(int N, int M, double r_max, double stretch) {
  if (N < 5) throw ParameterError("make_grid: dimension N must be >= 5");
  if (M < 16) throw ParameterError("make_grid: need at least 16 nodes");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ParameterError("make_grid: R_max must be positive");
  if (!(stretch >= 1.0) || !std::isfinite(stretch)) throw ParameterError("make_grid: stretch must be >= 1");
  std::shared_ptr<RadialGrid> g(new RadialGrid());
  g->N_ = N;
  g->M_ = M;
  g->R_ = r_max;
  g->g_ = stretch;
  g->unit_.resize(M);
  if (stretch == 1.0) {
    for (int i = 0; i < M; ++i) g->unit_[i] = static_cast<double>(i + 1) / M;
  } else {
    const double lg = std::log(stretch);
    const double den = std::expm1(M * lg);
    for (int i = 0; i < M; ++i) g->unit_[i] = std::expm1((i + 1) * lg) / den;
    g->unit_[M - 1] = 1.0;
  }
  g->build();
  return g;
}

GridPtr RadialGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("grid scale factor must be positive");
  return make(N_, M_, R_ * factor, g_);
}

std::string RadialGrid::shape_key() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d|%d|%.17g", N_, M_, g_);
  return buf;
}

void RadialGrid::build() {
  sphere_ = unit_sphere_area(N_);
  r_.resize(M_);
  for (int i = 0; i < M_; ++i) r_[i] = R_ * unit_[i];

  auto ext = [&](int j, int& node, double& x) {
    if (j >= 0) {
      node = j;
      x = r_[j];
    } else {
      node = -j - 1;
      x = -r_[-j - 1];
    }
  };

  iv_.resize(M_);
  for (int k = 0; k < M_; ++k) {
    Interval& I = iv_[k];
    I.a = k == 0 ? 0.0 : r_[k - 1];
    I.b = r_[k];
    int start = k - kStencil / 2;
    I.n = kStencil;
    if (start + kStencil > M_) {
      I.n = 6;
      start = M_ - 6;
    }
    for (int m = 0; m < kStencil; ++m) {
      I.node[m] = 0;
      I.x[m] = 0.0;
      I.denom[m] = 1.0;
    }
    for (int m = 0; m < I.n; ++m) ext(start + m, I.node[m], I.x[m]);
    for (int m = 0; m < I.n; ++m) {
      double p = 1.0;
      for (int l = 0; l < I.n; ++l)
        if (l != m) p *= (I.x[m] - I.x[l]);
      I.denom[m] = p;
    }
  }

  w_.assign(M_, 0.0);
  auto mw = moment_weights(N_ - 1);
  for (int k = 0; k < M_; ++k)
    for (int m = 0; m < kStencil; ++m) w_[iv_[k].node[m]] += sphere_ * mw[k][m];

  diff_.resize(M_);
  for (int i = 0; i < M_; ++i) {
    Diff& d = diff_[i];
    std::vector<double> xs(kDiff);
    int start = std::min(i - kDiff / 2, M_ - kDiff);
    for (int m = 0; m < kDiff; ++m) ext(start + m, d.node[m], xs[m]);
    auto c = fd_weights(r_[i], xs, 2);
    for (int m = 0; m < kDiff; ++m) {
      d.d1[m] = c[1][m];
      d.d2[m] = c[2][m];
    }
    std::vector<double> x5(5);
    int s5 = std::min(i - 2, M_ - 5);
    for (int m = 0; m < 5; ++m) ext(s5 + m, d.node5[m], x5[m]);
    auto c5 = fd_weights(r_[i], x5, 1);
    for (int m = 0; m < 5; ++m) d.d1_5[m] = c5[1][m];
  }
}

std::vector<std::array<double, RadialGrid::kStencil>> RadialGrid::moment_weights(int power) const {
  const GaussRule& gl = gauss_legendre(kIntervalGauss);
  std::vector<std::array<double, kStencil>> out(M_);
  double b[kStencil];
  for (int k = 0; k < M_; ++k) {
    const Interval& I = iv_[k];
    const double h = I.b - I.a;
    out[k].fill(0.0);
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      double r = I.a + h * gl.x[q];
      I.basis(r, b);
      double wq = gl.w[q] * h * std::pow(r, power);
      for (int m = 0; m < kStencil; ++m) out[k][m] += wq * b[m];
    }
  }
  return out;
}

int RadialGrid::locate(double r) const {
  if (r <= 0.0) return 0;
  auto it = std::lower_bound(r_.begin(), r_.end(), r);
  return static_cast<int>(it - r_.begin());
}

double RadialGrid::interpolate(const std::vector<double>& v, double r) const {
  int k = locate(r);
  if (k >= M_) k = M_ - 1;
  const Interval& I = iv_[k];
  double b[kStencil];
  I.basis(r, b);
  double s = 0.0;
  for (int m = 0; m < kStencil; ++m) s += b[m] * v[I.node[m]];
  return s;
}

std::vector<double> RadialGrid::derivative(const std::vector<double>& v, bool low_order) const {
  std::vector<double> d(M_, 0.0);
  for (int i = 0; i < M_; ++i) {
    const Diff& D = diff_[i];
    double s = 0.0;
    if (low_order) {
      for (int m = 0; m < 5; ++m) s += D.d1_5[m] * v[D.node5[m]];
    } else {
      for (int m = 0; m < kDiff; ++m) s += D.d1[m] * v[D.node[m]];
    }
    d[i] = s;
  }
  return d;
}

std::vector<double> RadialGrid::second_derivative(const std::vector<double>& v) const {
  std::vector<double> d(M_, 0.0);
  for (int i = 0; i < M_; ++i) {
    const Diff& D = diff_[i];
    double s = 0.0;
    for (int m = 0; m < kDiff; ++m) s += D.d2[m] * v[D.node[m]];
    d[i] = s;
  }
  return d;
}

double Tail::operator()(double r) const {
  if (exact) return exact(r);
  if (c == 0.0) return 0.0;
  return c * std::pow(r, -p);
}

RadialFn::RadialFn(GridPtr grid, std::vector<double> values, Tail tail)
    : grid_(std::move(grid)), v_(std::move(values)), tail_(std::move(tail)) {
  if (!grid_) throw ParameterError("RadialFn: null grid");
  if (static_cast<int>(v_.size()) != grid_->size()) throw ParameterError("RadialFn: value count mismatch");
  for (double x : v_)
    if (!std::isfinite(x)) throw NumericalError("RadialFn: non-finite value");
}

RadialFn RadialFn::sample(GridPtr grid, const std::function<double(double)>& f, Tail tail) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->nodes()[i]);
  return RadialFn(std::move(grid), std::move(v), std::move(tail));
}

RadialFn RadialFn::zero(GridPtr grid) {
  std::vector<double> v(grid->size(), 0.0);
  return RadialFn(std::move(grid), std::move(v));
}

double RadialFn::operator()(double r) const {
  if (r <= grid_->r_max()) return grid_->interpolate(v_, r);
  return tail_(r);
}

RadialFn RadialFn::resampled(const GridPtr& grid) const {
  if (grid == grid_) return *this;
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = (*this)(grid->nodes()[i]);
  Tail t = tail_;
  const double Rold = grid_->r_max();
  if (grid->r_max() < Rold) {
    // beyond the new cutoff the old interpolant still carries information
    RadialFn self = *this;
    t.exact = [self](double r) { return self(r); };
    if (tail_.zero()) {
      bool any = false;
      for (int i = 0; i < grid_->size(); ++i)
        if (grid_->nodes()[i] > grid->r_max() && v_[i] != 0.0) any = true;
      if (!any) {
        t = Tail{};
      } else {
        t.p = grid->dim() + 2.0;
        t.c = 0.0;
      }
    }
  }
  return RadialFn(grid, std::move(v), std::move(t));
}

RadialFn RadialFn::with_tail(Tail tail) const { return RadialFn(grid_, v_, std::move(tail)); }

bool RadialFn::is_zero() const {
  if (!tail_.zero()) return false;
  for (double x : v_)
    if (x != 0.0) return false;
  return true;
}

RadialFn operator*(const RadialFn& f, const RadialFn& g0) {
  RadialFn g = g0.resampled(f.grid());
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values()[i] * g.values()[i];
  Tail t;
  const Tail& a = f.tail();
  const Tail& b = g0.tail();
  const bool g_beyond = !b.zero() || g0.grid()->r_max() > f.grid()->r_max();
  if (!a.zero() && g_beyond) {
    if (!b.zero()) {
      t.p = a.p + b.p;
      t.c = a.c * b.c;
    } else {
      t.p = a.p + f.grid()->dim();
    }
    if (a.exact || b.exact || !same_radius(f, g0)) {
      auto ge = full_eval(g0);
      t.exact = [a, ge](double r) { return a(r) * ge(r); };
    }
  }
  return RadialFn(f.grid(), std::move(v), std::move(t));
}

RadialFn operator+(const RadialFn& f, const RadialFn& g0) {
  RadialFn g = g0.resampled(f.grid());
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values()[i] + g.values()[i];
  const Tail& a = f.tail();
  const Tail& b = g.tail();
  Tail t;
  if (a.zero() && b.zero()) return RadialFn(f.grid(), std::move(v));
  if (a.zero()) {
    t = b;
  } else if (b.zero()) {
    t = a;
  } else {
    if (a.p < b.p) {
      t.p = a.p;
      t.c = a.c;
    } else if (b.p < a.p) {
      t.p = b.p;
      t.c = b.c;
    } else {
      t.p = a.p;
      t.c = a.c + b.c;
    }
    if (a.exact || b.exact) t.exact = [a, b](double r) { return a(r) + b(r); };
  }
  return RadialFn(f.grid(), std::move(v), std::move(t));
}

RadialFn operator*(double s, const RadialFn& f) {
  std::vector<double> v(f.values());
  for (double& x : v) x *= s;
  Tail t;
  if (s != 0.0 && !f.tail().zero()) {
    t.p = f.tail().p;
    t.c = s * f.tail().c;
    if (f.tail().exact) {
      Tail a = f.tail();
      t.exact = [a, s](double r) { return s * a(r); };
    }
  }
  return RadialFn(f.grid(), std::move(v), std::move(t));
}

RadialFn operator-(const RadialFn& f, const RadialFn& g) { return f + (-1.0) * g; }

RadialFn positive_part(const RadialFn& f) {
  std::vector<double> v(f.values());
  for (double& x : v) x = std::max(x, 0.0);
  Tail t;
  const Tail& a = f.tail();
  if (a.exact) {
    t.p = a.p;
    t.c = std::max(a.c, 0.0);
    t.exact = [a](double r) { return std::max(a(r), 0.0); };
  } else if (a.c > 0.0) {
    t = a;
  }
  return RadialFn(f.grid(), std::move(v), std::move(t));
}

RadialFn pow_abs(const RadialFn& f, double q) {
  std::vector<double> v(f.values());
  for (double& x : v) x = std::pow(std::fabs(x), q);
  Tail t;
  const Tail& a = f.tail();
  if (!a.zero()) {
    t.p = a.p * q;
    t.c = std::pow(std::fabs(a.c), q);
    if (a.exact) t.exact = [a, q](double r) { return std::pow(std::fabs(a(r)), q); };
  }
  return RadialFn(f.grid(), std::move(v), std::move(t));
}

Pair::Pair(RadialFn u_, RadialFn v_, double rho_) : u(std::move(u_)), v(std::move(v_)), rho(rho_) {
  if (!u.grid() || !v.grid()) throw ParameterError("Pair: missing component");
  if (u.grid() != v.grid() && u.grid()->nodes() != v.grid()->nodes())
    throw ParameterError("Pair: components must share a grid");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("Pair: offset must be finite and >= 0");
}

Pair Pair::scaled(double t) const { return Pair(t * u, t * v, rho); }

bool Pair::nonnegative() const {
  for (double x : u.values())
    if (x < 0.0) return false;
  for (double x : v.values())
    if (x < 0.0) return false;
  return true;
}

double tail_integral(const RadialGrid& grid, const std::function<double(double)>& F, double p_eff) {
  const int N = grid.dim();
  const double q = p_eff - N;
  if (!(q > 0.0)) throw DivergenceError("tail decay exponent does not exceed the dimension");
  const double R = grid.r_max();
  const GaussRule& gl = gauss_legendre(kTailGauss);
  double s = 0.0;
  for (std::size_t k = 0; k < gl.x.size(); ++k) {
    double r = R * std::pow(gl.x[k], -1.0 / q);
    s += gl.w[k] * F(r) * std::pow(r / R, p_eff);
  }
  return grid.sphere() * std::pow(R, N) / q * s;
}

double tail_integral(const RadialGrid& grid, const Tail& t) {
  if (t.zero()) return 0.0;
  const int N = grid.dim();
  if (!(t.p > N)) throw DivergenceError("divergent tail: exponent " + std::to_string(t.p) + " <= N");
  if (!t.exact) return t.c * grid.sphere() * std::pow(grid.r_max(), N - t.p) / (t.p - N);
  return tail_integral(grid, t.exact, t.p);
}

double integrate(const RadialFn& f) {
  const auto& w = f.grid()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values()[i];
  return s + tail_integral(*f.grid(), f.tail());
}

DirichletResult dirichlet_seminorm_checked(const RadialFn& f, double rel_tol) {
  const RadialGrid& g = *f.grid();
  auto dh = g.derivative(f.values());
  auto dl = g.derivative(f.values(), true);
  double sh = 0.0, sl = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    sh += g.weights()[i] * dh[i] * dh[i];
    sl += g.weights()[i] * dl[i] * dl[i];
  }
  double tail = 0.0;
  const Tail& t = f.tail();
  if (!t.zero()) {
    const double pe = 2.0 * (t.p + 1.0);
    if (!(pe > g.dim())) throw DivergenceError("dirichlet_seminorm: gradient tail not integrable");
    if (t.exact) {
      tail = tail_integral(
          g,
          [&t](double r) {
            const double h = 1e-4;
            double d = (t(r * (1 + h)) - t(r * (1 - h))) / (2 * r * h);
            return d * d;
          },
          pe);
    } else {
      tail = t.p * t.p * t.c * t.c * g.sphere() * std::pow(g.r_max(), g.dim() - pe) / (pe - g.dim());
    }
  }
  DirichletResult res;
  res.value = sh + tail;
  res.stencil_gap = res.value > 0.0 ? std::fabs(sh - sl) / res.value : 0.0;
  res.accuracy_warning = res.stencil_gap > rel_tol;
  return res;
}

double dirichlet_seminorm(const RadialFn& f) { return dirichlet_seminorm_checked(f).value; }

double lp_norm(const RadialFn& f, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be >= 1");
  double I = integrate(pow_abs(f, p));
  return std::pow(I, 1.0 / p);
}

double spherical_mean(const RadialFn& f, double rho, double s) {
  if (rho == 0.0) return f(s);
  if (s == 0.0) return f(rho);
  const RadialGrid& g = *f.grid();
  const int N = g.dim();
  const double lo = std::fabs(rho - s);
  const double hi = rho + s;
  std::vector<double> rb;
  {
    auto first = std::upper_bound(g.nodes().begin(), g.nodes().end(), lo);
    auto last = std::lower_bound(g.nodes().begin(), g.nodes().end(), hi);
    long n = last - first;
    long stride = std::max<long>(1, (n + kMaxPanels - 1) / kMaxPanels);
    for (auto it = first; it < last; it += stride) rb.push_back(*it);
    if (g.r_max() > lo && g.r_max() < hi) rb.push_back(g.r_max());
  }
  std::vector<double> th;
  th.push_back(0.0);
  th.push_back(M_PI);
  for (int k = 1; k < 6; ++k) th.push_back(M_PI * k / 6.0);
  for (double r : rb) {
    double c = (r * r - rho * rho - s * s) / (2.0 * rho * s);
    c = std::clamp(c, -1.0, 1.0);
    th.push_back(std::acos(c));
  }
  std::sort(th.begin(), th.end());
  const GaussRule& gl = gauss_legendre(8);
  double num = 0.0, den = 0.0;
  const double d2 = (rho - s) * (rho - s);
  for (std::size_t k = 0; k + 1 < th.size(); ++k) {
    const double a = th[k], h = th[k + 1] - th[k];
    if (h <= 0.0) continue;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      double t = a + h * gl.x[q];
      double ch = std::cos(0.5 * t);
      double r = std::sqrt(d2 + 4.0 * rho * s * ch * ch);
      double w = gl.w[q] * h * std::pow(std::sin(t), N - 2);
      num += w * f(r);
      den += w;
    }
  }
  return num / den;
}

double overlap(const RadialFn& f, const OffsetFn& h) {
  const RadialFn& g = h.profile;
  if (h.rho == 0.0) return integrate(g * f);
  const RadialGrid& G = *g.grid();
  double s = 0.0;
  for (int j = 0; j < G.size(); ++j) {
    double gj = g.values()[j];
    if (gj == 0.0) continue;
    s += G.weights()[j] * gj * spherical_mean(f, h.rho, G.nodes()[j]);
  }
  if (!g.tail().zero()) {
    double pe = g.tail().p + (f.tail().zero() ? G.dim() : f.tail().p);
    Tail tg = g.tail();
    RadialFn fc = f;
    double rho = h.rho;
    s += tail_integral(G, [tg, fc, rho](double r) { return tg(r) * spherical_mean(fc, rho, r); }, pe);
  }
  return s;
}

double bicenter_integral(const RadialFn& f, const RadialFn& g, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("bicenter_integral: rho must be >= 0");
  if (rho == 0.0) return integrate(f * g);
  return 0.5 * (overlap(f, OffsetFn{g, rho}) + overlap(g, OffsetFn{f, rho}));
}

AxisMoments axis_moment_integrals(const OffsetFn& h, double xi) {
  const RadialFn& g = h.profile;
  const RadialGrid& G = *g.grid();
  const int N = G.dim();
  const double two_star = 2.0 * N / (N - 2.0);
  const double rho = h.rho;
  RadialFn dens = pow_abs(g, two_star);

  const GaussRule& gl = gauss_legendre(16);
  std::vector<double> th, nu;
  const int panels = 4;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      double t = M_PI * (p + gl.x[q]) / panels;
      th.push_back(t);
      nu.push_back(gl.w[q] * std::pow(std::sin(t), N - 2));
    }
  }
  double nsum = 0.0;
  for (double x : nu) nsum += x;
  for (double& x : nu) x /= nsum;
  std::vector<double> ct(th.size()), st(th.size());
  for (std::size_t q = 0; q < th.size(); ++q) {
    ct[q] = std::cos(th[q]);
    st[q] = std::sin(th[q]);
  }

  auto means = [&](double s, double& ax, double& sp) {
    ax = 0.0;
    sp = 0.0;
    for (std::size_t q = 0; q < th.size(); ++q) {
      double xa = rho + s * ct[q];
      double xp = s * st[q];
      double nx = std::sqrt(xa * xa + xp * xp);
      double ua = xa / (1.0 + nx) - xi;
      double up = xp / (1.0 + nx);
      ax += nu[q] * xa / (1.0 + nx);
      sp += nu[q] * std::sqrt(ua * ua + up * up);
    }
  };

  AxisMoments m;
  for (int j = 0; j < G.size(); ++j) {
    double d = dens.values()[j];
    if (d == 0.0) continue;
    double w = G.weights()[j] * d;
    double ax, sp;
    means(G.nodes()[j], ax, sp);
    m.mass += w;
    m.axial_first_moment += w * ax;
    m.spread += w * sp;
  }
  if (!dens.tail().zero()) {
    const Tail& td = dens.tail();
    m.mass += tail_integral(G, td);
    m.axial_first_moment += tail_integral(
        G, [&](double r) { double ax, sp; means(r, ax, sp); return td(r) * ax; }, td.p);
    m.spread += tail_integral(
        G, [&](double r) { double ax, sp; means(r, ax, sp); return td(r) * sp; }, td.p);
  }
  if (rho == 0.0) m.axial_first_moment = 0.0;
  return m;
}

}  // namespace hartree
