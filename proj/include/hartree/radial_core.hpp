#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hartree {

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

// Geometric radial grid on (0, R] with product-integration weights.
//
// Node i sits at r_i = h0 (g^{i+1} - 1)/(g - 1), so r_{M-1} = R. Interval k is
// [r_{k-1}, r_k] with r_{-1} = 0. Each interval carries a centered 8-node
// Lagrange stencil (6 one-sided nodes at the outer end, which keeps the weights
// positive); stencils reaching below the origin use mirrored nodes -r_j, which
// is exact for even extensions of radial profiles.
class RadialGrid {
 public:
  static constexpr int kStencil = 8;
  static constexpr int kDiff = 9;

  struct Interval {
    double a = 0.0;
    double b = 0.0;
    int n = kStencil;
    std::array<int, kStencil> node{};     // grid node whose value feeds basis j
    std::array<double, kStencil> x{};     // signed abscissa of basis j
    std::array<double, kStencil> denom{};
    void basis(double r, double* out) const;
  };

  static GridPtr make(int N, int M, double r_max, double stretch);

  GridPtr scaled(double factor) const;

  int dim() const { return N_; }
  int size() const { return M_; }
  double r_max() const { return R_; }
  double stretch() const { return g_; }
  double sphere() const { return sphere_; }
  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<Interval>& intervals() const { return iv_; }
  // unit-radius node fractions; grids sharing them share kernel tables
  const std::vector<double>& unit_nodes() const { return unit_; }
  std::string shape_key() const;

  // interval containing r in [0, R]; size() when r > R
  int locate(double r) const;
  double interpolate(const std::vector<double>& v, double r) const;
  std::vector<double> derivative(const std::vector<double>& v, bool low_order = false) const;
  std::vector<double> second_derivative(const std::vector<double>& v) const;

  // per-interval weights of the stencil values for the integrand f(r) r^power
  std::vector<std::array<double, kStencil>> moment_weights(int power) const;

 private:
  RadialGrid() = default;
  void build();

  int N_ = 0;
  int M_ = 0;
  double R_ = 0.0;
  double g_ = 1.0;
  double sphere_ = 0.0;
  std::vector<double> unit_;
  std::vector<double> r_;
  std::vector<double> w_;
  std::vector<Interval> iv_;
  struct Diff {
    std::array<int, kDiff> node{};
    std::array<double, kDiff> d1{};
    std::array<double, kDiff> d2{};
    std::array<int, 5> node5{};
    std::array<double, 5> d1_5{};
  };
  std::vector<Diff> diff_;
};

// Asymptotic model f(r) ~ c r^{-p} beyond R. When `exact` is set it gives the
// true values for r > R and c, p describe its leading decay.
struct Tail {
  double p = 0.0;
  double c = 0.0;
  std::function<double(double)> exact;

  bool zero() const { return c == 0.0 && !exact; }
  double operator()(double r) const;

  static Tail power(double p, double c) { return Tail{p, c, {}}; }
};

class RadialFn {
 public:
  RadialFn() = default;
  RadialFn(GridPtr grid, std::vector<double> values, Tail tail = {});

  static RadialFn sample(GridPtr grid, const std::function<double(double)>& f, Tail tail = {});
  static RadialFn zero(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  const Tail& tail() const { return tail_; }
  double operator()(double r) const;

  RadialFn resampled(const GridPtr& grid) const;
  RadialFn with_tail(Tail tail) const;
  bool is_zero() const;

 private:
  GridPtr grid_;
  std::vector<double> v_;
  Tail tail_;
};

RadialFn operator*(const RadialFn& f, const RadialFn& g);
RadialFn operator+(const RadialFn& f, const RadialFn& g);
RadialFn operator-(const RadialFn& f, const RadialFn& g);
RadialFn operator*(double a, const RadialFn& f);
RadialFn positive_part(const RadialFn& f);
RadialFn pow_abs(const RadialFn& f, double q);

// A radial profile translated by a distance rho along a fixed axis.
struct OffsetFn {
  RadialFn profile;
  double rho = 0.0;
};

// Two-component state; both components share the grid and the offset.
struct Pair {
  RadialFn u;
  RadialFn v;
  double rho = 0.0;

  Pair() = default;
  Pair(RadialFn u_, RadialFn v_, double rho_ = 0.0);
  const GridPtr& grid() const { return u.grid(); }
  Pair scaled(double t) const;
  bool nonnegative() const;
};

// Integral over [R, inf) of F(r) |S^{N-1}| r^{N-1} dr for F ~ r^{-p_eff}.
double tail_integral(const RadialGrid& grid, const std::function<double(double)>& F, double p_eff);
double tail_integral(const RadialGrid& grid, const Tail& t);

double integrate(const RadialFn& f);

struct DirichletResult {
  double value = 0.0;
  bool accuracy_warning = false;
  double stencil_gap = 0.0;
};
DirichletResult dirichlet_seminorm_checked(const RadialFn& f, double rel_tol = 1e-4);
double dirichlet_seminorm(const RadialFn& f);

double lp_norm(const RadialFn& f, double p);

// Mean of f(|x|) over the sphere |x - y| = s with |y| = rho.
double spherical_mean(const RadialFn& f, double rho, double s);

// Integral of f(|x|) h(x) dx, quadrature over the grid of h's profile.
double overlap(const RadialFn& f, const OffsetFn& h);

double bicenter_integral(const RadialFn& f, const RadialFn& g, double rho);

struct AxisMoments {
  double mass = 0.0;
  double axial_first_moment = 0.0;
  double spread = 0.0;
};
AxisMoments axis_moment_integrals(const OffsetFn& h, double xi_guess);

}  // namespace hartree
