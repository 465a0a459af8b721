#pragma once

#include <vector>

#include "hartree/bubbles.hpp"
#include "hartree/radial_core.hpp"

namespace hartree {

// Parameters of the coupled system. An unset potential (null grid) means V = 0.
struct Problem {
  int N = 5;
  double mu1 = 1.0, mu2 = 1.0, beta = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  RadialFn V1, V2;

  double lambda() const { return std::max(lambda1, lambda2); }
  bool has_potential() const { return V1.grid() || V2.grid(); }
  void validate() const;

  static Problem limit(const CouplingConstants& cc);
};

// V0 (1 + r^2)^{-s} on the grid with its exact tail
RadialFn power_potential(const GridPtr& grid, double V0, double s);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double nonlocal_11 = 0.0;  // mu1 D(u+^2, u+^2)
  double nonlocal_22 = 0.0;  // mu2 D(v+^2, v+^2)
  double nonlocal_12 = 0.0;  // 2 beta D(u+^2, v+^2)
  double total = 0.0;
  double nehari_defect = 0.0;

  double nonlocal() const { return nonlocal_11 + nonlocal_22 + nonlocal_12; }
};

EnergyBreakdown energy_I(const Pair& p, const Problem& prob);
EnergyBreakdown energy_I_infty(const Pair& p, const CouplingConstants& cc);

struct Projection {
  double t = 0.0;
  Pair projected;
};

// t^2 = (kinetic + potential) / nonlocal
Projection nehari_project(const Pair& p, const Problem& prob);

struct TrialScalars {
  double t0 = 0.0;
  double t_lam = 0.0;
  double kinetic = 0.0;   // |grad theta_{delta,y}|^2
  double nonlocal = 0.0;  // D(theta^2, theta^2)
  double v_term = 0.0;    // int (k1 V1 + k2 V2) theta^2
  double l_term = 0.0;    // int (k1 lambda1 + k2 lambda2) theta^2
  double l2_mass = 0.0;   // int theta_{delta,y}^2
  double i0 = 0.0;        // I_0 at the N_0 projection
  double i_lam = 0.0;     // I at the N projection
};

TrialScalars trial_projection_scalars(const TrialProfile& profile, double delta, double rho, const Problem& prob,
                                      const CouplingConstants& cc);

struct Barycenter {
  double xi = 0.0;  // axial component
  double gamma = 0.0;
  double mass = 0.0;
};

Barycenter barycenter(const Pair& p, double mu1, double mu2, double beta);
Barycenter barycenter(const Pair& p, const CouplingConstants& cc);
// (sqrt(k1) theta_{delta,y}, sqrt(k2) theta_{delta,y})
Barycenter trial_barycenter(const TrialProfile& profile, double delta, double rho, const CouplingConstants& cc);

// <xi | y> for the trial member at offset rho > 0
double barycenter_axis_sign(const TrialProfile& profile, double delta, double rho, const CouplingConstants& cc);

struct PohozaevResult {
  double lambda_mass = 0.0;   // int lambda1 u^2 + lambda2 v^2
  double identity_gap = 0.0;  // |P| / (kinetic + |potential| + nonlocal)
  double pohozaev = 0.0;      // P, zero for solutions
};

PohozaevResult pohozaev_residual(const Pair& p, const Problem& prob);

struct TestFunction {
  RadialFn phi;
  double rho = 0.0;
};

// mollified bumps exp(-1/(1 - (r/d)^2)), d log-spaced in [d_min, d_max], offsets cycling
std::vector<TestFunction> default_test_set(int N = 5, int count = 20, double d_min = 0.05, double d_max = 20.0);

struct WeakResidual {
  double absolute = 0.0;  // max |<I'(p), phi>| / |phi|_H
  double relative = 0.0;  // absolute / |p|_H
};

// Each test function is applied to each component separately.
WeakResidual weak_residual(const Pair& p, const Problem& prob, const std::vector<TestFunction>& tests);

// Strong-form residual densities of the two equations.
std::pair<RadialFn, RadialFn> residual_densities(const Pair& p, const Problem& prob);

}  // namespace hartree
