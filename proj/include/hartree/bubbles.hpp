#pragma once

#include "hartree/radial_core.hpp"
#include "hartree/riesz.hpp"

namespace hartree {

// C_N from C^2 |grad u1|^2 = C^4 D(u1^2, u1^2), u1 = (1 + r^2)^{-(N-2)/2},
// evaluated on the given grid.
double bubble_constant(int N, const GridPtr& grid);
// same on the default grid (N, 400, 40, 1.02); cached per N
double bubble_constant(int N);

GridPtr default_grid(int N = 5);

struct Bubble {
  double delta = 1.0;
  double rho = 0.0;
  int N = 5;
  double C = 0.0;

  double operator()(double r) const;  // value at distance r from the center
  RadialFn profile(const GridPtr& grid) const;
  OffsetFn offset(const GridPtr& grid) const { return OffsetFn{profile(grid), rho}; }
};

Bubble make_bubble(double delta, double rho, int N, double C);
Bubble make_bubble(double delta, double rho = 0.0, int N = 5);

struct CouplingConstants {
  int N = 5;
  double mu1 = 0.0, mu2 = 0.0, beta = 0.0;
  double k1 = 0.0, k2 = 0.0;
  double shl2 = 0.0;  // S_HL^2
  double c_inf = 0.0;
  double m1_inf = 0.0, m2_inf = 0.0;
  double identity_gap = 0.0;  // |mu1 k1^2 + mu2 k2^2 + 2 beta k1 k2 - (k1 + k2)|
};

CouplingConstants coupling_constants(double mu1, double mu2, double beta, int N = 5);

struct QuotientInfimum {
  double t_star = 0.0;
  double value = 0.0;
  double brute_t = 0.0;
  double brute_value = 0.0;
};

// inf over t >= 0 of (1 + t)^2 / (mu1 t^2 + 2 beta t + mu2)
QuotientInfimum quotient_infimum(double mu1, double mu2, double beta);

// (sqrt(k1) U, sqrt(k2) U) with U = U_{delta, rho}
Pair ground_pair(double delta, double rho, const CouplingConstants& cc, const GridPtr& grid);

struct TrialOptions {
  int M = 400;
  double stretch = 1.01;
  int mollify_cells = 5;
  int max_iterations = 12;
  double shrink = 0.8;  // eps factor per enlargement step
};

struct TrialProfile {
  GridPtr grid;  // radius 1
  RadialFn theta;
  int N = 5;
  double eps = 0.0;        // scale of the truncated bubble
  double amplitude = 0.0;  // Nehari rescale factor
  double kinetic = 0.0;    // |grad theta|^2
  double nonlocal = 0.0;   // D(theta^2, theta^2)
  double sigma = 0.0;      // I_inf(sqrt(k1) theta, sqrt(k2) theta)
  double c_inf = 0.0;
  double cbar = 0.0;
  double l2star = 0.0;
  int iterations = 0;

  double operator()(double r) const { return r >= 1.0 ? 0.0 : theta(r); }
};

TrialProfile make_trial_profile(double support_fraction, const CouplingConstants& cc, double cbar,
                                const TrialOptions& opt = {});

// theta_{delta,y} = delta^{-(N-2)/2} theta((x - y)/delta)
OffsetFn trial_member(const TrialProfile& profile, double delta, double rho);

}  // namespace hartree
