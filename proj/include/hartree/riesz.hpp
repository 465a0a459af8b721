#pragma once

#include "hartree/radial_core.hpp"

namespace hartree {

// C(N, alpha) in the Hardy-Littlewood-Sobolev inequality.
double hls_constant(int N, double alpha);

// K(r, s) = integral over S^{N-1} of |r e_1 - s w|^{-alpha} dw.
double angular_kernel(double alpha, double r, double s, int N);

// (|x|^{-alpha} * f) on the grid of f. Tail of the result is (int f) r^{-alpha}.
RadialFn riesz_convolve(const RadialFn& f, double alpha);

// D(f, g) = int int f(x) g(y) |x - y|^{-alpha} dx dy, symmetrized.
double double_energy(const RadialFn& f, const RadialFn& g, double alpha);

// Best Sobolev constant, closed form (Aubin-Talenti).
double sobolev_constant(int N);

// Rayleigh quotient |grad u|^2 / |u|_{2*}^2 of the discretized bubble of scale delta.
double sobolev_rayleigh(const GridPtr& grid, double delta = 1.0);

struct ConstantsTable {
  int N = 5;
  double hls = 0.0;          // C(N, 4)
  double sobolev = 0.0;      // S
  double sobolev_hl = 0.0;   // S_HL = C(N,4)^{-1/2} S
  double bubble_norm = 0.0;  // C_N
  double sphere = 0.0;       // |S^{N-1}|
};

ConstantsTable constants_table(int N, double bubble_norm);

}  // namespace hartree
