#pragma once

#include <vector>

namespace hartree {

// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

// |S^{N-1}|, area of the unit sphere in R^N
double unit_sphere_area(int N);

// Finite difference weights (Fornberg). Returns c[k][j]: weight of node j for
// the k-th derivative at z, k = 0..m.
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& x, int m);

}  // namespace hartree
