#include "hartree/quadrature.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "hartree/errors.hpp"

namespace hartree {

namespace {

GaussRule build_rule(int n) {
  std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> xs;
  std::vector<double> ws;
  for (double z : zeros) {
    double dp = boost::math::legendre_p_prime<double>(n, z);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    xs.push_back(z);
    ws.push_back(w);
    if (z != 0.0) {
      xs.push_back(-z);
      ws.push_back(w);
    }
  }
  std::vector<int> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return xs[a] < xs[b]; });
  GaussRule r;
  for (int i : order) {
    r.x.push_back(0.5 * (xs[i] + 1.0));
    r.w.push_back(0.5 * ws[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  if (n < 1) throw ParameterError("gauss_legendre: n < 1");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double unit_sphere_area(int N) {
  const double pi = boost::math::constants::pi<double>();
  return 2.0 * std::pow(pi, 0.5 * N) / boost::math::tgamma(0.5 * N);
}

std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace hartree
