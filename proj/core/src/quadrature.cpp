#include "iwv/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace iwv {

double trapezoid(std::span<const double> values, double dx) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * dx;
}

namespace {

// Orthonormal Hermite recurrence for weight e^{-x^2}; returns h_n(x) and
// h_{n-1}(x).
void hermite_pair(int n, double x, double& hn, double& hnm1) {
  double p0 = std::pow(M_PI, -0.25);
  double p1 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p2 = p1;
    p1 = p0;
    p0 = x * std::sqrt(2.0 / (j + 1.0)) * p1 - std::sqrt(j / (j + 1.0)) * p2;
  }
  hn = p0;
  hnm1 = p1;
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Stroud-Secrest style initial guesses, largest root first.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double hn = 0.0, hnm1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      hermite_pair(n, z, hn, hnm1);
      const double deriv = std::sqrt(2.0 * n) * hnm1;
      const double dz = hn / deriv;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    hermite_pair(n, z, hn, hnm1);
    const double deriv = std::sqrt(2.0 * n) * hnm1;
    rule.nodes[i] = z;
    rule.weights[i] = 2.0 / (deriv * deriv);
    rule.nodes[n - 1 - i] = -z;
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussianAverage gaussian_average_rule(double stddev, int n) {
  if (!(stddev > 0.0)) throw std::invalid_argument("gaussian_average_rule: stddev must be > 0");
  const GaussHermiteRule gh = gauss_hermite(n);
  GaussianAverage avg;
  avg.abscissas.resize(gh.size());
  avg.weights.resize(gh.size());
  const double root2 = std::sqrt(2.0);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (std::size_t i = 0; i < gh.size(); ++i) {
    avg.abscissas[i] = root2 * stddev * gh.nodes[i];
    avg.weights[i] = gh.weights[i] * inv_sqrt_pi;
  }
  return avg;
}

}  // namespace iwv
