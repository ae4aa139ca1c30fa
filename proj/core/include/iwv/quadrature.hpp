#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace iwv {

/// Trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double dx);

/// Gauss-Hermite rule for weight exp(-t^2) on (-inf, inf):
/// integral f(t) e^{-t^2} dt ~= sum_i weights[i] f(nodes[i]).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Nodes and weights by Newton iteration on the orthonormal Hermite
/// recurrence. n up to a few hundred.
GaussHermiteRule gauss_hermite(int n);

/// Abscissas and normalized weights for averaging over a zero-mean Gaussian
/// of standard deviation `stddev`: E[f] ~= sum_i w[i] f(x[i]), sum w = 1.
struct GaussianAverage {
  std::vector<double> abscissas;
  std::vector<double> weights;
};
GaussianAverage gaussian_average_rule(double stddev, int n);

}  // namespace iwv
