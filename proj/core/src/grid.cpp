#include "iwv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "iwv/errors.hpp"

namespace iwv {

GridSpec GridSpec::centered(double half_width, std::size_t n) {
  if (!(half_width > 0.0) || n < 2) {
    throw std::invalid_argument("GridSpec::centered: need half_width > 0 and n >= 2");
  }
  const double dx = 2.0 * half_width / static_cast<double>(n - 1);
  return {-half_width, dx, n};
}

double SampledDensity::integral() const {
  double acc = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) acc += trapezoid_weight(i, n, dx) * values[i];
  return acc;
}

double SampledDensity::mean() const {
  double acc = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) acc += trapezoid_weight(i, n, dx) * values[i] * x(i);
  return acc;
}

double SampledDensity::variance() const {
  const double m = mean();
  double acc = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x(i) - m;
    acc += trapezoid_weight(i, n, dx) * values[i] * d * d;
  }
  return acc;
}

double SampledDensity::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double SampledDensity::value_at(double xq) const {
  const double t = (xq - x0) / dx;
  if (t < 0.0 || t > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(t);
  if (i + 1 >= values.size()) return values.back();
  const double frac = t - static_cast<double>(i);
  return values[i] + (values[i + 1] - values[i]) * frac;
}

namespace {

// Geometric extrapolation from the last two samples of one tail. When the
// samples do not decay the tail cannot be extrapolated; charge one sample's
// worth of mass instead, which still trips the budget unless the edge value
// is already at a noise-floor level.
double one_tail(double inner, double outer, double dx) {
  if (outer <= 0.0) return 0.0;
  if (inner <= 0.0 || outer >= inner) return outer * dx;
  const double r = outer / inner;
  return outer * dx * r / (1.0 - r);
}

}  // namespace

double SampledDensity::tail_mass_estimate() const {
  if (values.size() < 2) return std::numeric_limits<double>::infinity();
  const double left = one_tail(values[1], values[0], dx);
  const double right = one_tail(values[values.size() - 2], values.back(), dx);
  return left + right;
}

SampledDensity make_density(const GridSpec& grid, std::span<const double> unnormalized,
                            double tail_budget) {
  if (grid.n != unnormalized.size() || grid.n < 2) {
    throw std::invalid_argument("make_density: grid/sample size mismatch");
  }
  SampledDensity d;
  d.x0 = grid.x0;
  d.dx = grid.dx;
  d.values.assign(unnormalized.begin(), unnormalized.end());
  for (double v : d.values) {
    if (!(v >= 0.0)) throw std::invalid_argument("make_density: negative density sample");
  }
  d.norm_raw = d.integral();
  if (!(d.norm_raw > 0.0) || !std::isfinite(d.norm_raw)) {
    throw std::invalid_argument("make_density: nonpositive or nonfinite integral");
  }
  for (double& v : d.values) v /= d.norm_raw;
  const double tail = d.tail_mass_estimate();
  if (!(tail < tail_budget)) {
    throw GridTooNarrowError("density tail mass " + std::to_string(tail) +
                             " exceeds budget " + std::to_string(tail_budget));
  }
  return d;
}

double ComplexField::norm() const {
  double acc = 0.0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) acc += trapezoid_weight(i, n, dx) * std::norm(values[i]);
  return acc;
}

double JointDensity::integral() const {
  double acc = 0.0;
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double wq = (nq == 1) ? 1.0 : trapezoid_weight(iq, nq, dq);
    double row = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      row += trapezoid_weight(ix, nx, dx) * values[iq * nx + ix];
    }
    acc += wq * row;
  }
  return acc;
}

double JointDensity::value_at(double xq, double qq) const {
  const double tx = (xq - x0) / dx;
  if (tx < 0.0 || tx > static_cast<double>(nx - 1)) return 0.0;
  const auto ix = std::min(static_cast<std::size_t>(tx), nx - 2);
  const double fx = tx - static_cast<double>(ix);
  auto interp_x = [&](std::size_t iq) {
    return values[iq * nx + ix] + (values[iq * nx + ix + 1] - values[iq * nx + ix]) * fx;
  };
  if (nq == 1) return interp_x(0);
  const double tq = (qq - q0) / dq;
  if (tq < 0.0 || tq > static_cast<double>(nq - 1)) return 0.0;
  const auto iq = std::min(static_cast<std::size_t>(tq), nq - 2);
  const double fq = tq - static_cast<double>(iq);
  return interp_x(iq) + (interp_x(iq + 1) - interp_x(iq)) * fq;
}

}  // namespace iwv
