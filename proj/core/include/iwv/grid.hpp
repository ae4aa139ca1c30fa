#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace iwv {

/// Uniform 1-D grid with inclusive endpoints: x_i = x0 + i*dx, i = 0..n-1.
struct GridSpec {
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  /// Symmetric grid on [-half_width, +half_width] with n points.
  static GridSpec centered(double half_width, std::size_t n);

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double x_max() const { return x(n - 1); }
  bool is_power_of_two() const { return n != 0 && (n & (n - 1)) == 0; }
};

/// Validated probability density sampled on a uniform grid.
///
/// Invariants (enforced by make_density):
///   - all samples nonnegative,
///   - trapezoid integral equals 1 after normalization,
///   - estimated tail mass outside the grid below 1e-8.
struct SampledDensity {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<double> values;
  double norm_raw = 0.0;  ///< integral before normalization

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  GridSpec grid() const { return {x0, dx, values.size()}; }

  double integral() const;  ///< trapezoid integral of the stored samples
  double mean() const;
  double variance() const;
  double max_value() const;

  /// Linear interpolation between samples; zero outside the grid.
  double value_at(double x) const;

  /// Mass outside the grid estimated by geometric extrapolation of the two
  /// samples at each end.
  double tail_mass_estimate() const;
};

/// Builds a SampledDensity from unnormalized samples, normalizing by the
/// trapezoid integral. Throws GridTooNarrowError when the estimated tail
/// mass exceeds `tail_budget`, std::invalid_argument on negative samples or
/// a nonpositive integral.
SampledDensity make_density(const GridSpec& grid, std::span<const double> unnormalized,
                            double tail_budget = 1e-8);

/// Discretized transverse wavefunction. Grid size must be a power of two so
/// the field can move to momentum space and back.
struct ComplexField {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<std::complex<double>> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  GridSpec grid() const { return {x0, dx, values.size()}; }

  double norm() const;  ///< trapezoid integral of |values|^2
};

/// Joint density over a uniform (x, q) grid, row-major in q:
/// values[iq * nx + ix]. Normalized so the double trapezoid integral is 1.
struct JointDensity {
  double x0 = 0.0, dx = 0.0;
  double q0 = 0.0, dq = 0.0;
  std::size_t nx = 0, nq = 0;
  std::vector<double> values;

  double x(std::size_t ix) const { return x0 + static_cast<double>(ix) * dx; }
  double q(std::size_t iq) const { return q0 + static_cast<double>(iq) * dq; }
  double at(std::size_t ix, std::size_t iq) const { return values[iq * nx + ix]; }

  double integral() const;  ///< double trapezoid integral

  /// Bilinear interpolation; zero outside the grid. For a single-row joint
  /// (nq == 1, the Q = 0 short-circuit) interpolates in x only.
  double value_at(double x, double q) const;
};

/// Trapezoid weight for index i on an n-point grid (dx/2 at the ends).
inline double trapezoid_weight(std::size_t i, std::size_t n, double dx) {
  return (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
}

}  // namespace iwv
