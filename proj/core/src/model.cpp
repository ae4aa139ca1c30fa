#include "iwv/model.hpp"

#include <cmath>

#include "iwv/errors.hpp"

namespace iwv {

namespace {

// Single-rounding sine argument. Computing k*x + phi/2 with two roundings
// can land exactly on 0.0 for grid points near the dark point, which would
// put a spurious exact zero into the density.
inline double sine_argument(double k, double x, double phi) {
  return std::fma(k, x, 0.5 * phi);
}

}  // namespace

double postselected_amplitude(double x, const InterferometerParams& p) {
  p.validate();
  const GaussianMeter meter{p.sigma, 0.0};
  return std::sin(sine_argument(p.k, x, p.phi)) * meter.amplitude(x);
}

double postselection_probability(const InterferometerParams& p) {
  p.validate();
  const double a = p.k * p.k * p.sigma * p.sigma;
  // (1 - e^{-2a} cos phi)/2 rearranged to avoid cancellation at small a, phi.
  const double half = std::sin(0.5 * p.phi);
  return -0.5 * std::expm1(-2.0 * a) * std::cos(p.phi) + half * half;
}

double postselection_probability_iwv_approx(const InterferometerParams& p) {
  p.validate();
  return p.k * p.k * p.sigma * p.sigma;
}

double pdf_noiseless_value(double x, const InterferometerParams& p) {
  const double pf = postselection_probability(p);
  if (!(pf > 0.0)) {
    throw DegenerateParamsError("pdf_noiseless: postselection probability is zero (k = 0, phi = 0)");
  }
  const double s = std::sin(sine_argument(p.k, x, p.phi));
  const GaussianMeter meter{p.sigma, 0.0};
  return s * s * meter.intensity(x) / pf;
}

GridSpec default_noiseless_grid(const InterferometerParams& p) {
  // 12 sigma of Gaussian tail leaves ~1e-30 of mass before the sine
  // modulation; 2^14 points keep momentum-space work available.
  return GridSpec::centered(12.0 * p.sigma, std::size_t{1} << 14);
}

SampledDensity pdf_noiseless(const InterferometerParams& p, const GridSpec& grid) {
  p.validate();
  const double pf = postselection_probability(p);
  if (!(pf > 0.0)) {
    throw DegenerateParamsError("pdf_noiseless: postselection probability is zero (k = 0, phi = 0)");
  }
  const GaussianMeter meter{p.sigma, 0.0};
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double s = std::sin(sine_argument(p.k, x, p.phi));
    v[i] = s * s * meter.intensity(x);
  }
  return make_density(grid, v);
}

SampledDensity pdf_noiseless(const InterferometerParams& p) {
  return pdf_noiseless(p, default_noiseless_grid(p));
}

double mean_shift_exact(const InterferometerParams& p, const GridSpec& grid) {
  return pdf_noiseless(p, grid).mean();
}

double mean_shift_exact(const InterferometerParams& p) {
  return mean_shift_exact(p, default_noiseless_grid(p));
}

}  // namespace iwv
