#include "iwv/params.hpp"

#include <cmath>
#include <stdexcept>

namespace iwv {

void InterferometerParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("InterferometerParams: sigma must be > 0");
  if (!(k0 > 0.0)) throw std::invalid_argument("InterferometerParams: k0 must be > 0");
  if (!(ell1 >= 0.0) || !(ell2 >= 0.0)) {
    throw std::invalid_argument("InterferometerParams: ell1, ell2 must be >= 0");
  }
  if (!std::isfinite(k) || !std::isfinite(phi) || !std::isfinite(sigma) ||
      !std::isfinite(k0) || !std::isfinite(ell1) || !std::isfinite(ell2)) {
    throw std::invalid_argument("InterferometerParams: nonfinite field");
  }
}

bool InterferometerParams::in_inverse_weak_value_regime() const {
  const double ks = std::abs(k) * sigma;
  return std::abs(phi) < ks && ks < 1.0;
}

double GaussianMeter::amplitude(double x) const {
  const double d = x - center;
  return std::pow(2.0 * M_PI * sigma * sigma, -0.25) * std::exp(-d * d / (4.0 * sigma * sigma));
}

double GaussianMeter::intensity(double x) const {
  const double a = amplitude(x);
  return a * a;
}

void NoiseParams::validate() const {
  if (!(J >= 0.0) || !(Q >= 0.0)) {
    throw std::invalid_argument("NoiseParams: J and Q must be >= 0");
  }
}

}  // namespace iwv
