#pragma once

namespace iwv {

/// All physical parameters of one interferometer configuration.
/// Units: centimeters and radians throughout.
struct InterferometerParams {
  double k = 0.0;      ///< momentum kick (1/cm)
  double phi = 0.0;    ///< relative phase (rad)
  double sigma = 1.0;  ///< initial Gaussian beam standard deviation (cm)
  double k0 = 1e5;     ///< optical wavenumber (1/cm)
  double ell1 = 0.0;   ///< source to symmetric point distance (cm)
  double ell2 = 0.0;   ///< symmetric point to detector distance (cm)

  /// Throws std::invalid_argument unless sigma > 0, k0 > 0, ell1 >= 0,
  /// ell2 >= 0 and all fields are finite.
  void validate() const;

  /// |phi| < |k|*sigma < 1. Advisory only: computations stay valid outside.
  bool in_inverse_weak_value_regime() const;

  double k_sigma() const { return k * sigma; }
};

/// Gaussian meter state: |<x|phi0>|^2 is normal with this standard deviation.
struct GaussianMeter {
  double sigma = 1.0;   ///< standard deviation of the intensity (cm)
  double center = 0.0;  ///< mean position (cm)

  /// Real amplitude (2 pi sigma^2)^(-1/4) exp(-(x-center)^2 / (4 sigma^2)),
  /// in 1/sqrt(cm).
  double amplitude(double x) const;
  /// |amplitude|^2, a normal density in x.
  double intensity(double x) const;
};

/// Technical-noise amplitudes.
struct NoiseParams {
  double J = 0.0;  ///< additive detector-position noise std (cm)
  double Q = 0.0;  ///< angular-jitter momentum std (1/cm)

  void validate() const;  ///< throws std::invalid_argument unless J, Q >= 0
};

}  // namespace iwv
