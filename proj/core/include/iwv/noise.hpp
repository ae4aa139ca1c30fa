#pragma once

#include <memory>

#include "iwv/fft.hpp"
#include "iwv/grid.hpp"
#include "iwv/params.hpp"

namespace iwv {

/// Detector density under additive Gaussian position noise of std J, at one
/// point. Closed form: a Gaussian envelope of variance J^2 + sigma^2 times
/// (1 - cos[2 k s sigma^2/(J^2+sigma^2) + phi] exp[-2 J^2 k^2 sigma^2/(J^2+sigma^2)]),
/// divided by 2 p_f so it integrates to 1 (the raw expression integrates to
/// 2 p_f). J == 0 evaluates the noiseless density directly.
double pdf_additive_value(double s, const InterferometerParams& p, double J);

/// Default grid for additive-noise work: +-12 sqrt(sigma^2 + J^2), 2^14 points.
GridSpec default_additive_grid(const InterferometerParams& p, double J);

SampledDensity pdf_additive(const InterferometerParams& p, double J, const GridSpec& grid);
SampledDensity pdf_additive(const InterferometerParams& p, double J);

/// Detector-plane field for one angular-jitter kick q:
/// exp(-i p^2 ell2/2k0) sin(k x + phi/2) exp(-i p^2 ell1/2k0) exp(i q x) |phi0>.
/// Unnormalized; its norm is the postselection probability for that q.
ComplexField jitter_field(double q, const InterferometerParams& p, const GridSpec& grid);

/// Default grid for jitter work: +-(16 sigma_det + |q|_max (ell1+ell2)/k0)
/// where sigma_det is the analytically propagated width, 2^16 points.
/// q_max covers the outermost Gauss-Hermite node for the given Q.
GridSpec default_jitter_grid(const InterferometerParams& p, double Q, int q_nodes = 41);

/// Jitter marginal plus its event bookkeeping.
struct JitterMarginal {
  SampledDensity density;        ///< q-averaged detector density, normalized
  double mean_postselection;     ///< Gaussian-averaged postselection probability
};

/// Angular-jitter channel with fixed geometry. Caches the phi-independent
/// part of the pipeline (initial state kicked by each q node and propagated
/// through ell1), so evaluating several nearby phi values costs one
/// propagation each.
class JitterModel {
 public:
  /// Q == 0 short-circuits to the single kick q = 0.
  JitterModel(const InterferometerParams& p, double Q, const GridSpec& grid,
              int q_nodes = 41);
  JitterModel(const InterferometerParams& p, double Q, int q_nodes = 41);
  ~JitterModel();
  JitterModel(JitterModel&&) noexcept;
  JitterModel& operator=(JitterModel&&) noexcept;

  const GridSpec& grid() const;
  const InterferometerParams& params() const;
  double Q() const;

  /// Gauss-Hermite average over q ~ N(0, Q^2) of the per-q detector
  /// intensities |psi_q|^2, normalized once at the end. This is the
  /// x-marginal of the joint density below.
  JitterMarginal marginal(double phi) const;

  /// Joint (x, q) density N exp(-q^2/2Q^2) |psi_q(x)|^2 on a uniform q grid,
  /// with N fixed numerically so the double trapezoid integral is 1. The x
  /// axis may be decimated by `x_stride` to keep the array small. Requires
  /// Q > 0 unless nq == 1 (the q = 0 slice).
  JointDensity joint(double phi, std::size_t nq = 257, double q_half_width_in_sigmas = 8.0,
                     std::size_t x_stride = 8) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-call versions matching the per-operation signatures.
SampledDensity pdf_jitter_marginal(const InterferometerParams& p, double Q,
                                   const GridSpec& grid, int q_nodes = 41);
JointDensity pdf_jitter_joint(const InterferometerParams& p, double Q,
                              const GridSpec& grid, std::size_t nq = 257);

}  // namespace iwv
