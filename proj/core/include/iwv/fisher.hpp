#pragma once

#include <functional>
#include <string>
#include <vector>

#include "iwv/grid.hpp"
#include "iwv/params.hpp"

namespace iwv {

enum class FisherMethod { analytic, numeric_curvature };

enum class EventBasis { per_postselected_event, per_input_event, total_nu };

/// Fisher-information value with provenance and event-counting basis.
struct FisherResult {
  double value = 0.0;  ///< >= 0; tiny negative numeric residue is clipped
  FisherMethod method = FisherMethod::analytic;
  EventBasis basis = EventBasis::per_postselected_event;
  bool degenerate = false;  ///< identically-zero-information parameter point
  std::vector<std::string> warnings;

  InterferometerParams params;
  NoiseParams noise;
  double nu = 0.0;  ///< input events for the total_nu basis

  /// p_f times the per-postselected-event value, exactly.
  FisherResult per_input_event(double p_f) const;
  /// p_f * nu times the per-postselected-event value.
  FisherResult total(double p_f, double nu_events) const;
};

/// Closed form (e^{4 k^2 s^2} - 1) / (e^{2 k^2 s^2} - cos phi)^2 per
/// postselected event. k = 0 and phi = 0 yields the degenerate flag with
/// value 0 (the k -> 0 limit).
FisherResult fisher_noiseless_analytic(const InterferometerParams& p);

/// Additive-noise approximation (1/k^2 s^2)(1 - sqrt(pi/2) J/s), first order
/// in J/sigma, valid for phi < k sigma < 1. Warns outside the regime.
FisherResult fisher_additive_approx(const InterferometerParams& p, double J);

/// Angular-jitter approximation
/// (4 k0^2/k^2) [4 k0^2 s^2 + ell1^2 (1/s^2 - 4 Q^2)] / (ell1^2/s^2 + 4 k0^2 s^2)^2
/// with ell2 taken as 0. Linear in k Q; warns outside the regime.
FisherResult fisher_jitter_approx(const InterferometerParams& p, double Q);

using DensityFamily = std::function<SampledDensity(double phi)>;
using JointFamily = std::function<JointDensity(double phi)>;

/// Step choice for the finite-difference curvature below. The baseline
/// max(1e-4, |phi|/100) is capped at k*dx/32 so the stencil's corrupted
/// zone around a dark point stays inside one grid cell.
double recommended_dphi(double k, double grid_dx, double phi);

/// Numeric Fisher information at `phi` from the variance form
/// E[(d/dphi ln p)^2], with 5-point central differences of ln p and one
/// Richardson step across dphi and dphi/2. dphi <= 0 selects the default
/// step max(1e-4, |phi|/100). Grid points whose center density falls below
/// 1e-300 of the peak (or whose stencil underflows to zero) are excluded
/// from the quadrature. Throws UnstableCurvatureError when the two step
/// sizes disagree by more than 1e-3 relative.
FisherResult fisher_numeric(const DensityFamily& family, double phi, double dphi = 0.0);

/// Same estimator from the second-derivative form -E[d^2/dphi^2 ln p],
/// exposed as a cross-check of fisher_numeric.
double fisher_numeric_second_form(const DensityFamily& family, double phi, double dphi = 0.0);

/// Numeric Fisher information of a joint (x, q) family, variance form on
/// the 2-D trapezoid grid. Upper-bounds the marginal's information.
FisherResult fisher_2d_numeric(const JointFamily& family, double phi, double dphi = 0.0);

}  // namespace iwv
