#pragma once

#include "iwv/grid.hpp"
#include "iwv/params.hpp"

namespace iwv {

/// Postselected meter amplitude sin(k x + phi/2) * G(x) for a Gaussian meter
/// centered at 0, with orthogonal initial/final system states. Real by the
/// phase convention here (the global -i factor is dropped; only
/// |amplitude|^2 is observable). Units 1/sqrt(cm).
double postselected_amplitude(double x, const InterferometerParams& p);

/// Postselection probability (1 - exp(-2 k^2 sigma^2) cos phi) / 2.
double postselection_probability(const InterferometerParams& p);

/// Inverse-weak-value leading order k^2 sigma^2 (phi -> 0, k sigma -> 0).
double postselection_probability_iwv_approx(const InterferometerParams& p);

/// Normalized conditional density sin^2(k x + phi/2) |G(x)|^2 / p_f at one
/// point. Throws DegenerateParamsError when p_f == 0 (k = 0 and phi = 0).
double pdf_noiseless_value(double x, const InterferometerParams& p);

/// Default grid for noiseless work: [-12 sigma, 12 sigma], 2^14 points.
GridSpec default_noiseless_grid(const InterferometerParams& p);

/// Noiseless density sampled on `grid`. Throws GridTooNarrowError when the
/// tail-mass check fails, DegenerateParamsError when p_f == 0.
SampledDensity pdf_noiseless(const InterferometerParams& p, const GridSpec& grid);
SampledDensity pdf_noiseless(const InterferometerParams& p);

/// First moment of pdf_noiseless by trapezoid quadrature on `grid`.
/// Reduces to phi/k in the inverse-weak-value regime.
double mean_shift_exact(const InterferometerParams& p, const GridSpec& grid);
double mean_shift_exact(const InterferometerParams& p);

}  // namespace iwv
