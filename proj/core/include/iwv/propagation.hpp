#pragma once

#include "iwv/fft.hpp"
#include "iwv/grid.hpp"

namespace iwv {

/// Applies the free-propagation operator exp(-i p^2 ell / (2 k0)) in
/// momentum space. ell == 0 is an exact passthrough. Throws
/// GridAliasingError when the quadratic phase wraps faster than pi per
/// momentum-grid step at the edge of the band holding all but 1e-6 of the
/// spectral mass.
void free_propagate(ComplexField& field, double ell, double k0, const Fft& fft);

/// Convenience overload constructing a plan for field.size().
void free_propagate(ComplexField& field, double ell, double k0);

/// Intensity standard deviation of an initially collimated Gaussian beam of
/// width sigma after propagating a distance ell:
/// sigma * sqrt(1 + (ell / (2 k0 sigma^2))^2).
double propagated_sigma(double sigma, double ell, double k0);

}  // namespace iwv
