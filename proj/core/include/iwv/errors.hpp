#pragma once

#include <stdexcept>
#include <string>

namespace iwv {

/// Base class for all numeric/domain failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampled grid does not contain the density: the estimated mass outside
/// the grid exceeds the tail budget.
class GridTooNarrowError : public Error {
 public:
  using Error::Error;
};

/// A momentum-space quadratic phase wraps faster than pi per momentum-grid
/// step inside the occupied band; the propagated field would alias.
class GridAliasingError : public Error {
 public:
  using Error::Error;
};

/// Parameters for which the requested quantity is identically degenerate
/// (e.g. zero Fisher information where an inverse is required).
class DegenerateParamsError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference log-likelihood curvature failed its step-halving
/// consistency gate.
class UnstableCurvatureError : public Error {
 public:
  using Error::Error;
};

/// Scan configuration text is malformed (unknown key, duplicate key, bad
/// value, missing required key).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace iwv
