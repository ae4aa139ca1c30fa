#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "iwv/fisher.hpp"
#include "iwv/grid.hpp"
#include "iwv/params.hpp"

namespace iwv {

/// splitmix64 output mix; also the substream derivation primitive.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random stream: substream `stream` of `master_seed`,
/// derived by a counter-based split so parallel trials never share state.
/// Uniform doubles use the upper 53 bits of a mersenne-twister word, so the
/// sequence is identical on every conforming platform.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  ///< in [0, 1)

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a SampledDensity: picks a grid cell by its
/// trapezoid mass, then inverts the linear density inside the cell, so the
/// draws follow exactly the piecewise-linear density the grid represents.
class DensitySampler {
 public:
  explicit DensitySampler(const SampledDensity& density);
  double sample(double u01) const;  ///< quantile function
  /// Model CDF at x, consistent with the sampler (for goodness-of-fit tests).
  double cdf(double x) const;

 private:
  double x0_, dx_;
  std::vector<double> values_;
  std::vector<double> cum_;  // cumulative cell masses, cum_[0] = 0
};

std::vector<double> sample_positions(const SampledDensity& density, std::size_t n,
                                     RngStream& rng);
std::vector<double> sample_positions(const SampledDensity& density, std::size_t n,
                                     std::uint64_t seed);

struct MleResult {
  double phi_hat = 0.0;
  double log_likelihood = 0.0;
  bool at_boundary = false;  ///< optimum pinned to a search edge
};

/// Maximum-likelihood estimate of phi: coarse scan over `coarse_points`
/// grid values of [lo, hi], then golden-section refinement to `tol` rad.
/// Log-density of a sample is ln of the linearly interpolated density.
MleResult mle_phi(std::span<const double> samples, const DensityFamily& model,
                  double lo, double hi, int coarse_points = 201, double tol = 1e-10);

struct EstimationRun {
  std::uint64_t master_seed = 0;
  std::uint64_t nu_input = 0;
  std::size_t trials = 0;
  std::vector<double> estimates;              ///< one phi-hat per trial
  std::vector<std::uint64_t> postselected_counts;
  double p_f_used = 0.0;                      ///< postselection probability per input event
  double info_per_event_used = 0.0;           ///< Fisher info per postselected event
  double empirical_var = 0.0;
  double empirical_mean = 0.0;
  double crb_variance = 0.0;                  ///< 1 / (nu p_f I)
  double variance_ratio = 0.0;                ///< empirical_var / crb_variance
  double info_per_input_event_mc = 0.0;       ///< 1 / (nu empirical_var)
  std::size_t boundary_count = 0;             ///< trials flagged at_boundary (reported, kept)
  std::vector<std::string> warnings;
};

struct CrbOptions {
  double search_halfwidth_factor = 20.0;  ///< half width = factor / sqrt(n I)
  int coarse_points = 201;
  int threads = 1;
};

/// Monte Carlo Cramer-Rao experiment: per trial draws a Binomial(nu_input,
/// p_f) postselected count, samples that many positions from the model
/// density at the true phi, and runs mle_phi. Supports the noiseless
/// channel and one technical-noise channel at a time (J or Q).
EstimationRun crb_experiment(const InterferometerParams& p, const NoiseParams& noise,
                             std::uint64_t nu_input, std::size_t trials,
                             std::uint64_t master_seed, const CrbOptions& opts = {});

}  // namespace iwv
