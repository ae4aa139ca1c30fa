#include "iwv/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include "iwv/errors.hpp"
#include "iwv/model.hpp"
#include "iwv/noise.hpp"

namespace iwv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream)
    : engine_(splitmix64(master_seed + stream * 0x9E3779B97F4A7C15ull)) {}

double RngStream::uniform() {
  // Upper 53 bits -> [0, 1). Avoids the implementation-defined
  // std::uniform_real_distribution so sequences are portable bit-for-bit.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

DensitySampler::DensitySampler(const SampledDensity& density)
    : x0_(density.x0), dx_(density.dx), values_(density.values) {
  const std::size_t n = values_.size();
  if (n < 2) throw std::invalid_argument("DensitySampler: need at least 2 samples");
  cum_.resize(n);
  cum_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    cum_[i] = cum_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * dx_;
  }
  const double total = cum_.back();
  if (!(total > 0.0)) throw std::invalid_argument("DensitySampler: zero total mass");
  for (double& c : cum_) c /= total;
  for (double& v : values_) v /= total;
}

double DensitySampler::sample(double u01) const {
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u01);
  std::size_t cell = (it == cum_.begin()) ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
  cell = std::min(cell, cum_.size() - 2);
  const double m = u01 - cum_[cell];  // mass to place inside the cell
  const double a = values_[cell];
  const double b = values_[cell + 1];
  // Invert integral of the linear density a + (b-a) t over t in [0,1]:
  // m = dx (a t + (b-a) t^2 / 2).
  double t;
  const double mm = m / dx_;
  if (std::abs(b - a) < 1e-14 * (a + b)) {
    t = (a > 0.0) ? mm / a : 0.0;
  } else {
    const double disc = a * a + 2.0 * (b - a) * mm;
    t = (std::sqrt(std::max(disc, 0.0)) - a) / (b - a);
  }
  t = std::clamp(t, 0.0, 1.0);
  return x0_ + (static_cast<double>(cell) + t) * dx_;
}

double DensitySampler::cdf(double x) const {
  const double t = (x - x0_) / dx_;
  if (t <= 0.0) return 0.0;
  const double last = static_cast<double>(values_.size() - 1);
  if (t >= last) return 1.0;
  const auto cell = static_cast<std::size_t>(t);
  const double frac = t - static_cast<double>(cell);
  const double a = values_[cell];
  const double b = values_[cell + 1];
  return cum_[cell] + dx_ * (a * frac + 0.5 * (b - a) * frac * frac);
}

std::vector<double> sample_positions(const SampledDensity& density, std::size_t n,
                                     RngStream& rng) {
  const DensitySampler sampler(density);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.sample(rng.uniform()));
  return out;
}

std::vector<double> sample_positions(const SampledDensity& density, std::size_t n,
                                     std::uint64_t seed) {
  RngStream rng(seed, 0);
  return sample_positions(density, n, rng);
}

namespace {

double log_likelihood(std::span<const double> samples, const SampledDensity& d) {
  double acc = 0.0;
  for (double x : samples) {
    const double p = d.value_at(x);
    acc += std::log(p > 0.0 ? p : 1e-320);
  }
  return acc;
}

}  // namespace

MleResult mle_phi(std::span<const double> samples, const DensityFamily& model, double lo,
                  double hi, int coarse_points, double tol) {
  if (samples.empty()) throw std::invalid_argument("mle_phi: no samples");
  if (!(hi > lo)) throw std::invalid_argument("mle_phi: empty search interval");
  if (coarse_points < 3) throw std::invalid_argument("mle_phi: need >= 3 coarse points");

  const double step = (hi - lo) / (coarse_points - 1);
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse_points; ++i) {
    const double ll = log_likelihood(samples, model(lo + i * step));
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }

  MleResult r;
  if (best == 0 || best == coarse_points - 1) {
    r.phi_hat = lo + best * step;
    r.log_likelihood = best_ll;
    r.at_boundary = true;  // flags a mis-specified interval
    return r;
  }

  // Golden-section on the bracketing coarse cells.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo + (best - 1) * step;
  double b = lo + (best + 1) * step;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = log_likelihood(samples, model(c));
  double fd = log_likelihood(samples, model(d));
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = log_likelihood(samples, model(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = log_likelihood(samples, model(d));
    }
  }
  r.phi_hat = 0.5 * (a + b);
  r.log_likelihood = std::max(fc, fd);
  r.at_boundary = false;
  return r;
}

namespace {

struct TrialOutcome {
  double phi_hat = 0.0;
  std::uint64_t n_post = 0;
  bool at_boundary = false;
};

}  // namespace

EstimationRun crb_experiment(const InterferometerParams& p, const NoiseParams& noise,
                             std::uint64_t nu_input, std::size_t trials,
                             std::uint64_t master_seed, const CrbOptions& opts) {
  p.validate();
  noise.validate();
  if (trials < 2) throw std::invalid_argument("crb_experiment: need >= 2 trials");
  if (noise.J > 0.0 && noise.Q > 0.0) {
    throw std::invalid_argument("crb_experiment: one technical-noise channel at a time");
  }

  EstimationRun run;
  run.master_seed = master_seed;
  run.nu_input = nu_input;
  run.trials = trials;

  // Model family and per-input-event bookkeeping for the chosen channel.
  DensityFamily family;
  double p_f = 0.0;
  std::shared_ptr<JitterModel> jitter;
  if (noise.Q > 0.0) {
    jitter = std::make_shared<JitterModel>(p, noise.Q);
    family = [jitter](double phi) { return jitter->marginal(phi).density; };
    p_f = jitter->marginal(p.phi).mean_postselection;
  } else {
    const InterferometerParams base = p;
    const double J = noise.J;
    const GridSpec grid = default_additive_grid(base, J);
    family = [base, J, grid](double phi) {
      InterferometerParams q = base;
      q.phi = phi;
      return pdf_additive(q, J, grid);
    };
    p_f = postselection_probability(p);
  }
  run.p_f_used = p_f;

  if (static_cast<double>(nu_input) * p_f < 1e3) {
    run.warnings.emplace_back("nu_input * p_f < 1000: asymptotic MLE regime not guaranteed");
  }

  // Information per postselected event from the numeric engine on the same
  // family the estimator sees.
  const SampledDensity center = family(p.phi);
  const double dphi = recommended_dphi(p.k, center.dx, p.phi);
  const FisherResult info = fisher_numeric(family, p.phi, dphi);
  run.info_per_event_used = info.value;
  if (!(info.value > 1e-12)) {
    throw DegenerateParamsError(
        "crb_experiment: the model carries no phase information at these parameters");
  }

  const double n_expected = static_cast<double>(nu_input) * p_f;
  const double halfwidth =
      opts.search_halfwidth_factor / std::sqrt(std::max(n_expected * info.value, 1e-300));
  const double lo = p.phi - halfwidth;
  const double hi = p.phi + halfwidth;

  // Coarse-scan densities are shared across trials; build them once.
  std::vector<SampledDensity> coarse(opts.coarse_points);
  const double step = (hi - lo) / (opts.coarse_points - 1);
  for (int i = 0; i < opts.coarse_points; ++i) coarse[i] = family(lo + i * step);
  const DensityFamily cached_family = [&family, &coarse, lo, step](double phi) {
    const double idx = (phi - lo) / step;
    const auto i = static_cast<long long>(std::llround(idx));
    if (i >= 0 && static_cast<std::size_t>(i) < coarse.size() &&
        std::abs(idx - static_cast<double>(i)) < 1e-9) {
      return coarse[static_cast<std::size_t>(i)];
    }
    return family(phi);
  };

  const SampledDensity truth = family(p.phi);
  std::vector<TrialOutcome> outcomes(trials);

  auto run_trial = [&](std::size_t t) {
    RngStream rng(master_seed, t);
    std::uint64_t n_post = 0;
    for (std::uint64_t i = 0; i < nu_input; ++i) {
      if (rng.uniform() < p_f) ++n_post;
    }
    TrialOutcome out;
    out.n_post = n_post;
    if (n_post == 0) {
      out.phi_hat = 0.5 * (lo + hi);
      out.at_boundary = true;
      outcomes[t] = out;
      return;
    }
    const std::vector<double> samples = sample_positions(truth, n_post, rng);
    const MleResult mle =
        mle_phi(samples, cached_family, lo, hi, opts.coarse_points, 1e-10);
    out.phi_hat = mle.phi_hat;
    out.at_boundary = mle.at_boundary;
    outcomes[t] = out;
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
          run_trial(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  run.estimates.reserve(trials);
  run.postselected_counts.reserve(trials);
  for (const auto& out : outcomes) {
    run.estimates.push_back(out.phi_hat);
    run.postselected_counts.push_back(out.n_post);
    if (out.at_boundary) ++run.boundary_count;
  }
  if (run.boundary_count > 0) {
    run.warnings.emplace_back(std::to_string(run.boundary_count) +
                              " trial(s) hit the search boundary (reported, not dropped)");
  }

  double mean = 0.0;
  for (double e : run.estimates) mean += e;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double e : run.estimates) var += (e - mean) * (e - mean);
  var /= static_cast<double>(trials - 1);
  run.empirical_mean = mean;
  run.empirical_var = var;

  const double info_total = static_cast<double>(nu_input) * p_f * info.value;
  run.crb_variance = 1.0 / info_total;
  run.variance_ratio = var * info_total;
  run.info_per_input_event_mc = 1.0 / (static_cast<double>(nu_input) * var);
  return run;
}

}  // namespace iwv
