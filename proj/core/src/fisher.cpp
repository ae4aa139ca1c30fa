#include "iwv/fisher.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "iwv/errors.hpp"
#include "iwv/model.hpp"

namespace iwv {

namespace {

constexpr double kDensityFloorRatio = 1e-300;
constexpr double kRichardsonTol = 1e-3;

void regime_warning(const InterferometerParams& p, std::vector<std::string>& warnings) {
  if (!p.in_inverse_weak_value_regime()) {
    warnings.emplace_back("outside inverse-weak-value regime (need |phi| < |k| sigma < 1)");
  }
}

void clip_nonnegative(FisherResult& r) {
  if (r.value < 0.0) {
    if (r.value < -1e-12) {
      r.warnings.emplace_back("negative information value clipped to 0 (formula outside its validity)");
    }
    r.value = 0.0;
  }
}

}  // namespace

FisherResult FisherResult::per_input_event(double p_f) const {
  if (basis != EventBasis::per_postselected_event) {
    throw std::invalid_argument("per_input_event: expected a per-postselected-event result");
  }
  FisherResult out = *this;
  out.value = value * p_f;
  out.basis = EventBasis::per_input_event;
  return out;
}

FisherResult FisherResult::total(double p_f, double nu_events) const {
  if (basis != EventBasis::per_postselected_event) {
    throw std::invalid_argument("total: expected a per-postselected-event result");
  }
  FisherResult out = *this;
  out.value = value * p_f * nu_events;
  out.basis = EventBasis::total_nu;
  out.nu = nu_events;
  return out;
}

FisherResult fisher_noiseless_analytic(const InterferometerParams& p) {
  p.validate();
  FisherResult r;
  r.method = FisherMethod::analytic;
  r.params = p;
  if (p.k == 0.0 && p.phi == 0.0) {
    r.degenerate = true;
    r.value = 0.0;  // phi -> 0 limit at k = 0
    r.warnings.emplace_back("degenerate point k = 0, phi = 0: information identically 0");
    return r;
  }
  const double a = p.k * p.k * p.sigma * p.sigma;
  const double half = std::sin(0.5 * p.phi);
  const double denom = std::expm1(2.0 * a) + 2.0 * half * half;  // e^{2a} - cos(phi)
  r.value = std::expm1(4.0 * a) / (denom * denom);
  clip_nonnegative(r);
  return r;
}

FisherResult fisher_additive_approx(const InterferometerParams& p, double J) {
  p.validate();
  if (!(J >= 0.0)) throw std::invalid_argument("fisher_additive_approx: J must be >= 0");
  FisherResult r;
  r.method = FisherMethod::analytic;
  r.params = p;
  r.noise.J = J;
  if (p.k == 0.0) {
    throw DegenerateParamsError("fisher_additive_approx: k = 0 outside the approximation");
  }
  regime_warning(p, r.warnings);
  const double ratio = J / p.sigma;
  if (ratio >= 1.0) r.warnings.emplace_back("J/sigma >= 1: first-order expansion unreliable");
  const double a = p.k * p.k * p.sigma * p.sigma;
  r.value = (1.0 - std::sqrt(M_PI / 2.0) * ratio) / a;
  clip_nonnegative(r);
  return r;
}

FisherResult fisher_jitter_approx(const InterferometerParams& p, double Q) {
  p.validate();
  if (!(Q >= 0.0)) throw std::invalid_argument("fisher_jitter_approx: Q must be >= 0");
  FisherResult r;
  r.method = FisherMethod::analytic;
  r.params = p;
  r.noise.Q = Q;
  if (p.k == 0.0) {
    throw DegenerateParamsError("fisher_jitter_approx: k = 0 outside the approximation");
  }
  regime_warning(p, r.warnings);
  if (p.ell2 != 0.0) {
    r.warnings.emplace_back("ell2 treated as 0 (the approximation assumes a detector at the symmetric point)");
  }
  const double s2 = p.sigma * p.sigma;
  const double k02 = p.k0 * p.k0;
  const double l12 = p.ell1 * p.ell1;
  const double num = 4.0 * k02 * s2 + l12 * (1.0 / s2 - 4.0 * Q * Q);
  const double den = l12 / s2 + 4.0 * k02 * s2;
  r.value = (4.0 * k02 / (p.k * p.k)) * num / (den * den);
  clip_nonnegative(r);
  return r;
}

double recommended_dphi(double k, double grid_dx, double phi) {
  double h = std::max(1e-4, std::abs(phi) / 100.0);
  if (k != 0.0 && grid_dx > 0.0) {
    // Keep the stencil's corrupted zone around a dark point (width ~ h/k)
    // inside one grid cell.
    h = std::min(h, std::abs(k) * grid_dx / 32.0);
  }
  return std::max(h, 1e-9);
}

namespace {

struct FlatDensity {
  std::vector<double> p;  // normalized density values
  std::vector<double> w;  // quadrature weights
};

// Shared curvature engine over any flattened density representation.
// offsets: logs[0..5] hold ln p at phi + {-2h, -h, -h/2, +h/2, +h, +2h}.
class CurvatureEngine {
 public:
  FlatDensity center;
  std::array<std::vector<double>, 6> logs;
  double h = 0.0;
  double floor_abs = 0.0;

  double variance_form(bool half_step) const {
    // stencil offsets within `logs`: full step uses {-2h,-h,+h,+2h} =
    // indices {0,1,4,5}; half step uses {-h,-h/2,+h/2,+h} = {1,2,3,4}.
    const int m2 = half_step ? 1 : 0, m1 = half_step ? 2 : 1;
    const int p1 = half_step ? 3 : 4, p2 = half_step ? 4 : 5;
    const double hh = half_step ? 0.5 * h : h;
    double acc = 0.0;
    const std::size_t n = center.p.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double pc = center.p[i];
      if (pc < floor_abs) continue;
      const double lm2 = logs[m2][i], lm1 = logs[m1][i];
      const double lp1 = logs[p1][i], lp2 = logs[p2][i];
      if (!std::isfinite(lm2) || !std::isfinite(lm1) || !std::isfinite(lp1) ||
          !std::isfinite(lp2)) {
        continue;
      }
      const double d = (-lp2 + 8.0 * lp1 - 8.0 * lm1 + lm2) / (12.0 * hh);
      acc += center.w[i] * pc * d * d;
    }
    return acc;
  }

  double second_form(const std::vector<double>& log_center, bool half_step) const {
    const int m2 = half_step ? 1 : 0, m1 = half_step ? 2 : 1;
    const int p1 = half_step ? 3 : 4, p2 = half_step ? 4 : 5;
    const double hh = half_step ? 0.5 * h : h;
    double acc = 0.0;
    const std::size_t n = center.p.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double pc = center.p[i];
      if (pc < floor_abs) continue;
      const double lm2 = logs[m2][i], lm1 = logs[m1][i];
      const double lp1 = logs[p1][i], lp2 = logs[p2][i];
      const double lc = log_center[i];
      if (!std::isfinite(lm2) || !std::isfinite(lm1) || !std::isfinite(lp1) ||
          !std::isfinite(lp2) || !std::isfinite(lc)) {
        continue;
      }
      const double d2 = (-lp2 + 16.0 * lp1 - 30.0 * lc + 16.0 * lm1 - lm2) / (12.0 * hh * hh);
      acc -= center.w[i] * pc * d2;
    }
    return acc;
  }

  double richardson(double& disagreement) const {
    const double full = variance_form(false);
    const double half = variance_form(true);
    // Absolute floor: families carrying no information produce two near-zero
    // estimates whose ratio is meaningless.
    disagreement = std::abs(full - half) / std::max(std::abs(half), 1e-12);
    return (16.0 * half - full) / 15.0;
  }
};

std::vector<double> log_values(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] > 0.0 ? std::log(values[i])
                             : -std::numeric_limits<double>::infinity();
  }
  return out;
}

FlatDensity flatten(const SampledDensity& d) {
  FlatDensity f;
  f.p = d.values;
  f.w.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) f.w[i] = trapezoid_weight(i, d.size(), d.dx);
  return f;
}

FlatDensity flatten(const JointDensity& d) {
  FlatDensity f;
  f.p = d.values;
  f.w.resize(d.values.size());
  for (std::size_t iq = 0; iq < d.nq; ++iq) {
    const double wq = (d.nq == 1) ? 1.0 : trapezoid_weight(iq, d.nq, d.dq);
    for (std::size_t ix = 0; ix < d.nx; ++ix) {
      f.w[iq * d.nx + ix] = wq * trapezoid_weight(ix, d.nx, d.dx);
    }
  }
  return f;
}

void check_same_grid(const SampledDensity& a, const SampledDensity& b) {
  if (a.x0 != b.x0 || a.dx != b.dx || a.size() != b.size()) {
    throw std::invalid_argument("fisher_numeric: density family changed its grid across phi");
  }
}

void check_same_grid(const JointDensity& a, const JointDensity& b) {
  if (a.x0 != b.x0 || a.dx != b.dx || a.nx != b.nx || a.q0 != b.q0 || a.dq != b.dq ||
      a.nq != b.nq) {
    throw std::invalid_argument("fisher_2d_numeric: joint family changed its grid across phi");
  }
}

constexpr double kStencilScale[6] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

template <typename Density, typename Family>
CurvatureEngine build_engine(const Family& family, double phi, double dphi,
                             const Density& center) {
  CurvatureEngine eng;
  eng.h = dphi;
  eng.center = flatten(center);
  eng.floor_abs =
      kDensityFloorRatio * *std::max_element(eng.center.p.begin(), eng.center.p.end());
  for (int s = 0; s < 6; ++s) {
    const Density d = family(phi + kStencilScale[s] * dphi);
    check_same_grid(center, d);
    eng.logs[s] = log_values(flatten(d).p);
  }
  return eng;
}

template <typename Density, typename Family>
FisherResult numeric_result(const Family& family, double phi, double dphi) {
  const Density center = family(phi);
  if (dphi <= 0.0) dphi = std::max(1e-4, std::abs(phi) / 100.0);
  const CurvatureEngine eng = build_engine<Density>(family, phi, dphi, center);
  double disagreement = 0.0;
  const double value = eng.richardson(disagreement);
  if (disagreement > kRichardsonTol) {
    throw UnstableCurvatureError(
        "fisher_numeric: step-halving disagreement " + std::to_string(disagreement) +
        " exceeds " + std::to_string(kRichardsonTol) + " (dphi = " + std::to_string(dphi) +
        "); pass a smaller dphi (see recommended_dphi)");
  }
  FisherResult r;
  r.method = FisherMethod::numeric_curvature;
  r.value = value;
  clip_nonnegative(r);
  return r;
}

}  // namespace

FisherResult fisher_numeric(const DensityFamily& family, double phi, double dphi) {
  return numeric_result<SampledDensity>(family, phi, dphi);
}

double fisher_numeric_second_form(const DensityFamily& family, double phi, double dphi) {
  const SampledDensity center = family(phi);
  if (dphi <= 0.0) dphi = std::max(1e-4, std::abs(phi) / 100.0);
  const CurvatureEngine eng = build_engine<SampledDensity>(family, phi, dphi, center);
  const std::vector<double> log_center = log_values(eng.center.p);
  const double full = eng.second_form(log_center, false);
  const double half = eng.second_form(log_center, true);
  return (16.0 * half - full) / 15.0;
}

FisherResult fisher_2d_numeric(const JointFamily& family, double phi, double dphi) {
  return numeric_result<JointDensity>(family, phi, dphi);
}

}  // namespace iwv
