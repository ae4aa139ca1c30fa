#include "iwv/frequency.hpp"

#include <cmath>
#include <stdexcept>

#include "iwv/errors.hpp"
#include "iwv/model.hpp"

namespace iwv {

void PhotonBudget::validate() const {
  if (!(power_W > 0.0) || !(wavelength_cm > 0.0) || !(integration_time_s >= 0.0)) {
    throw std::invalid_argument("PhotonBudget: need power > 0, wavelength > 0, time >= 0");
  }
}

double PhotonBudget::photon_energy_J() const {
  validate();
  return constants::h_J_s * constants::c_m_per_s / (wavelength_cm / constants::cm_per_m);
}

double PhotonBudget::photon_count() const {
  validate();
  return power_W * integration_time_s / photon_energy_J();
}

void PrismScheme::validate() const {
  if (!(sigma > 0.0) || !(k0 > 0.0)) {
    throw std::invalid_argument("PrismScheme: need sigma > 0 and k0 > 0");
  }
}

PrismScheme PrismScheme::from_frequency_shift(double delta_omega_rad_s, double dtheta_domega,
                                              double k0, double sigma, double k) {
  PrismScheme s;
  s.dtheta_domega = dtheta_domega;
  s.k0 = k0;
  s.sigma = sigma;
  s.k = k;
  s.kp = k0 * dtheta_domega * delta_omega_rad_s;
  s.validate();
  return s;
}

double PrismScheme::dispersion_from_group_velocity(double vg_over_c, double wavelength_cm,
                                                   double apex_angle_rad) {
  if (!(vg_over_c > 0.0) || !(wavelength_cm > 0.0)) {
    throw std::invalid_argument("dispersion_from_group_velocity: need vg, wavelength > 0");
  }
  const double omega0 = 2.0 * M_PI * constants::c_cm_per_s / wavelength_cm;
  return (1.0 / vg_over_c - 1.0) / omega0 * apex_angle_rad;
}

void GroupDelayScheme::validate() const {
  if (!(vg_cm_per_s > 0.0) || !(d_cm >= 0.0) || !(k0 > 0.0)) {
    throw std::invalid_argument("GroupDelayScheme: need vg > 0, d >= 0, k0 > 0");
  }
}

double GroupDelayScheme::tau_g_s() const {
  validate();
  return d_cm * (1.0 / vg_cm_per_s - 1.0 / constants::c_cm_per_s);
}

SampledDensity pdf_prism_marginal(const PrismScheme& s, const GridSpec& grid) {
  s.validate();
  InterferometerParams p;
  p.k = s.k;
  p.sigma = s.sigma;
  p.k0 = s.k0;
  p.phi = 2.0 * s.kp * s.sigma;
  return pdf_noiseless(p, grid);
}

SampledDensity pdf_prism_marginal(const PrismScheme& s) {
  InterferometerParams p;
  p.k = s.k;
  p.sigma = s.sigma;
  p.k0 = s.k0;
  p.phi = 2.0 * s.kp * s.sigma;
  return pdf_prism_marginal(s, default_noiseless_grid(p));
}

FisherResult fisher_prism(const PrismScheme& s) {
  s.validate();
  FisherResult r;
  r.method = FisherMethod::analytic;
  r.params.k = s.k;
  r.params.sigma = s.sigma;
  r.params.k0 = s.k0;
  r.params.phi = 2.0 * s.kp * s.sigma;
  if (s.k == 0.0) {
    throw DegenerateParamsError("fisher_prism: k = 0 outside the approximation");
  }
  if (std::abs(s.kp) * s.sigma >= 0.1 * std::abs(s.k) * s.sigma) {
    r.warnings.emplace_back("kp sigma not small against k sigma: first-order regime doubtful");
  }
  if (!r.params.in_inverse_weak_value_regime()) {
    r.warnings.emplace_back("outside inverse-weak-value regime (need |phi| < |k| sigma < 1)");
  }
  r.value = 2.0 * s.sigma * s.sigma / (s.k * s.k * s.sigma * s.sigma);  // cm^2 per event
  return r;
}

FisherResult fisher_prism_frequency(const PrismScheme& s, const PhotonBudget& budget) {
  const double nu = budget.photon_count();
  InterferometerParams p;
  p.k = s.k;
  p.sigma = s.sigma;
  p.k0 = s.k0;
  p.phi = 2.0 * s.kp * s.sigma;
  const double p_f = postselection_probability(p);
  FisherResult total = fisher_prism(s).total(p_f, nu);
  const double scale = s.k0 * s.dtheta_domega;
  total.value *= scale * scale;  // s^2
  return total;
}

FisherResult fisher_group_delay(const GroupDelayScheme& s, const InterferometerParams& p,
                                const PhotonBudget& budget) {
  s.validate();
  p.validate();
  const double nu = budget.photon_count();
  const double tau = s.tau_g_s();
  const double p_f = postselection_probability(p);
  if (!(p_f > 0.0)) {
    throw DegenerateParamsError("fisher_group_delay: postselection probability is zero");
  }
  FisherResult per_event;
  per_event.method = FisherMethod::analytic;
  per_event.params = p;
  per_event.value = tau * tau / p_f;  // s^2 per postselected event
  if (s.vg_cm_per_s > 0.1 * constants::c_cm_per_s) {
    per_event.warnings.emplace_back("vg not small against c: tau_g ~ d/vg reading inexact");
  }
  return per_event.total(p_f, nu);  // nu tau_g^2
}

ResolvableShift min_resolvable_shift(const FisherResult& fisher_total) {
  if (fisher_total.basis != EventBasis::total_nu) {
    throw std::invalid_argument("min_resolvable_shift: expected a total-nu basis result");
  }
  if (!(fisher_total.value > 0.0)) {
    throw DegenerateParamsError("min_resolvable_shift: zero information");
  }
  ResolvableShift out;
  out.rad_per_s = 1.0 / std::sqrt(fisher_total.value);
  out.hz = out.rad_per_s / (2.0 * M_PI);
  return out;
}

}  // namespace iwv
