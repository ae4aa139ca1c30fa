#pragma once

#include "iwv/fisher.hpp"
#include "iwv/grid.hpp"
#include "iwv/params.hpp"

namespace iwv {

/// CODATA constants and the unit conversions used by the frequency module.
/// Lengths elsewhere in this library are centimeters.
namespace constants {
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double h_J_s = 6.62607015e-34;
inline constexpr double c_m_per_s = 2.99792458e8;
inline constexpr double c_cm_per_s = 2.99792458e10;
inline constexpr double cm_per_m = 100.0;
}  // namespace constants

/// Optical power budget; nu is the derived photon count.
struct PhotonBudget {
  double power_W = 1e-3;
  double wavelength_cm = 780e-7;
  double integration_time_s = 1.0;

  void validate() const;
  double photon_energy_J() const;  ///< h c / lambda
  double photon_count() const;     ///< P t lambda / (2 pi hbar c)
};

/// Prism-based frequency measurement: a frequency-dependent transverse
/// momentum shift k_p = k0 (dtheta/domega) delta_omega enters the
/// postselected profile like a phase phi = 2 k_p sigma.
struct PrismScheme {
  double kp = 0.0;             ///< transverse momentum shift (1/cm)
  double dtheta_domega = 0.0;  ///< angular dispersion (s)
  double k0 = 0.0;             ///< wavenumber (1/cm)
  double sigma = 1.0;          ///< beam width (cm)
  double k = 0.0;              ///< Sagnac momentum kick (1/cm)

  void validate() const;

  /// kp from a frequency shift via kp = k0 (dtheta/domega) delta_omega.
  static PrismScheme from_frequency_shift(double delta_omega_rad_s, double dtheta_domega,
                                          double k0, double sigma, double k);

  /// Toy thin-prism dispersion: deflection theta = (n(omega) - 1) * apex,
  /// with the linear medium n(omega) = 1 + (c/vg - 1)(omega - omega0)/omega0,
  /// so dtheta/domega = (c/vg - 1)/omega0 * apex. A stand-in for an atomic
  /// prism when only the group velocity is quoted.
  static double dispersion_from_group_velocity(double vg_over_c, double wavelength_cm,
                                               double apex_angle_rad = 1.0);
};

/// Dispersive-medium frequency measurement through the relative phase
/// phi(omega) = (n(omega) - 1) k0 d on one interferometer path.
struct GroupDelayScheme {
  double vg_cm_per_s = 0.0;  ///< group velocity in the medium
  double d_cm = 0.0;         ///< path length through the medium
  double k0 = 0.0;           ///< vacuum wavenumber (1/cm)

  void validate() const;
  double tau_g_s() const;  ///< group delay d (1/vg - 1/c)
};

/// x-marginal of the prism scheme: pdf_noiseless with phi -> 2 kp sigma.
SampledDensity pdf_prism_marginal(const PrismScheme& s, const GridSpec& grid);
SampledDensity pdf_prism_marginal(const PrismScheme& s);

/// Per-postselected-event information for kp: 2 sigma^2 / (k^2 sigma^2), cm^2.
FisherResult fisher_prism(const PrismScheme& s);

/// Total-basis information for a frequency shift: [k0 dtheta/domega]^2 times
/// the total-basis fisher_prism. Units s^2.
FisherResult fisher_prism_frequency(const PrismScheme& s, const PhotonBudget& budget);

/// Group-delay information: tau_g^2 / p_f per postselected event,
/// nu tau_g^2 on the total basis. Units s^2.
FisherResult fisher_group_delay(const GroupDelayScheme& s, const InterferometerParams& p,
                                const PhotonBudget& budget);

struct ResolvableShift {
  double rad_per_s = 0.0;  ///< 1 / sqrt(I_nu)
  double hz = 0.0;         ///< rad_per_s / (2 pi)
};

/// Minimum resolvable frequency shift 1/sqrt(I_nu) from a total-basis
/// result. Throws DegenerateParamsError on zero information and
/// std::invalid_argument off the total basis.
ResolvableShift min_resolvable_shift(const FisherResult& fisher_total);

}  // namespace iwv
