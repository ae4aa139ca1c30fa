#include "iwv/propagation.hpp"

#include <cmath>
#include <string>

#include "iwv/errors.hpp"

namespace iwv {

namespace {

// Edge of the momentum band holding all but `excluded` of the spectral
// mass. Scans bins from the extreme momentum inward in the fft layout:
// offset m pairs bin n/2+m (p = -dp(n/2-m)) with bin n/2-m (p = +dp(n/2-m)).
double occupied_band_edge(const std::vector<std::complex<double>>& spectrum, double dp,
                          double excluded) {
  const std::size_t n = spectrum.size();
  double total = 0.0;
  for (const auto& c : spectrum) total += std::norm(c);
  if (!(total > 0.0)) return 0.0;

  const double budget = excluded * total;
  double outside = 0.0;
  for (std::size_t m = 0; m < n / 2; ++m) {
    outside += std::norm(spectrum[n / 2 + m]);
    if (m > 0) outside += std::norm(spectrum[n / 2 - m]);
    if (outside > budget) return dp * static_cast<double>(n / 2 - m);
  }
  return 0.0;
}

}  // namespace

void free_propagate(ComplexField& field, double ell, double k0, const Fft& fft) {
  if (ell == 0.0) return;  // exact passthrough
  if (ell < 0.0) throw std::invalid_argument("free_propagate: ell must be >= 0");
  if (!(k0 > 0.0)) throw std::invalid_argument("free_propagate: k0 must be > 0");
  if (fft.size() != field.size()) throw std::invalid_argument("free_propagate: plan size mismatch");

  const std::size_t n = field.size();
  const std::vector<double> p = fft_momentum_grid(n, field.dx);
  const double dp = 2.0 * M_PI / (static_cast<double>(n) * field.dx);

  fft.forward(field.values);

  const double p_band = occupied_band_edge(field.values, dp, 1e-6);
  const double wrap_per_step = p_band * (ell / k0) * dp;
  if (wrap_per_step > M_PI) {
    throw GridAliasingError("free_propagate: quadratic phase wraps " +
                            std::to_string(wrap_per_step) +
                            " rad per momentum step at the occupied band edge");
  }

  const double c = ell / (2.0 * k0);
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = -c * p[j] * p[j];
    field.values[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  fft.inverse(field.values);
}

void free_propagate(ComplexField& field, double ell, double k0) {
  const Fft fft(field.size());
  free_propagate(field, ell, k0, fft);
}

double propagated_sigma(double sigma, double ell, double k0) {
  const double r = ell / (2.0 * k0 * sigma * sigma);
  return sigma * std::sqrt(1.0 + r * r);
}

}  // namespace iwv
