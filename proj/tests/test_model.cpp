#include <doctest.h>

#include <cmath>

#include "iwv/errors.hpp"
#include "iwv/model.hpp"
#include "oracles.hpp"

using namespace iwv;

namespace {

InterferometerParams params(double k, double phi, double sigma = 1.0) {
  InterferometerParams p;
  p.k = k;
  p.phi = phi;
  p.sigma = sigma;
  return p;
}

// Closed-form first moment of the noiseless density (test oracle):
// k sigma^2 sin(phi) e^{-2 k^2 sigma^2} / p_f.
double mean_closed(const InterferometerParams& p) {
  const double a = p.k * p.k * p.sigma * p.sigma;
  return p.k * p.sigma * p.sigma * std::sin(p.phi) * std::exp(-2.0 * a) /
         postselection_probability(p);
}

}  // namespace

TEST_CASE("gaussian meter normalization") {
  const GaussianMeter m{0.7, 0.0};
  const double total = oracle::integrate([&](double x) { return m.intensity(x); }, -12.0, 12.0);
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("postselected amplitude: dark point and frozen values") {
  // sine zero at x = -phi/(2k)
  auto p = params(0.23, 0.17);
  CHECK(postselected_amplitude(-p.phi / (2.0 * p.k), p) == doctest::Approx(0.0).epsilon(1e-14));

  // k = 0, phi = pi, x = 0: sin(pi/2) * (2 pi)^{-1/4}
  CHECK(postselected_amplitude(0.0, params(0.0, M_PI)) ==
        doctest::Approx(0.63161877774606470).epsilon(1e-14));

  // k sigma = 0.1, phi = 1e-3, x = 0.5: frozen from a 50-digit evaluation
  CHECK(postselected_amplitude(0.5, params(0.1, 1e-3)) ==
        doctest::Approx(0.029951487572963447).epsilon(1e-14));
}

TEST_CASE("postselection probability: trivial points, frozen value, quadrature") {
  CHECK(postselection_probability(params(0.0, 0.0)) == 0.0);
  CHECK(postselection_probability(params(0.0, M_PI)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(postselection_probability(params(0.1, 0.0)) ==
        doctest::Approx(0.0099006633466223489).epsilon(1e-14));

  // Consistency with direct quadrature of the unnormalized numerator over
  // the (k sigma, phi) grid.
  for (double ks : {0.0, 0.05, 0.1, 0.3}) {
    for (double phi : {0.0, 1e-3, 0.1, M_PI / 2.0}) {
      const auto p = params(ks, phi);
      const auto numerator = [&](double x) {
        const double amp = postselected_amplitude(x, p);
        return amp * amp;
      };
      const double quad = oracle::integrate(numerator, -14.0, 0.0, 1e-15) +
                          oracle::integrate(numerator, 0.0, 14.0, 1e-15);
      const double pf = postselection_probability(p);
      if (pf == 0.0) {
        CHECK(std::abs(quad) < 1e-15);
      } else {
        CHECK(std::abs(quad - pf) / pf < 1e-9);
      }
    }
  }
}

TEST_CASE("iwv approximation of the postselection probability") {
  CHECK(postselection_probability_iwv_approx(params(0.1, 0.0)) == doctest::Approx(0.01));
  CHECK(postselection_probability_iwv_approx(params(0.0, 0.3)) == 0.0);
  const double exact = postselection_probability(params(0.1, 0.0));
  const double approx = postselection_probability_iwv_approx(params(0.1, 0.0));
  CHECK(std::abs(approx - exact) / exact == doctest::Approx(0.010033).epsilon(1e-3));
}

TEST_CASE("pdf_noiseless: normalization, symmetry, mean") {
  auto p = params(0.1, 0.0);
  SUBCASE("phi = 0 is symmetric with zero mean") {
    const auto d = pdf_noiseless(p);
    CHECK(std::abs(d.integral() - 1.0) < 1e-9);
    CHECK(std::abs(d.mean()) < 1e-12);
  }
  SUBCASE("mean tracks phi/k in the iwv regime") {
    p.phi = 1e-3;
    const double m = mean_shift_exact(p);
    CHECK(std::abs(m - p.phi / p.k) / (p.phi / p.k) < 0.02);
    CHECK(m == doctest::Approx(0.0099000866456815814).epsilon(1e-10));
    CHECK(m == doctest::Approx(mean_closed(p)).epsilon(1e-9));
  }
  SUBCASE("pure gaussian at k = 0, phi = pi") {
    const auto d = pdf_noiseless(params(0.0, M_PI));
    CHECK(std::abs(d.mean()) < 1e-12);
    CHECK(d.variance() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("normalization holds across the parameter grid") {
    for (double ks : {0.05, 0.1, 0.3}) {
      for (double phi : {1e-3, 0.1, M_PI / 2.0}) {
        const auto d = pdf_noiseless(params(ks, phi));
        CHECK(std::abs(d.integral() - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("pdf_noiseless: mirror symmetry p(x; phi) = p(-x; -phi)") {
  const auto dplus = pdf_noiseless(params(0.1, 0.37));
  const auto dminus = pdf_noiseless(params(0.1, -0.37));
  const double peak = dplus.max_value();
  double worst = 0.0;
  for (std::size_t i = 0; i < dplus.size(); ++i) {
    worst = std::max(worst,
                     std::abs(dplus.values[i] - dminus.values[dminus.size() - 1 - i]));
  }
  CHECK(worst < 1e-12 * peak);
}

TEST_CASE("pdf_noiseless: dark point vanishes to 1e-12 of the peak") {
  // Fine grid: quadratic interpolation carries a cubic residue ~ p''' dx^3
  // which must sit below the 1e-12 bar.
  const auto grid = GridSpec::centered(12.0, std::size_t{1} << 18);
  for (double phi : {1e-3, 0.05}) {
    const auto p = params(0.1, phi);
    const auto d = pdf_noiseless(p, grid);
    const double x_dark = -p.phi / (2.0 * p.k);
    const double interp = oracle::quadratic_interp_at(d, x_dark);
    CHECK(std::abs(interp) <= 1e-12 * d.max_value());
  }
}

TEST_CASE("pdf_noiseless: degenerate and narrow-grid errors") {
  CHECK_THROWS_AS(pdf_noiseless(params(0.0, 0.0)), DegenerateParamsError);
  CHECK_THROWS_AS(pdf_noiseless(params(0.1, 1e-3), GridSpec::centered(2.0, 1 << 10)),
                  GridTooNarrowError);
}

TEST_CASE("mean_shift_exact: trivial zeros") {
  CHECK(mean_shift_exact(params(0.1, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(mean_shift_exact(params(0.0, M_PI))) < 1e-12);
}

TEST_CASE("regime flag") {
  CHECK(params(0.1, 1e-3).in_inverse_weak_value_regime());
  CHECK_FALSE(params(0.1, 0.5).in_inverse_weak_value_regime());
  CHECK_FALSE(params(1.5, 0.5).in_inverse_weak_value_regime());
}
