#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "iwv/errors.hpp"
#include "iwv/fft.hpp"
#include "iwv/grid.hpp"
#include "iwv/propagation.hpp"
#include "iwv/quadrature.hpp"

using namespace iwv;

TEST_CASE("grid: centered construction and density plumbing") {
  const auto g = GridSpec::centered(12.0, 1 << 14);
  CHECK(g.x0 == -12.0);
  CHECK(g.x_max() == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(g.is_power_of_two());

  // even point count leaves no sample at x = 0 exactly
  bool has_zero = false;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (g.x(i) == 0.0) has_zero = true;
  }
  CHECK_FALSE(has_zero);
}

TEST_CASE("make_density rejects bad input") {
  const auto g = GridSpec::centered(1.0, 8);
  std::vector<double> v(8, 1.0);
  v[3] = -0.5;
  CHECK_THROWS_AS(make_density(g, v), std::invalid_argument);
  std::vector<double> flat(8, 1.0);  // no decay at the edges
  CHECK_THROWS_AS(make_density(g, flat), GridTooNarrowError);
}

TEST_CASE("fft matches a brute-force dft") {
  const std::size_t n = 512;
  const Fft fft(n);
  std::vector<std::complex<double>> data(n), ref(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    data[i] = {std::sin(0.1 * t) + 0.2 * std::cos(0.7 * t), std::cos(1.3 * t)};
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double ang = -2.0 * M_PI * static_cast<double>(j * m % n) / static_cast<double>(n);
      acc += data[m] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    ref[j] = acc;
  }
  auto fwd = data;
  fft.forward(fwd);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(fwd[j] - ref[j]));
  CHECK(worst < 1e-10);

  auto back = fwd;
  fft.inverse(back);
  worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back[j] - data[j]));
  CHECK(worst < 1e-13);
}

TEST_CASE("gauss-hermite: exact gaussian moments") {
  const auto rule = gauss_hermite(41);
  REQUIRE(rule.size() == 41);

  // nodes symmetric, weights positive
  for (std::size_t i = 0; i < rule.size(); ++i) {
    CHECK(rule.weights[i] > 0.0);
    CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.size() - 1 - i]).epsilon(1e-14));
  }

  // integral x^{2m} e^{-x^2} dx = Gamma(m + 1/2) = (2m-1)!! sqrt(pi) / 2^m,
  // exact for 2m <= 2n - 1
  long double expected = std::sqrt(M_PIl);
  for (int m = 0; m <= 12; ++m) {
    if (m > 0) expected *= (2.0L * m - 1.0L) / 2.0L;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      acc += rule.weights[i] * std::pow(rule.nodes[i], 2 * m);
    }
    CHECK(std::abs(acc - static_cast<double>(expected)) <
          1e-13 * static_cast<double>(expected));
  }
}

TEST_CASE("gaussian average rule integrates smooth functions") {
  const auto avg = gaussian_average_rule(2.0, 41);
  double wsum = std::accumulate(avg.weights.begin(), avg.weights.end(), 0.0);
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
  // E[cos(q)] for q ~ N(0, 4) is e^{-2}
  double acc = 0.0;
  for (std::size_t i = 0; i < avg.abscissas.size(); ++i) {
    acc += avg.weights[i] * std::cos(avg.abscissas[i]);
  }
  CHECK(acc == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

namespace {

ComplexField gaussian_field(double sigma, const GridSpec& g) {
  ComplexField f;
  f.x0 = g.x0;
  f.dx = g.dx;
  f.values.resize(g.n);
  const double amp = std::pow(2.0 * M_PI * sigma * sigma, -0.25);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    f.values[i] = amp * std::exp(-x * x / (4.0 * sigma * sigma));
  }
  return f;
}

double intensity_std(const ComplexField& f) {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = trapezoid_weight(i, f.size(), f.dx) * std::norm(f.values[i]);
    m0 += w;
    m1 += w * f.x(i);
    m2 += w * f.x(i) * f.x(i);
  }
  const double mean = m1 / m0;
  return std::sqrt(m2 / m0 - mean * mean);
}

}  // namespace

TEST_CASE("free propagation: unitary and matches the gaussian width law") {
  const double sigma = 0.5, k0 = 1e5;
  for (double ell : {1e2, 2.5e4, 2.5e5}) {
    const double target = propagated_sigma(sigma, ell, k0);
    const auto g = GridSpec::centered(16.0 * target, std::size_t{1} << 16);
    auto f = gaussian_field(sigma, g);
    const double norm_before = f.norm();
    free_propagate(f, ell, k0);
    CHECK(std::abs(f.norm() - norm_before) < 1e-12);
    CHECK(std::abs(intensity_std(f) - target) / target < 1e-6);
  }
}

TEST_CASE("free propagation: aliasing guard fires on an undersized grid") {
  const double sigma = 0.5, k0 = 1e5;
  const auto g = GridSpec::centered(4.0, std::size_t{1} << 8);
  auto f = gaussian_field(sigma, g);
  CHECK_THROWS_AS(free_propagate(f, 1e7, k0), GridAliasingError);
}

TEST_CASE("ell = 0 is an exact passthrough") {
  const double sigma = 1.0, k0 = 1e5;
  const auto g = GridSpec::centered(16.0, std::size_t{1} << 12);
  auto f = gaussian_field(sigma, g);
  const auto before = f.values;
  free_propagate(f, 0.0, k0);
  CHECK(f.values == before);
}
