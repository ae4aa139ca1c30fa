#include <doctest.h>

#include <cmath>
#include <limits>

#include "iwv/errors.hpp"
#include "iwv/fisher.hpp"
#include "iwv/model.hpp"
#include "iwv/noise.hpp"

using namespace iwv;

namespace {

InterferometerParams params(double k, double phi, double sigma = 1.0) {
  InterferometerParams p;
  p.k = k;
  p.phi = phi;
  p.sigma = sigma;
  return p;
}

DensityFamily noiseless_family(const InterferometerParams& base, const GridSpec& grid) {
  return [base, grid](double phi) {
    InterferometerParams p = base;
    p.phi = phi;
    return pdf_noiseless(p, grid);
  };
}

DensityFamily additive_family(const InterferometerParams& base, double J, const GridSpec& grid) {
  return [base, J, grid](double phi) {
    InterferometerParams p = base;
    p.phi = phi;
    return pdf_additive(p, J, grid);
  };
}

}  // namespace

TEST_CASE("analytic noiseless fisher: trivial and frozen values") {
  CHECK(fisher_noiseless_analytic(params(0.0, M_PI / 2.0)).value == 0.0);
  CHECK(fisher_noiseless_analytic(params(0.1, 0.0)).value ==
        doctest::Approx(100.00333331111132).epsilon(1e-13));
  CHECK(fisher_noiseless_analytic(params(0.1, 1e-3)).value ==
        doctest::Approx(99.998383163634995).epsilon(1e-13));

  const auto degenerate = fisher_noiseless_analytic(params(0.0, 0.0));
  CHECK(degenerate.degenerate);
  CHECK(degenerate.value == 0.0);
}

TEST_CASE("event-basis bookkeeping is exact by construction") {
  const auto p = params(0.1, 0.0);
  const auto per_event = fisher_noiseless_analytic(p);
  const double pf = postselection_probability(p);
  const auto per_input = per_event.per_input_event(pf);
  CHECK(per_input.basis == EventBasis::per_input_event);
  CHECK(per_input.value == per_event.value * pf);
  // Small-phi total-information law (frozen closed-form product):
  CHECK(per_input.value == doctest::Approx(0.99009933665337765).epsilon(1e-13));
  const auto total = per_event.total(pf, 1e6);
  CHECK(total.value == doctest::Approx(0.99009933665337765e6).epsilon(1e-13));
}

TEST_CASE("small-phi total-information law across k sigma") {
  for (double ks : {0.05, 0.1, 0.3}) {
    const auto p = params(ks, 1e-4);
    const double per_input =
        fisher_noiseless_analytic(p).per_input_event(postselection_probability(p)).value;
    const double law = 0.5 * (1.0 + std::exp(-2.0 * ks * ks));
    CHECK(std::abs(per_input - law) / law < 1e-4);
  }
}

TEST_CASE("numeric curvature matches the closed form over the acceptance grid") {
  for (double ks : {0.01, 0.05, 0.1, 0.3}) {
    for (double phi : {0.0, 1e-3, 0.05}) {
      const auto p = params(ks, phi);
      const auto grid = default_noiseless_grid(p);
      const auto family = noiseless_family(p, grid);
      const double dphi = recommended_dphi(p.k, grid.dx, phi);
      const double numeric = fisher_numeric(family, phi, dphi).value;
      const double analytic = fisher_noiseless_analytic(p).value;
      CHECK(std::abs(numeric - analytic) / analytic < 1e-6);
    }
  }
}

TEST_CASE("second-derivative form cross-checks the variance form") {
  const auto p = params(0.1, 1e-3);
  const auto grid = default_noiseless_grid(p);
  const auto family = noiseless_family(p, grid);
  const double dphi = recommended_dphi(p.k, grid.dx, p.phi);
  const double variance_form = fisher_numeric(family, p.phi, dphi).value;
  const double second_form = fisher_numeric_second_form(family, p.phi, dphi);
  CHECK(std::abs(second_form - variance_form) / variance_form < 1e-4);
}

TEST_CASE("a too-coarse default step is rejected at a dark point") {
  const auto p = params(0.01, 0.0);
  const auto grid = default_noiseless_grid(p);
  CHECK_THROWS_AS(fisher_numeric(noiseless_family(p, grid), 0.0, 1e-4),
                  UnstableCurvatureError);
}

TEST_CASE("additive approximation Eq values and limits") {
  CHECK(fisher_additive_approx(params(0.1, 0.0), 0.0).value == doctest::Approx(100.0));
  CHECK(fisher_additive_approx(params(0.1, 0.0), 0.1).value ==
        doctest::Approx(87.466858626845).epsilon(1e-12));
  CHECK(fisher_additive_approx(params(0.1, 0.0), 0.3).value ==
        doctest::Approx(62.400575880535).epsilon(1e-12));

  // sigma >> J: per-input-event information approaches 1
  const auto p = params(0.05, 1e-4);
  const double per_input = fisher_additive_approx(p, 1e-3 * p.sigma)
                               .per_input_event(postselection_probability(p))
                               .value;
  CHECK(std::abs(per_input - 1.0) < 0.02);
}

TEST_CASE("additive channel: numeric fisher at J = 0 equals the noiseless numeric") {
  const auto p = params(0.1, 1e-3);
  const auto grid = default_additive_grid(p, 0.0);
  const double dphi = recommended_dphi(p.k, grid.dx, p.phi);
  const double noiseless = fisher_numeric(noiseless_family(p, grid), p.phi, dphi).value;
  const double additive = fisher_numeric(additive_family(p, 0.0, grid), p.phi, dphi).value;
  CHECK(std::abs(additive - noiseless) / noiseless < 1e-9);
}

TEST_CASE("additive channel: first-order formula within 5% of numeric curvature in-regime") {
  const auto p = params(0.1, 1e-3);
  const double J = 0.1;
  const auto grid = default_additive_grid(p, J);
  const double numeric =
      fisher_numeric(additive_family(p, J, grid), p.phi,
                     recommended_dphi(p.k, grid.dx, p.phi)).value;
  const double approx = fisher_additive_approx(p, J).value;
  CHECK(std::abs(numeric - approx) / numeric < 0.05);
}

TEST_CASE("monotone noise damage: per-input information non-increasing in J") {
  const auto p = params(0.1, 1e-3);
  double prev = std::numeric_limits<double>::infinity();
  for (double J : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const auto grid = default_additive_grid(p, J);
    const double numeric =
        fisher_numeric(additive_family(p, J, grid), p.phi,
                       recommended_dphi(p.k, grid.dx, p.phi)).value;
    const double per_input = numeric * postselection_probability(p);
    CHECK(per_input <= prev * (1.0 + 1e-9));
    prev = per_input;
  }
}

TEST_CASE("jitter approximation: algebraic reductions") {
  auto p = params(0.1, 1e-3);
  p.k0 = 1e5;
  p.ell1 = 0.0;
  CHECK(fisher_jitter_approx(p, 0.3).value ==
        doctest::Approx(1.0 / (p.k * p.k * p.sigma * p.sigma)).epsilon(1e-12));

  // k0 sigma >> ell1/sigma and k0 sigma >> ell1 Q: reduces to 1/(k^2 s^2)
  p.ell1 = 10.0;
  CHECK(fisher_jitter_approx(p, 0.1).value ==
        doctest::Approx(1.0 / (p.k * p.k * p.sigma * p.sigma)).epsilon(1e-6));

  // ell2 is ignored with a warning
  p.ell2 = 50.0;
  const auto r = fisher_jitter_approx(p, 0.1);
  bool warned = false;
  for (const auto& w : r.warnings) warned |= (w.find("ell2") != std::string::npos);
  CHECK(warned);
}

TEST_CASE("fisher results clip tiny negatives and warn on formula breakdown") {
  // The first-order additive formula goes negative for J/sigma > sqrt(2/pi); the library clamps at 0.
  const auto r = fisher_additive_approx(params(0.1, 0.0), 0.9);
  CHECK(r.value == 0.0);
  CHECK(!r.warnings.empty());
}
