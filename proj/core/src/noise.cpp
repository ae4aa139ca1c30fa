#include "iwv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iwv/errors.hpp"
#include "iwv/model.hpp"
#include "iwv/propagation.hpp"
#include "iwv/quadrature.hpp"

namespace iwv {

namespace {

inline double sine_argument(double k, double x, double phi) {
  return std::fma(k, x, 0.5 * phi);
}

}  // namespace

double pdf_additive_value(double s, const InterferometerParams& p, double J) {
  if (!(J >= 0.0)) throw std::invalid_argument("pdf_additive_value: J must be >= 0");
  if (J == 0.0) return pdf_noiseless_value(s, p);  // exact passthrough
  const double pf = postselection_probability(p);
  if (!(pf > 0.0)) {
    throw DegenerateParamsError("pdf_additive: postselection probability is zero");
  }
  const double sig2 = p.sigma * p.sigma;
  const double tau2 = J * J + sig2;
  const double env = std::exp(-s * s / (2.0 * tau2)) / std::sqrt(2.0 * M_PI * tau2);
  const double damp = std::exp(-2.0 * J * J * p.k * p.k * sig2 / tau2);
  const double co = std::cos(2.0 * p.k * s * sig2 / tau2 + p.phi);
  // The undivided expression integrates to 2 p_f, not 1.
  return env * (1.0 - co * damp) / (2.0 * pf);
}

GridSpec default_additive_grid(const InterferometerParams& p, double J) {
  const double tau = std::sqrt(p.sigma * p.sigma + J * J);
  return GridSpec::centered(12.0 * tau, std::size_t{1} << 14);
}

SampledDensity pdf_additive(const InterferometerParams& p, double J, const GridSpec& grid) {
  p.validate();
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = pdf_additive_value(grid.x(i), p, J);
  return make_density(grid, v);
}

SampledDensity pdf_additive(const InterferometerParams& p, double J) {
  return pdf_additive(p, J, default_additive_grid(p, J));
}

ComplexField jitter_field(double q, const InterferometerParams& p, const GridSpec& grid) {
  p.validate();
  if (!grid.is_power_of_two()) {
    throw std::invalid_argument("jitter_field: grid size must be a power of two");
  }
  const Fft fft(grid.n);
  const GaussianMeter meter{p.sigma, 0.0};

  ComplexField f;
  f.x0 = grid.x0;
  f.dx = grid.dx;
  f.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double g = meter.amplitude(x);
    f.values[i] = std::polar(g, q * x);
  }
  free_propagate(f, p.ell1, p.k0, fft);
  for (std::size_t i = 0; i < grid.n; ++i) {
    f.values[i] *= std::sin(sine_argument(p.k, grid.x(i), p.phi));
  }
  free_propagate(f, p.ell2, p.k0, fft);
  return f;
}

GridSpec default_jitter_grid(const InterferometerParams& p, double Q, int q_nodes) {
  p.validate();
  const double sigma_det = propagated_sigma(p.sigma, p.ell1 + p.ell2, p.k0);
  double q_max = 0.0;
  if (Q > 0.0) {
    const GaussHermiteRule gh = gauss_hermite(q_nodes);
    double tmax = 0.0;
    for (double t : gh.nodes) tmax = std::max(tmax, std::abs(t));
    q_max = std::sqrt(2.0) * Q * tmax;
  }
  const double half = 16.0 * sigma_det + q_max * (p.ell1 + p.ell2) / p.k0;
  std::size_t n = std::size_t{1} << 16;
  while (2.0 * half / static_cast<double>(n - 1) > p.sigma / 16.0) n <<= 1;
  return GridSpec::centered(half, n);
}

struct JitterModel::Impl {
  InterferometerParams params;
  double Q = 0.0;
  GridSpec grid;
  Fft fft;
  std::vector<double> q_abscissas;
  std::vector<double> q_weights;  // sum to 1
  // One field per q node: initial state kicked by q and propagated through
  // ell1. Everything downstream depends on phi.
  std::vector<std::vector<std::complex<double>>> stage1;

  Impl(const InterferometerParams& p, double q_std, const GridSpec& g, int q_nodes)
      : params(p), Q(q_std), grid(g), fft(g.n) {
    params.validate();
    if (!(q_std >= 0.0)) throw std::invalid_argument("JitterModel: Q must be >= 0");
    if (!grid.is_power_of_two()) {
      throw std::invalid_argument("JitterModel: grid size must be a power of two");
    }
    if (q_std == 0.0) {
      q_abscissas = {0.0};
      q_weights = {1.0};
    } else {
      if (q_nodes < 21) throw std::invalid_argument("JitterModel: q_nodes must be >= 21");
      const GaussianAverage rule = gaussian_average_rule(q_std, q_nodes);
      q_abscissas = rule.abscissas;
      q_weights = rule.weights;
    }
    const GaussianMeter meter{params.sigma, 0.0};
    stage1.resize(q_abscissas.size());
    ComplexField f;
    f.x0 = grid.x0;
    f.dx = grid.dx;
    for (std::size_t iq = 0; iq < q_abscissas.size(); ++iq) {
      const double q = q_abscissas[iq];
      f.values.resize(grid.n);
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        f.values[i] = std::polar(meter.amplitude(x), q * x);
      }
      free_propagate(f, params.ell1, params.k0, fft);
      stage1[iq] = std::move(f.values);
    }
  }

  // |psi_q|^2 at the detector for stage-1 field iq and the given phi.
  void detector_intensity(std::size_t iq, double phi, std::vector<double>& out,
                          std::vector<std::complex<double>>& scratch) const {
    scratch = stage1[iq];
    for (std::size_t i = 0; i < grid.n; ++i) {
      scratch[i] *= std::sin(sine_argument(params.k, grid.x(i), phi));
    }
    ComplexField f{grid.x0, grid.dx, std::move(scratch)};
    free_propagate(f, params.ell2, params.k0, fft);
    scratch = std::move(f.values);
    out.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) out[i] = std::norm(scratch[i]);
  }
};

JitterModel::JitterModel(const InterferometerParams& p, double Q, const GridSpec& grid,
                         int q_nodes)
    : impl_(std::make_unique<Impl>(p, Q, grid, q_nodes)) {}

JitterModel::JitterModel(const InterferometerParams& p, double Q, int q_nodes)
    : JitterModel(p, Q, default_jitter_grid(p, Q, q_nodes), q_nodes) {}

JitterModel::~JitterModel() = default;
JitterModel::JitterModel(JitterModel&&) noexcept = default;
JitterModel& JitterModel::operator=(JitterModel&&) noexcept = default;

const GridSpec& JitterModel::grid() const { return impl_->grid; }
const InterferometerParams& JitterModel::params() const { return impl_->params; }
double JitterModel::Q() const { return impl_->Q; }

JitterMarginal JitterModel::marginal(double phi) const {
  const auto& im = *impl_;
  std::vector<double> acc(im.grid.n, 0.0);
  std::vector<double> intensity;
  std::vector<std::complex<double>> scratch;
  double pbar = 0.0;
  // Fixed sequential accumulation over q nodes keeps results independent of
  // any outer parallelism.
  for (std::size_t iq = 0; iq < im.q_abscissas.size(); ++iq) {
    im.detector_intensity(iq, phi, intensity, scratch);
    const double w = im.q_weights[iq];
    pbar += w * trapezoid(intensity, im.grid.dx);
    for (std::size_t i = 0; i < im.grid.n; ++i) acc[i] += w * intensity[i];
  }
  JitterMarginal out;
  out.mean_postselection = pbar;
  out.density = make_density(im.grid, acc);
  return out;
}

JointDensity JitterModel::joint(double phi, std::size_t nq, double q_half_width_in_sigmas,
                                std::size_t x_stride) const {
  const auto& im = *impl_;
  if (x_stride == 0) throw std::invalid_argument("JitterModel::joint: x_stride must be >= 1");
  if (im.Q == 0.0) nq = 1;
  if (nq == 0) throw std::invalid_argument("JitterModel::joint: nq must be >= 1");
  if (nq > 1 && nq % 2 == 0) ++nq;  // keep q = 0 on the grid

  JointDensity joint;
  joint.nx = (im.grid.n - 1) / x_stride + 1;
  joint.nq = nq;
  joint.dx = im.grid.dx * static_cast<double>(x_stride);
  joint.x0 = im.grid.x0;
  if (nq == 1) {
    joint.q0 = 0.0;
    joint.dq = 0.0;
  } else {
    const double hw = q_half_width_in_sigmas * im.Q;
    joint.q0 = -hw;
    joint.dq = 2.0 * hw / static_cast<double>(nq - 1);
  }
  joint.values.resize(joint.nx * joint.nq);

  const GaussianMeter meter{im.params.sigma, 0.0};
  std::vector<double> intensity;
  std::vector<std::complex<double>> scratch;
  ComplexField f;
  f.x0 = im.grid.x0;
  f.dx = im.grid.dx;
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double q = joint.q(iq);
    f.values.resize(im.grid.n);
    for (std::size_t i = 0; i < im.grid.n; ++i) {
      const double x = im.grid.x(i);
      f.values[i] = std::polar(meter.amplitude(x), q * x);
    }
    free_propagate(f, im.params.ell1, im.params.k0, im.fft);
    for (std::size_t i = 0; i < im.grid.n; ++i) {
      f.values[i] *= std::sin(sine_argument(im.params.k, im.grid.x(i), phi));
    }
    free_propagate(f, im.params.ell2, im.params.k0, im.fft);
    const double gauss = (nq == 1) ? 1.0 : std::exp(-q * q / (2.0 * im.Q * im.Q));
    for (std::size_t jx = 0; jx < joint.nx; ++jx) {
      joint.values[iq * joint.nx + jx] = gauss * std::norm(f.values[jx * x_stride]);
    }
  }

  const double raw = joint.integral();
  if (!(raw > 0.0)) throw std::invalid_argument("JitterModel::joint: zero mass");
  for (double& v : joint.values) v /= raw;
  return joint;
}

SampledDensity pdf_jitter_marginal(const InterferometerParams& p, double Q,
                                   const GridSpec& grid, int q_nodes) {
  return JitterModel(p, Q, grid, q_nodes).marginal(p.phi).density;
}

JointDensity pdf_jitter_joint(const InterferometerParams& p, double Q, const GridSpec& grid,
                              std::size_t nq) {
  return JitterModel(p, Q, grid).joint(p.phi, nq);
}

}  // namespace iwv
