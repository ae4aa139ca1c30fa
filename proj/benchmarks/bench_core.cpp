#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "iwv/estimation.hpp"
#include "iwv/fft.hpp"
#include "iwv/fisher.hpp"
#include "iwv/model.hpp"
#include "iwv/noise.hpp"

namespace {

iwv::InterferometerParams params(double k, double phi, double sigma = 1.0) {
  iwv::InterferometerParams p;
  p.k = k;
  p.phi = phi;
  p.sigma = sigma;
  return p;
}

void BM_PdfNoiseless(benchmark::State& state) {
  const auto p = params(0.1, 1e-3);
  for (auto _ : state) {
    auto d = iwv::pdf_noiseless(p);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_PdfNoiseless)->Unit(benchmark::kMillisecond);

void BM_Fft(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const iwv::Fft fft(n);
  std::vector<std::complex<double>> data(n, {1.0, 0.5});
  for (auto _ : state) {
    fft.forward(data);
    fft.inverse(data);
    benchmark::DoNotOptimize(data);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(1 << 12, 1 << 16)->Complexity();

void BM_FisherNumericNoiseless(benchmark::State& state) {
  const auto p = params(0.1, 1e-3);
  const auto grid = iwv::default_noiseless_grid(p);
  const iwv::DensityFamily family = [p, grid](double phi) {
    auto q = p;
    q.phi = phi;
    return iwv::pdf_noiseless(q, grid);
  };
  const double dphi = iwv::recommended_dphi(p.k, grid.dx, p.phi);
  for (auto _ : state) {
    auto r = iwv::fisher_numeric(family, p.phi, dphi);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_FisherNumericNoiseless)->Unit(benchmark::kMillisecond);

void BM_JitterMarginal(benchmark::State& state) {
  auto p = params(0.05, 1e-3, 2.0);
  p.k0 = 1e5;
  p.ell1 = 1e5;
  p.ell2 = 1e2;
  const iwv::JitterModel model(p, 2.0 * p.k);
  for (auto _ : state) {
    auto m = model.marginal(p.phi);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_JitterMarginal)->Unit(benchmark::kMillisecond);

void BM_SamplePositions(benchmark::State& state) {
  const auto d = iwv::pdf_noiseless(params(0.1, 1e-3));
  for (auto _ : state) {
    iwv::RngStream rng(7, 0);
    auto xs = iwv::sample_positions(d, 100000, rng);
    benchmark::DoNotOptimize(xs);
  }
}
BENCHMARK(BM_SamplePositions)->Unit(benchmark::kMillisecond);

void BM_MlePhi(benchmark::State& state) {
  const auto p = params(0.1, 1e-3);
  const auto grid = iwv::default_noiseless_grid(p);
  const iwv::DensityFamily family = [p, grid](double phi) {
    auto q = p;
    q.phi = phi;
    return iwv::pdf_noiseless(q, grid);
  };
  iwv::RngStream rng(3, 0);
  const auto xs = iwv::sample_positions(family(p.phi), 2000, rng);
  for (auto _ : state) {
    auto r = iwv::mle_phi(xs, family, p.phi - 0.02, p.phi + 0.02);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MlePhi)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
