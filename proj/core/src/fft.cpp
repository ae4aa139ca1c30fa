#include "iwv/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace iwv {

Fft::Fft(std::size_t n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("Fft: size must be a power of two >= 2");
  }
  bitrev_.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
    bitrev_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    twiddles_[j] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != n_) throw std::invalid_argument("Fft: data size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t stride = n_ / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddles_[j * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = data[start + j];
        const std::complex<double> t = w * data[start + j + half];
        data[start + j] = u + t;
        data[start + j + half] = u - t;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v *= scale;
  }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }

void Fft::inverse(std::span<std::complex<double>> data) const { transform(data, true); }

std::vector<double> fft_momentum_grid(std::size_t n, double dx) {
  std::vector<double> p(n);
  const double dp = 2.0 * M_PI / (static_cast<double>(n) * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<std::ptrdiff_t>(j);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    const auto idx = (sj < half) ? sj : sj - static_cast<std::ptrdiff_t>(n);
    p[j] = dp * static_cast<double>(idx);
  }
  return p;
}

}  // namespace iwv
