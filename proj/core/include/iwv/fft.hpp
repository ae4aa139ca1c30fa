#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace iwv {

/// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
/// table. Sizes must be powers of two. Plans are immutable after
/// construction and safe to share across threads.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place forward transform: X_j = sum_m x_m exp(-2 pi i j m / n).
  void forward(std::span<std::complex<double>> data) const;

  /// In-place inverse transform, including the 1/n factor.
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i j / n), j < n/2
};

/// Momentum values in FFT bin order for an n-point grid of pitch dx:
/// p_j = 2 pi j / (n dx) for j < n/2, and 2 pi (j - n) / (n dx) above.
std::vector<double> fft_momentum_grid(std::size_t n, double dx);

}  // namespace iwv
