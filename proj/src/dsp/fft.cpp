#include <cmath>
#include <numbers>

#include "semcom/dsp.hpp"
#include "semcom/errors.hpp"

namespace semcom::dsp {

void fft_inplace(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InvalidArgument("fft length must be a power of two, got " + std::to_string(n));

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        // direct twiddle per k keeps the error flat for long transforms
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = x[start + k];
        const auto v = x[start + k + len / 2] * w;
        x[start + k] = u + v;
        x[start + k + len / 2] = u - v;
      }
  }
}

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x) {
  fft_inplace(x);
  return x;
}

std::vector<double> hamming(std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (len < 2) return w;
  for (std::size_t i = 0; i < len; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(len - 1));
  return w;
}

}  // namespace semcom::dsp
