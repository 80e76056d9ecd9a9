#include "stgan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stgan/errors.hpp"

namespace stgan {

namespace {

using cplx = std::complex<double>;

// twiddle[j] = exp(-i 2 pi j / N); exponents are reduced mod N so every
// product m*n maps to an exact table entry.
std::vector<cplx> twiddles(std::size_t n) {
  std::vector<cplx> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    w[j] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

}  // namespace

Spectrum dft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw ValidationError("dft of an empty series");
  const auto w = twiddles(n);
  Spectrum s;
  s.source_length = n;
  s.coefficients.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      re += x[t] * w[idx].real();
      im += x[t] * w[idx].imag();
      idx += m;
      if (idx >= n) idx -= n;
    }
    s.coefficients[m] = {re, im};
  }
  return s;
}

std::vector<double> idft(const Spectrum& s) {
  const std::size_t n = s.coefficients.size();
  if (n == 0 || n != s.source_length) throw ValidationError("malformed spectrum");
  const auto w = twiddles(n);
  std::vector<double> out(n);
  double max_mag = 0.0;
  for (const auto& c : s.coefficients) max_mag = std::max(max_mag, std::abs(c));
  double max_imag = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m) {
      // exp(+i theta) = conj(exp(-i theta))
      const cplx e = std::conj(w[idx]);
      const cplx v = s.coefficients[m] * e;
      re += v.real();
      im += v.imag();
      idx += t;
      if (idx >= n) idx -= n;
    }
    out[t] = re / static_cast<double>(n);
    max_imag = std::max(max_imag, std::abs(im / static_cast<double>(n)));
  }
  if (max_imag > 1e-9 * std::max(1.0, max_mag)) {
    throw NumericError("inverse transform has imaginary residue " + std::to_string(max_imag));
  }
  return out;
}

std::vector<double> reconstruct_topk(const Spectrum& s, std::size_t k) {
  const std::size_t n = s.coefficients.size();
  if (k > n) throw ValidationError("reconstruct_topk: k exceeds series length");
  // unit u = frequency index in [0, n/2]; pairs carry their mirror bin.
  const std::size_t units = n / 2 + 1;
  std::vector<std::size_t> order(units);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(s.coefficients[a]) > std::abs(s.coefficients[b]);
  });
  // Evaluating only the kept units is the inverse transform of the zeroed
  // spectrum; a conjugate pair contributes 2 Re(X_m e^{+i 2 pi m t / N}).
  const auto w = twiddles(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < std::min(k, units); ++i) {
    const std::size_t m = order[i];
    const cplx c = s.coefficients[m];
    const double weight = (m == 0 || 2 * m == n) ? 1.0 : 2.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      out[t] += weight * (c * std::conj(w[idx])).real();
      idx += m;
      if (idx >= n) idx -= n;
    }
  }
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

SpectralFeatures spectral_features(std::span<const double> close, std::size_t k_low, std::size_t k_high) {
  const Spectrum s = dft(close);
  const std::size_t n = close.size();
  return {reconstruct_topk(s, std::min(k_low, n)), reconstruct_topk(s, std::min(k_high, n))};
}

}  // namespace stgan
