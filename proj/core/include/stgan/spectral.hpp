#pragma once

#include <complex>
#include <span>
#include <vector>

namespace stgan {

/// Discrete Fourier coefficients of a real series.
struct Spectrum {
  std::vector<std::complex<double>> coefficients;
  std::size_t source_length = 0;
};

/// X_m = sum_n x_n exp(-i 2 pi m n / N), evaluated directly in O(N^2) with a
/// shared twiddle table.
Spectrum dft(std::span<const double> x);

/// x_n = (1/N) sum_m X_m exp(+i 2 pi m n / N). Imaginary residue is dropped;
/// a residue above 1e-9 (relative to the largest magnitude) means the
/// spectrum was not conjugate-symmetric and raises NumericError.
std::vector<double> idft(const Spectrum& s);

/// Keeps the k strongest frequency units and inverts. A unit is the DC bin,
/// the Nyquist bin (even N) or a conjugate pair {m, N-m}; units are ranked by
/// magnitude, lower frequency first on ties. k >= number of units keeps all.
std::vector<double> reconstruct_topk(const Spectrum& s, std::size_t k);

/// Per-ticker trend columns built from reconstruct_topk.
struct SpectralFeatures {
  std::vector<double> recon_low;   // k = ks.first
  std::vector<double> recon_high;  // k = ks.second
};

SpectralFeatures spectral_features(std::span<const double> close, std::size_t k_low = 3,
                                   std::size_t k_high = 9);

}  // namespace stgan
