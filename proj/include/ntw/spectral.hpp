#pragma once

// Zero-padded spectra, standard analysis windows, and the frequency-response
// ceiling used to constrain window design.

#include "ntw/gabor.hpp"

#include <string>
#include <vector>

namespace ntw {

/// Guard added to magnitudes before taking logarithms for display.
inline constexpr double kMagnitudeFloor = 1e-12;

/// Default oversampling of the zero-padded DFT relative to the window length.
inline constexpr int kDefaultOversampling = 16;

/// F g with F[m, n] = exp(-i 2 pi m n / K~) / sqrt(K~). F* F is the identity
/// on length-K inputs. Throws std::invalid_argument if K~ < K.
ComplexVector zero_pad_dft(const RealVector& g, int k_tilde);
ComplexVector zero_pad_dft(const Window& g, int k_tilde);

/// F* v, truncated to the first K samples.
ComplexVector zero_pad_dft_adjoint(const ComplexVector& spectrum, int K);

/// 20 log10(|x| + kMagnitudeFloor), elementwise.
RealVector magnitude_db(const ComplexVector& spectrum);

/// Hann window sampled at half-integer positions, w[l] = sin^2(pi (l + 1/2) / K).
/// Strictly positive and symmetric, w[l] = w[K - 1 - l]. Throws for K < 2.
Window hann_window(int K);

/// Kaiser-Bessel window I0(pi alpha sqrt(1 - x^2)) / I0(pi alpha) on the same
/// half-integer grid, x = 2 (l + 1/2) / K - 1. alpha = 0 gives all ones.
Window kaiser_window(int K, double alpha);

Window rectangular_window(int K);

/// Scales g so that its energy equals a / M.
Window normalize_energy(const Window& g, const GaborParams& p);

struct SpectralKnot {
  int bin = 0;
  double db = 0.0;
};

/// Positive ceiling d over all K~ bins of the zero-padded spectrum.
struct FrequencyEnvelope {
  RealVector d;                    // linear magnitude, length K~
  int k_tilde = 0;
  int window_length = 0;           // K of the window the ceiling applies to
  std::vector<SpectralKnot> knots; // spline knots, bins 0..K~/2
  bool clamped = false;
  bool degenerate = false;         // fell back to d = |F g0|
};

/// Validates an externally supplied ceiling: K~ > K, d > 0 and
/// d[n] = d[(K~ - n) mod K~].
FrequencyEnvelope make_envelope(RealVector d, int window_length);

/// Ceiling built from g0: natural cubic spline through the dB values of bin 0,
/// every strict local maximum, and the Nyquist bin; evaluated at every bin,
/// clamped to at least |F g0|, and mirrored. Falls back to |F g0| when fewer
/// than three knots exist.
FrequencyEnvelope sidelobe_envelope(const Window& g0, int k_tilde);

}  // namespace ntw
