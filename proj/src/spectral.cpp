#include "ntw/spectral.hpp"

#include "ntw/spline.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ntw {

namespace {

std::vector<double> half_integer_grid(int K) {
  std::vector<double> x(K);
  for (int l = 0; l < K; ++l) x[l] = 2.0 * (l + 0.5) / K - 1.0;
  return x;
}

void require_length(int K, const char* family) {
  if (K < 2) {
    std::ostringstream msg;
    msg << family << " window needs K >= 2, got " << K;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ComplexVector zero_pad_dft(const RealVector& g, int k_tilde) {
  if (k_tilde < g.size()) {
    std::ostringstream msg;
    msg << "zero-padded DFT length " << k_tilde << " is shorter than the window (" << g.size()
        << ")";
    throw std::invalid_argument(msg.str());
  }
  std::vector<Complex> padded(k_tilde, Complex{});
  for (Eigen::Index l = 0; l < g.size(); ++l) padded[l] = g[l];
  std::vector<Complex> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, padded);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k_tilde));
  ComplexVector out(k_tilde);
  for (int n = 0; n < k_tilde; ++n) out[n] = spectrum[n] * scale;
  return out;
}

ComplexVector zero_pad_dft(const Window& g, int k_tilde) {
  return zero_pad_dft(g.samples(), k_tilde);
}

ComplexVector zero_pad_dft_adjoint(const ComplexVector& spectrum, int K) {
  const auto k_tilde = static_cast<int>(spectrum.size());
  if (K > k_tilde) throw std::invalid_argument("adjoint truncation longer than the spectrum");
  std::vector<Complex> in(spectrum.data(), spectrum.data() + k_tilde);
  std::vector<Complex> time;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(time, in);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k_tilde));
  ComplexVector out(K);
  for (int l = 0; l < K; ++l) out[l] = time[l] * scale;
  return out;
}

RealVector magnitude_db(const ComplexVector& spectrum) {
  return spectrum.unaryExpr([](const Complex& z) { return 20.0 * std::log10(std::abs(z) + kMagnitudeFloor); })
      .real();
}

Window hann_window(int K) {
  require_length(K, "Hann");
  RealVector w(K);
  for (int l = 0; l < K; ++l) {
    const double s = std::sin(std::numbers::pi * (l + 0.5) / K);
    w[l] = s * s;
  }
  std::ostringstream prov;
  prov << "hann(K=" << K << ")";
  return Window(std::move(w), "hann", prov.str());
}

Window kaiser_window(int K, double alpha) {
  require_length(K, "Kaiser");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("Kaiser parameter alpha must be finite and >= 0");
  }
  const double beta = std::numbers::pi * alpha;
  const double norm = std::cyl_bessel_i(0.0, beta);
  const std::vector<double> x = half_integer_grid(K);
  RealVector w(K);
  for (int l = 0; l < K; ++l) {
    w[l] = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x[l] * x[l])) / norm;
  }
  std::ostringstream prov;
  prov << "kaiser(K=" << K << ", alpha=" << alpha << ")";
  return Window(std::move(w), "kaiser", prov.str());
}

Window rectangular_window(int K) {
  if (K < 1) throw std::invalid_argument("rectangular window needs K >= 1");
  std::ostringstream prov;
  prov << "rectangular(K=" << K << ")";
  return Window(RealVector::Ones(K), "rectangular", prov.str());
}

Window normalize_energy(const Window& g, const GaborParams& p) {
  const double target = static_cast<double>(p.hop()) / p.channels();
  RealVector scaled = g.samples() * std::sqrt(target / g.energy());
  std::string provenance = g.provenance();
  if (provenance.find("energy=a/M") == std::string::npos) {
    provenance += provenance.empty() ? "energy=a/M" : ", energy=a/M";
  }
  Window out(std::move(scaled), g.name(), std::move(provenance));
  return g.ambient_length() ? out.with_ambient_length(*g.ambient_length()) : out;
}

FrequencyEnvelope make_envelope(RealVector d, int window_length) {
  const auto k_tilde = static_cast<int>(d.size());
  if (window_length < 1 || k_tilde <= window_length) {
    std::ostringstream msg;
    msg << "envelope length K~ = " << k_tilde << " must exceed the window length K = "
        << window_length;
    throw std::invalid_argument(msg.str());
  }
  if (!d.allFinite() || !(d.minCoeff() > 0.0)) {
    throw std::invalid_argument("envelope values must be finite and positive");
  }
  for (int n = 1; n < k_tilde; ++n) {
    if (d[n] != d[k_tilde - n]) throw std::invalid_argument("envelope must satisfy d[n] = d[K~ - n]");
  }
  FrequencyEnvelope env;
  env.d = std::move(d);
  env.k_tilde = k_tilde;
  env.window_length = window_length;
  return env;
}

FrequencyEnvelope sidelobe_envelope(const Window& g0, int k_tilde) {
  const int K = g0.size();
  if (k_tilde <= K) {
    std::ostringstream msg;
    msg << "envelope length K~ = " << k_tilde << " must exceed the window length K = " << K;
    throw std::invalid_argument(msg.str());
  }
  const ComplexVector spectrum = zero_pad_dft(g0, k_tilde);
  const int half = k_tilde / 2;

  // Magnitude over bins 0..K~/2, symmetrized so the mirrored ceiling still
  // dominates |F g0| exactly on both halves.
  RealVector magnitude(half + 1);
  for (int n = 0; n <= half; ++n) {
    magnitude[n] = std::max(std::abs(spectrum[n]), std::abs(spectrum[(k_tilde - n) % k_tilde]));
  }

  // Knots in (bin, dB) on the floored display scale, so sidelobes below the
  // floor (and exact nulls) do not drag the curve towards -inf.
  const auto to_db = [](double m) { return 20.0 * std::log10(m + kMagnitudeFloor); };
  std::vector<SpectralKnot> knots;
  knots.push_back({0, to_db(magnitude[0])});
  for (int n = 1; n < half; ++n) {
    if (magnitude[n] > magnitude[n - 1] && magnitude[n] > magnitude[n + 1]) {
      knots.push_back({n, to_db(magnitude[n])});
    }
  }
  knots.push_back({half, to_db(magnitude[half])});

  FrequencyEnvelope env;
  env.k_tilde = k_tilde;
  env.window_length = K;
  env.clamped = true;

  RealVector upper_half = magnitude;
  if (knots.size() < 3) {
    env.degenerate = true;
  } else {
    std::vector<double> x, y;
    x.reserve(knots.size());
    y.reserve(knots.size());
    for (const auto& k : knots) {
      x.push_back(k.bin);
      y.push_back(k.db);
    }
    const NaturalCubicSpline spline(std::move(x), std::move(y));
    for (int n = 0; n <= half; ++n) {
      upper_half[n] = std::max(std::pow(10.0, spline(n) / 20.0), magnitude[n]);
      if (!std::isfinite(upper_half[n])) upper_half[n] = magnitude[n];
    }
  }
  // Exact spectral nulls would give a zero ceiling; keep d positive.
  upper_half = upper_half.cwiseMax(magnitude.maxCoeff() * 1e-16);

  RealVector d(k_tilde);
  for (int n = 0; n <= half; ++n) d[n] = upper_half[n];
  for (int n = half + 1; n < k_tilde; ++n) d[n] = d[k_tilde - n];
  env.d = std::move(d);
  env.knots = std::move(knots);
  return env;
}

}  // namespace ntw
