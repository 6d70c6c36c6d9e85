#include "ntw/fixtures.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ntw {

namespace {

struct Formants {
  std::array<double, 3> frequency;
  std::array<double, 3> bandwidth;
};

Formants draw_formants(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f1(300.0, 850.0), f2(900.0, 2300.0), f3(2400.0, 3400.0);
  std::uniform_real_distribution<double> bw(60.0, 180.0);
  return {{f1(rng), f2(rng), f3(rng)}, {bw(rng), bw(rng), bw(rng)}};
}

// Two-pole resonator with unit gain near its centre frequency.
struct Resonator {
  double y1 = 0.0, y2 = 0.0;
  double process(double x, double f, double b, double fs) {
    const double r = std::exp(-std::numbers::pi * b / fs);
    const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * f / fs);
    const double a2 = -r * r;
    const double y = (1.0 - r) * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

RealVector speech_like_fixture(std::uint64_t seed, int length, double sample_rate) {
  if (length <= 0) throw std::invalid_argument("fixture length must be positive");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  RealVector out = RealVector::Zero(length);
  std::array<Resonator, 3> tract;
  double tilt = 0.0;   // one-pole lowpass on the excitation
  double phase = 0.0;  // glottal phase in cycles

  int pos = static_cast<int>(unit(rng) * 0.05 * sample_rate);
  while (pos < length) {
    const int syllable = static_cast<int>((0.15 + 0.15 * unit(rng)) * sample_rate);
    const int pause = static_cast<int>((0.03 + 0.07 * unit(rng)) * sample_rate);
    const bool voiced = unit(rng) < 0.75;
    const double f0_start = 90.0 + 130.0 * unit(rng);
    const double f0_end = f0_start * (0.8 + 0.4 * unit(rng));
    const double level = 0.5 + unit(rng);
    const Formants from = draw_formants(rng);
    const Formants to = draw_formants(rng);

    for (int i = 0; i < syllable && pos + i < length; ++i) {
      const double t = static_cast<double>(i) / syllable;
      double excitation;
      if (voiced) {
        const double f0 = f0_start + (f0_end - f0_start) * t;
        phase += f0 * (1.0 + 0.01 * normal(rng)) / sample_rate;
        excitation = 0.02 * normal(rng);
        if (phase >= 1.0) {
          phase -= std::floor(phase);
          excitation += 1.0;
        }
      } else {
        excitation = 0.3 * normal(rng);
      }
      tilt = 0.9 * tilt + excitation;
      double y = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double f = from.frequency[k] + (to.frequency[k] - from.frequency[k]) * t;
        const double b = from.bandwidth[k] + (to.bandwidth[k] - from.bandwidth[k]) * t;
        y += tract[k].process(voiced ? tilt : excitation, f, b, sample_rate) / (k + 1);
      }
      const double envelope = std::pow(std::sin(std::numbers::pi * t), 2.0);
      out[pos + i] = level * envelope * y;
    }
    pos += syllable + pause;
  }

  const double rms = std::sqrt(out.squaredNorm() / length);
  if (!(rms > 0.0)) {
    // Length shorter than the leading silence: fall back to plain noise.
    for (int i = 0; i < length; ++i) out[i] = normal(rng);
    return out / std::sqrt(out.squaredNorm() / length);
  }
  return out / rms;
}

std::vector<RealVector> fixture_corpus(int count, std::uint64_t first_seed, int length) {
  if (count < 0) throw std::invalid_argument("fixture count must be >= 0");
  std::vector<RealVector> corpus;
  corpus.reserve(count);
  for (int i = 0; i < count; ++i) corpus.push_back(speech_like_fixture(first_seed + i, length));
  return corpus;
}

RealVector sine_tone(double frequency, int length, double sample_rate) {
  RealVector out(length);
  for (int i = 0; i < length; ++i) {
    out[i] = std::sin(2.0 * std::numbers::pi * frequency * i / sample_rate);
  }
  return out;
}

}  // namespace ntw
