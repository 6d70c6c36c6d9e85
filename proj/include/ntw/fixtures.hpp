#pragma once

// Seeded speech-like test signals: a glottal pulse train or noise burst per
// syllable, shaped by slowly moving formant resonators and a syllabic envelope.

#include "ntw/gabor.hpp"

#include <cstdint>
#include <vector>

namespace ntw {

inline constexpr double kFixtureSampleRate = 16000.0;
inline constexpr int kFixtureLength = 16000;

/// Unit-RMS signal of the given length. Identical seeds give identical output.
RealVector speech_like_fixture(std::uint64_t seed, int length = kFixtureLength,
                               double sample_rate = kFixtureSampleRate);

/// Fixtures for seeds first_seed, first_seed + 1, ...
std::vector<RealVector> fixture_corpus(int count, std::uint64_t first_seed = 1,
                                       int length = kFixtureLength);

/// Unit-amplitude sine, used by the decision-directed tests.
RealVector sine_tone(double frequency, int length, double sample_rate = kFixtureSampleRate);

}  // namespace ntw
