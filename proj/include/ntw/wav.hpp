#pragma once

// Mono RIFF/WAVE I/O: 16-bit PCM and 32-bit IEEE float.

#include "ntw/gabor.hpp"

#include <filesystem>

namespace ntw::io {

enum class WavFormat { Pcm16, Float32 };

struct Audio {
  RealVector samples;  // [-1, 1) for PCM input
  int sample_rate = 16000;
};

/// Throws IoError on unreadable files, multi-channel data or unsupported
/// encodings.
Audio read_wav(const std::filesystem::path& path);

/// PCM output clips to [-1, 1].
void write_wav(const std::filesystem::path& path, const Audio& audio, WavFormat format);

}  // namespace ntw::io
