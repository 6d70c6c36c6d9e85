#include "ntw/wav.hpp"

#include "ntw/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace ntw::io {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::uint8_t* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::array<std::uint8_t, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

Audio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = "'" + path.string() + "': ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError(where + "not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::uint32_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const auto size = read_le<std::uint32_t>(chunk + 4);
    if (pos + 8 + size > bytes.size()) {
      // Truncated final data chunk: keep what is there.
      if (std::memcmp(chunk, "data", 4) != 0) throw IoError(where + "truncated chunk");
    }
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw IoError(where + "short fmt chunk");
      format = read_le<std::uint16_t>(chunk + 8);
      channels = read_le<std::uint16_t>(chunk + 10);
      rate = read_le<std::uint32_t>(chunk + 12);
      bits = read_le<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible && available >= 40) format = read_le<std::uint16_t>(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = static_cast<std::uint32_t>(available);
    }
    pos += 8 + size + (size & 1U);
  }
  if (channels == 0) throw IoError(where + "missing fmt chunk");
  if (!data) throw IoError(where + "missing data chunk");
  if (channels != 1) throw IoError(where + "expected mono audio, found " + std::to_string(channels) + " channels");

  Audio audio;
  audio.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    audio.samples.resize(data_size / 2);
    for (Eigen::Index i = 0; i < audio.samples.size(); ++i) {
      audio.samples[i] = read_le<std::int16_t>(data + 2 * i) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    audio.samples.resize(data_size / 4);
    for (Eigen::Index i = 0; i < audio.samples.size(); ++i) {
      audio.samples[i] = read_le<float>(data + 4 * i);
    }
  } else {
    throw IoError(where + "unsupported encoding (format " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bits); expected 16-bit PCM or 32-bit float");
  }
  return audio;
}

void write_wav(const std::filesystem::path& path, const Audio& audio, WavFormat format) {
  if (audio.sample_rate <= 0) throw IoError("sample rate must be positive");
  const bool pcm = format == WavFormat::Pcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t block = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put<std::uint32_t>(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put<std::uint32_t>(out, 16);
  put<std::uint16_t>(out, pcm ? kFormatPcm : kFormatFloat);
  put<std::uint16_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate) * block);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(block));
  put<std::uint16_t>(out, bits);
  put_tag(out, "data");
  put<std::uint32_t>(out, data_size);
  for (double v : audio.samples) {
    if (pcm) {
      const double clipped = std::clamp(v, -1.0, 1.0);
      put<std::int16_t>(out, static_cast<std::int16_t>(std::clamp(std::lround(clipped * 32768.0), -32768L, 32767L)));
    } else {
      put<float>(out, static_cast<float>(v));
    }
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace ntw::io
