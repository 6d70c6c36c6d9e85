#pragma once

// Run configuration shared by every subcommand. Loaded from one JSON
// document; unknown keys are rejected so typos fail loudly.

#include "ntw/admm.hpp"
#include "ntw/enhance.hpp"
#include "ntw/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ntw::app {

struct LatticeConfig {
  int a = 192;
  int M = 256;
  std::optional<int> L;  // default: smallest multiple of lcm(a, M) >= K
};

struct WindowConfig {
  std::string family = "hann";  // hann, kaiser, rect
  int K = 256;
  double alpha = 10.0;
  bool normalize = true;        // scale to energy a/M
  std::optional<std::string> path;  // load instead of generating
};

struct EnvelopeConfig {
  std::optional<int> K_tilde;  // default 16 K
};

struct AdmmSection {
  std::vector<double> beta_grid{1.0};
  AdmmConfig solver;
};

struct GenerateSection {
  bool tight = false;
  bool dual = false;
  std::string format = "both";  // json, csv, both
};

struct EvalConfig {
  double snr_db = 0.0;
  std::string mask = "ideal";
  double dd_alpha = kDefaultDdAlpha;
  std::string noise_psd = "oracle";
  std::optional<std::string> psd_path;
  std::uint64_t noise_seed = 1;
  std::vector<std::string> inputs;
  int fixtures = 0;
  std::uint64_t fixture_seed = 1;
  int fixture_length = 16000;
  std::vector<int> hops;
  std::vector<std::string> windows;  // sweep ids: hann, kaiser, <family>-tight, or a window file
  bool write_audio = false;
  std::string audio_format = "pcm16";  // pcm16, float32
};

struct RunConfig {
  LatticeConfig lattice;
  WindowConfig window;
  EnvelopeConfig envelope;
  AdmmSection admm;
  GenerateSection generate;
  EvalConfig eval;
  std::string output_dir = "out";
  int threads = 0;  // 0 keeps the OpenMP default
};

class ConfigFileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

RunConfig config_from_json(const io::Json& j);
io::Json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

/// Lattice of the config, with L defaulted from the window length.
GaborParams lattice_params(const RunConfig& c, int window_length);
int envelope_bins(const RunConfig& c, int window_length);

}  // namespace ntw::app
