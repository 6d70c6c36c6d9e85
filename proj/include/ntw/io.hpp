#pragma once

// File formats: window JSON/CSV, design reports, envelopes, evaluation
// records. Every writer stamps the resolved run config into the file.

#include "ntw/admm.hpp"
#include "ntw/enhance.hpp"
#include "ntw/gabor.hpp"
#include "ntw/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntw::io {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

struct WindowFile {
  explicit WindowFile(Window w) : window(std::move(w)) {}

  Window window;
  std::optional<int> hop;
  std::optional<int> channels;
  std::optional<int> length;
};

/// {name, K, L, a, M, samples[], provenance, config}. The lattice fields are
/// written only when p is given.
Json window_to_json(const Window& w, const std::optional<GaborParams>& p, const Json& config);
WindowFile window_from_json(const Json& j);

void write_window_json(const std::filesystem::path& path, const Window& w,
                       const std::optional<GaborParams>& p, const Json& config);
/// One sample per line after '#' comment lines carrying name and config.
void write_window_csv(const std::filesystem::path& path, const Window& w, const Json& config);

/// Dispatches on the extension (.json, otherwise CSV).
WindowFile read_window(const std::filesystem::path& path);

/// Plain list of numbers, one per line; '#' lines and a non-numeric first
/// line are skipped.
RealVector read_sample_csv(const std::filesystem::path& path);
void write_sample_csv(const std::filesystem::path& path, const RealVector& x,
                      const std::string& column, const Json& config);

Json report_to_json(const DesignReport& r, const Json& config);
void write_report_json(const std::filesystem::path& path, const DesignReport& r,
                       const Json& config);
/// iteration,primal_residual
void write_residual_csv(const std::filesystem::path& path, const std::vector<double>& history,
                        const Json& config);

/// bin,linear,dB
void write_envelope_csv(const std::filesystem::path& path, const FrequencyEnvelope& env,
                        const Json& config);
void write_envelope_json(const std::filesystem::path& path, const FrequencyEnvelope& env,
                         const Json& config);

struct FileRecord {
  std::string file;
  EvalRecord record;
};

void write_records_csv(const std::filesystem::path& path, const std::vector<FileRecord>& rows,
                       const Json& config);
void write_records_json(const std::filesystem::path& path, const std::vector<FileRecord>& rows,
                        const Json& config);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
/// "# config <compact json>\n" without output_dir and threads, which do not
/// affect results.
std::string config_comment(const Json& config);

}  // namespace ntw::io
