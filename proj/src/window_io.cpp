#include "ntw/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ntw::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

Json vector_json(const RealVector& x) {
  Json arr = Json::array();
  for (double v : x) arr.push_back(v);
  return arr;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string config_comment(const Json& config) {
  Json settings = config;
  if (settings.is_object()) {
    settings.erase("output_dir");
    settings.erase("threads");
  }
  return "# config " + settings.dump() + "\n";
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  close_out(out, path);
}

Json window_to_json(const Window& w, const std::optional<GaborParams>& p, const Json& config) {
  Json j;
  j["name"] = w.name();
  j["K"] = w.size();
  if (p) {
    j["L"] = p->length();
    j["a"] = p->hop();
    j["M"] = p->channels();
  } else if (w.ambient_length()) {
    j["L"] = *w.ambient_length();
  }
  j["samples"] = vector_json(w.samples());
  j["provenance"] = w.provenance();
  j["config"] = config;
  return j;
}

WindowFile window_from_json(const Json& j) {
  try {
    const auto& samples = j.at("samples");
    RealVector x(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) x[i] = samples[i].get<double>();
    if (j.contains("K") && j["K"].get<int>() != x.size()) {
      throw IoError("window JSON: K does not match the number of samples");
    }
    WindowFile out{Window(std::move(x), j.value("name", std::string("custom")),
                          j.value("provenance", std::string()))};
    if (j.contains("a")) out.hop = j["a"].get<int>();
    if (j.contains("M")) out.channels = j["M"].get<int>();
    if (j.contains("L")) out.length = j["L"].get<int>();
    if (out.length) out.window = out.window.with_ambient_length(*out.length);
    return out;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed window JSON: ") + e.what());
  }
}

void write_window_json(const std::filesystem::path& path, const Window& w,
                       const std::optional<GaborParams>& p, const Json& config) {
  write_json_file(path, window_to_json(w, p, config));
}

void write_window_csv(const std::filesystem::path& path, const Window& w, const Json& config) {
  auto out = open_out(path);
  out << "# name " << w.name() << '\n';
  if (!w.provenance().empty()) out << "# provenance " << w.provenance() << '\n';
  out << config_comment(config);
  for (double v : w.samples()) out << format_double(v) << '\n';
  close_out(out, path);
}

RealVector read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    // Keep the last column so two-column exports (index,value) also load.
    const auto comma = text.find_last_of(',');
    const std::string field = trim(comma == std::string::npos ? text : text.substr(comma + 1));
    const auto value = parse_double(field);
    if (!value) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
    header_allowed = false;
    values.push_back(*value);
  }
  if (values.empty()) throw IoError("'" + path.string() + "' holds no samples");
  return Eigen::Map<RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

WindowFile read_window(const std::filesystem::path& path) {
  if (path.extension() == ".json") return window_from_json(read_json_file(path));
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string name = path.stem().string();
  std::string provenance;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# name ", 0) == 0) name = trim(line.substr(7));
    if (line.rfind("# provenance ", 0) == 0) provenance = trim(line.substr(13));
  }
  return WindowFile{Window(read_sample_csv(path), name, provenance)};
}

void write_sample_csv(const std::filesystem::path& path, const RealVector& x,
                      const std::string& column, const Json& config) {
  auto out = open_out(path);
  out << config_comment(config) << column << '\n';
  for (double v : x) out << format_double(v) << '\n';
  close_out(out, path);
}

Json report_to_json(const DesignReport& r, const Json& config) {
  Json j;
  j["window"] = window_to_json(r.window, std::nullopt, Json::object());
  j["window"].erase("config");
  j["beta"] = r.beta;
  j["kappa"] = finite_or_null(r.kappa);
  j["distance_to_tight"] = r.distance_to_tight;
  j["initial_distance_to_tight"] = r.initial_distance_to_tight;
  j["max_constraint_violation"] = r.max_constraint_violation;
  j["admm_constraint_violation"] = finite_or_null(r.admm_constraint_violation);
  j["polished"] = r.polished;
  j["polish_displacement"] = r.polish_displacement;
  j["leaked_energy"] = r.leaked_energy;
  j["iterations_run"] = r.iterations_run;
  j["converged"] = r.converged;
  Json history = Json::array();
  for (double v : r.residual_history) history.push_back(finite_or_null(v));
  j["residual_history"] = std::move(history);
  j["config"] = config;
  return j;
}

void write_report_json(const std::filesystem::path& path, const DesignReport& r,
                       const Json& config) {
  write_json_file(path, report_to_json(r, config));
}

void write_residual_csv(const std::filesystem::path& path, const std::vector<double>& history,
                        const Json& config) {
  auto out = open_out(path);
  out << config_comment(config) << "iteration,primal_residual\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    out << k + 1 << ',' << format_double(history[k]) << '\n';
  }
  close_out(out, path);
}

void write_envelope_csv(const std::filesystem::path& path, const FrequencyEnvelope& env,
                        const Json& config) {
  auto out = open_out(path);
  out << config_comment(config) << "bin,linear,dB\n";
  for (int n = 0; n < env.k_tilde; ++n) {
    out << n << ',' << format_double(env.d[n]) << ',' << format_double(20.0 * std::log10(env.d[n]))
        << '\n';
  }
  close_out(out, path);
}

void write_envelope_json(const std::filesystem::path& path, const FrequencyEnvelope& env,
                         const Json& config) {
  Json j;
  j["K"] = env.window_length;
  j["K_tilde"] = env.k_tilde;
  j["clamped"] = env.clamped;
  j["degenerate"] = env.degenerate;
  Json knots = Json::array();
  for (const SpectralKnot& k : env.knots) knots.push_back({{"bin", k.bin}, {"dB", k.db}});
  j["knots"] = std::move(knots);
  j["d"] = vector_json(env.d);
  j["config"] = config;
  write_json_file(path, j);
}

void write_records_csv(const std::filesystem::path& path, const std::vector<FileRecord>& rows,
                       const Json& config) {
  auto out = open_out(path);
  out << config_comment(config)
      << "file,window_id,hop,mask_kind,snr_in_db,snr_out_db,kappa,signals,error\n";
  for (const FileRecord& row : rows) {
    const EvalRecord& r = row.record;
    std::string error = r.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << row.file << ',' << r.window_id << ',' << r.hop << ',' << r.mask_kind << ','
        << format_double(r.snr_in_db) << ',' << format_double(r.snr_out_db) << ','
        << format_double(r.kappa) << ',' << r.signals << ',' << error << '\n';
  }
  close_out(out, path);
}

void write_records_json(const std::filesystem::path& path, const std::vector<FileRecord>& rows,
                        const Json& config) {
  Json records = Json::array();
  for (const FileRecord& row : rows) {
    const EvalRecord& r = row.record;
    Json j;
    j["file"] = row.file;
    j["window_id"] = r.window_id;
    j["hop"] = r.hop;
    j["mask_kind"] = r.mask_kind;
    j["snr_in_db"] = finite_or_null(r.snr_in_db);
    j["snr_out_db"] = finite_or_null(r.snr_out_db);
    j["kappa"] = finite_or_null(r.kappa);
    j["signals"] = r.signals;
    if (!r.error.empty()) j["error"] = r.error;
    records.push_back(std::move(j));
  }
  write_json_file(path, Json{{"records", std::move(records)}, {"config", config}});
}

}  // namespace ntw::io
