#include "ntw/config.hpp"

#include <set>

namespace ntw::app {

namespace {

using io::Json;

void reject_unknown(const Json& j, const std::string& section, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigFileError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigFileError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
    }
  }
}

template <typename T>
void take(const Json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

template <typename T>
void take(const Json& j, const char* key, std::optional<T>& target) {
  if (j.contains(key)) {
    if (j.at(key).is_null()) {
      target.reset();
    } else {
      target = j.at(key).get<T>();
    }
  }
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  try {
    reject_unknown(j, "", {"lattice", "window", "envelope", "admm", "generate", "eval", "output_dir", "threads"});
    if (j.contains("lattice")) {
      const Json& s = j["lattice"];
      reject_unknown(s, "lattice", {"a", "M", "L"});
      take(s, "a", c.lattice.a);
      take(s, "M", c.lattice.M);
      take(s, "L", c.lattice.L);
    }
    if (j.contains("window")) {
      const Json& s = j["window"];
      reject_unknown(s, "window", {"family", "K", "alpha", "normalize", "path"});
      take(s, "family", c.window.family);
      take(s, "K", c.window.K);
      take(s, "alpha", c.window.alpha);
      take(s, "normalize", c.window.normalize);
      take(s, "path", c.window.path);
    }
    if (j.contains("envelope")) {
      const Json& s = j["envelope"];
      reject_unknown(s, "envelope", {"K_tilde"});
      take(s, "K_tilde", c.envelope.K_tilde);
    }
    if (j.contains("admm")) {
      const Json& s = j["admm"];
      reject_unknown(s, "admm", {"beta", "beta_grid", "mu", "lambda", "max_iter", "tol_primal",
                                 "tol_change", "restarts", "seed", "polish"});
      if (s.contains("beta") && s.contains("beta_grid")) {
        throw ConfigFileError("give either admm.beta or admm.beta_grid, not both");
      }
      if (s.contains("beta")) c.admm.beta_grid = {s["beta"].get<double>()};
      take(s, "beta_grid", c.admm.beta_grid);
      AdmmConfig& a = c.admm.solver;
      take(s, "mu", a.mu);
      take(s, "lambda", a.lambda);
      take(s, "max_iter", a.max_iter);
      take(s, "tol_primal", a.tol_primal);
      take(s, "tol_change", a.tol_change);
      take(s, "restarts", a.restarts);
      take(s, "seed", a.seed);
      take(s, "polish", a.polish);
    }
    if (j.contains("generate")) {
      const Json& s = j["generate"];
      reject_unknown(s, "generate", {"tight", "dual", "format"});
      take(s, "tight", c.generate.tight);
      take(s, "dual", c.generate.dual);
      take(s, "format", c.generate.format);
    }
    if (j.contains("eval")) {
      const Json& s = j["eval"];
      reject_unknown(s, "eval", {"snr_db", "mask", "dd_alpha", "noise_psd", "psd_path", "noise_seed",
                                 "inputs", "fixtures", "fixture_seed", "fixture_length", "hops",
                                 "windows", "write_audio", "audio_format"});
      EvalConfig& e = c.eval;
      take(s, "snr_db", e.snr_db);
      take(s, "mask", e.mask);
      take(s, "dd_alpha", e.dd_alpha);
      take(s, "noise_psd", e.noise_psd);
      take(s, "psd_path", e.psd_path);
      take(s, "noise_seed", e.noise_seed);
      take(s, "inputs", e.inputs);
      take(s, "fixtures", e.fixtures);
      take(s, "fixture_seed", e.fixture_seed);
      take(s, "fixture_length", e.fixture_length);
      take(s, "hops", e.hops);
      take(s, "windows", e.windows);
      take(s, "write_audio", e.write_audio);
      take(s, "audio_format", e.audio_format);
    }
    take(j, "output_dir", c.output_dir);
    take(j, "threads", c.threads);
  } catch (const Json::exception& e) {
    throw ConfigFileError(std::string("bad config value: ") + e.what());
  }
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["lattice"] = {{"a", c.lattice.a}, {"M", c.lattice.M}, {"L", optional_json(c.lattice.L)}};
  j["window"] = {{"family", c.window.family}, {"K", c.window.K}, {"alpha", c.window.alpha},
                 {"normalize", c.window.normalize}, {"path", optional_json(c.window.path)}};
  j["envelope"] = {{"K_tilde", optional_json(c.envelope.K_tilde)}};
  const AdmmConfig& a = c.admm.solver;
  j["admm"] = {{"beta_grid", c.admm.beta_grid}, {"mu", a.mu}, {"lambda", a.lambda},
               {"max_iter", a.max_iter}, {"tol_primal", optional_json(a.tol_primal)},
               {"tol_change", a.tol_change}, {"restarts", a.restarts}, {"seed", a.seed},
               {"polish", a.polish}};
  j["generate"] = {{"tight", c.generate.tight}, {"dual", c.generate.dual}, {"format", c.generate.format}};
  const EvalConfig& e = c.eval;
  j["eval"] = {{"snr_db", e.snr_db}, {"mask", e.mask}, {"dd_alpha", e.dd_alpha},
               {"noise_psd", e.noise_psd}, {"psd_path", optional_json(e.psd_path)},
               {"noise_seed", e.noise_seed}, {"inputs", e.inputs}, {"fixtures", e.fixtures},
               {"fixture_seed", e.fixture_seed}, {"fixture_length", e.fixture_length},
               {"hops", e.hops}, {"windows", e.windows}, {"write_audio", e.write_audio},
               {"audio_format", e.audio_format}};
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j;
}

RunConfig load_config(const std::string& path) {
  try {
    return config_from_json(io::read_json_file(path));
  } catch (const io::IoError& e) {
    throw ConfigFileError(e.what());
  }
}

GaborParams lattice_params(const RunConfig& c, int window_length) {
  const int L = c.lattice.L.value_or(default_ambient_length(c.lattice.a, c.lattice.M, window_length));
  return GaborParams::make(c.lattice.a, c.lattice.M, L);
}

int envelope_bins(const RunConfig& c, int window_length) {
  return c.envelope.K_tilde.value_or(kDefaultOversampling * window_length);
}

}  // namespace ntw::app
