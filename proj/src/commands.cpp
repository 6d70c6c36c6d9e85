#include "ntw/commands.hpp"

#include "ntw/fixtures.hpp"
#include "ntw/io.hpp"
#include "ntw/spectral.hpp"
#include "ntw/wav.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <filesystem>
#include <iostream>

namespace ntw::app {

namespace fs = std::filesystem;
using io::Json;

namespace {

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
}

Window family_window(const std::string& family, int K, double alpha) {
  if (family == "hann") return hann_window(K);
  if (family == "kaiser") return kaiser_window(K, alpha);
  if (family == "rect" || family == "rectangular") return rectangular_window(K);
  throw ConfigFileError("unknown window family '" + family + "' (expected hann, kaiser or rect)");
}

// Generated windows are scaled to energy a/M; loaded windows are used as stored.
Window configured_window(const RunConfig& cfg) {
  if (cfg.window.path) return io::read_window(*cfg.window.path).window;
  Window w = family_window(cfg.window.family, cfg.window.K, cfg.window.alpha);
  if (cfg.window.normalize) w = normalize_energy(w, lattice_params(cfg, w.size()));
  return w;
}

MaskSpec mask_spec(const RunConfig& cfg, int channels) {
  MaskSpec spec;
  spec.kind = parse_mask_kind(cfg.eval.mask);
  spec.dd_alpha = cfg.eval.dd_alpha;
  spec.noise_psd_mode = parse_noise_psd_mode(cfg.eval.noise_psd);
  if (spec.noise_psd_mode == NoisePsdMode::Supplied) {
    if (!cfg.eval.psd_path) throw ConfigFileError("noise_psd = supplied needs eval.psd_path");
    spec.supplied_psd = io::read_sample_csv(*cfg.eval.psd_path);
    if (spec.supplied_psd.size() != channels) {
      throw ConfigFileError("supplied noise PSD has " + std::to_string(spec.supplied_psd.size()) +
                            " entries, expected M = " + std::to_string(channels));
    }
  }
  return spec;
}

struct Signal {
  std::string id;
  RealVector samples;
  int sample_rate = static_cast<int>(kFixtureSampleRate);
};

std::vector<Signal> load_signals(const RunConfig& cfg) {
  std::vector<Signal> out;
  for (const std::string& path : cfg.eval.inputs) {
    const fs::path p(path);
    if (p.extension() == ".wav") {
      io::Audio audio = io::read_wav(p);
      out.push_back({p.stem().string(), std::move(audio.samples), audio.sample_rate});
    } else {
      out.push_back({p.stem().string(), io::read_sample_csv(p)});
    }
  }
  for (int i = 0; i < cfg.eval.fixtures; ++i) {
    const std::uint64_t seed = cfg.eval.fixture_seed + i;
    out.push_back({"fixture" + std::to_string(seed),
                   speech_like_fixture(seed, cfg.eval.fixture_length)});
  }
  if (out.empty()) throw ConfigFileError("no input signals (give eval.inputs or eval.fixtures)");
  return out;
}

std::vector<int> hop_list(const RunConfig& cfg) {
  return cfg.eval.hops.empty() ? std::vector<int>{cfg.lattice.a} : cfg.eval.hops;
}

EvalRecord new_record(const std::string& window_id, int hop, MaskKind kind) {
  EvalRecord r;
  r.window_id = window_id;
  r.hop = hop;
  r.mask_kind = to_string(kind);
  return r;
}

std::string beta_tag(double beta) { return "beta" + io::format_double(beta); }

void write_window_files(const fs::path& stem, const Window& w, const GaborParams& p,
                        const std::string& format, const Json& config) {
  if (format == "json" || format == "both") {
    io::write_window_json(fs::path(stem).concat(".json"), w, p, config);
  }
  if (format == "csv" || format == "both") {
    io::write_window_csv(fs::path(stem).concat(".csv"), w, config);
  }
}

template <typename Body>
int guarded(const char* command, Body body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {  // config, lattice and shape errors
    std::cerr << "ntw " << command << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const io::IoError& e) {
    std::cerr << "ntw " << command << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const NotAFrameError& e) {
    std::cerr << "ntw " << command << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "ntw " << command << ": " << e.what() << '\n';
    return kExitAllFailed;
  }
}

}  // namespace

int cmd_generate(const RunConfig& cfg) {
  return guarded("generate", [&] {
    apply_threads(cfg);
    const std::string& format = cfg.generate.format;
    if (format != "json" && format != "csv" && format != "both") {
      throw ConfigFileError("generate.format must be json, csv or both");
    }
    const Json config = config_to_json(cfg);
    const Window w = configured_window(cfg);
    const GaborParams p = lattice_params(cfg, w.size());
    const fs::path out(cfg.output_dir);
    const std::string base = w.name() + "-" + std::to_string(w.size());
    write_window_files(out / base, w, p, format, config);
    if (cfg.generate.tight) {
      const Window tight(canonical_tight(w, p), w.name() + "-tight",
                         "canonical tight of " + w.name());
      write_window_files(out / (base + "-tight"), tight, p, format, config);
    }
    if (cfg.generate.dual) {
      const Window dual(canonical_dual(w, p), w.name() + "-dual", "canonical dual of " + w.name());
      write_window_files(out / (base + "-dual"), dual, p, format, config);
    }
    return kExitOk;
  });
}

int cmd_design(const RunConfig& cfg) {
  return guarded("design", [&] {
    apply_threads(cfg);
    if (cfg.admm.beta_grid.empty()) throw ConfigFileError("admm.beta_grid is empty");
    for (double beta : cfg.admm.beta_grid) {
      AdmmConfig check = cfg.admm.solver;
      check.beta = beta;
      check.validate();
    }
    const Json config = config_to_json(cfg);
    const Window g0 = configured_window(cfg);
    const GaborParams p = lattice_params(cfg, g0.size());
    const FrequencyEnvelope env = sidelobe_envelope(g0, envelope_bins(cfg, g0.size()));
    const fs::path out(cfg.output_dir);
    io::write_envelope_csv(out / "envelope.csv", env, config);
    io::write_envelope_json(out / "envelope.json", env, config);

    const std::vector<BetaOutcome> outcomes =
        design_beta_sweep(g0, env, cfg.admm.solver, cfg.admm.beta_grid, p);

    fs::create_directories(out);
    std::ofstream summary(out / "design_summary.csv", std::ios::binary);
    if (!summary) throw io::IoError("cannot write design_summary.csv");
    summary << io::config_comment(config)
            << "beta,kappa,distance_to_tight,max_constraint_violation,admm_constraint_violation,"
               "polish_displacement,iterations,converged,error\n";
    int successes = 0;
    for (const BetaOutcome& o : outcomes) {
      const std::string tag = beta_tag(o.beta);
      summary << io::format_double(o.beta) << ',';
      if (!o.report) {
        std::cerr << "ntw design: beta = " << o.beta << " failed: " << o.error << '\n';
        std::string error = o.error;
        for (char& c : error) {
          if (c == ',' || c == '\n') c = ';';
        }
        summary << ",,,,,,," << error << '\n';
        continue;
      }
      ++successes;
      const DesignReport& r = *o.report;
      summary << io::format_double(r.kappa) << ',' << io::format_double(r.distance_to_tight) << ','
              << io::format_double(r.max_constraint_violation) << ','
              << io::format_double(r.admm_constraint_violation) << ','
              << io::format_double(r.polish_displacement) << ',' << r.iterations_run << ','
              << (r.converged ? "true" : "false") << ",\n";
      io::write_report_json(out / ("report_" + tag + ".json"), r, config);
      io::write_residual_csv(out / ("residual_" + tag + ".csv"), r.residual_history, config);
      io::write_window_json(out / ("window_" + tag + ".json"), r.window, p, config);
      io::write_window_csv(out / ("window_" + tag + ".csv"), r.window, config);
    }
    summary.close();
    return successes > 0 ? kExitOk : kExitAllFailed;
  });
}

int cmd_analyze(const RunConfig& cfg, const std::string& window_path, bool lattice_overridden) {
  return guarded("analyze", [&] {
    apply_threads(cfg);
    const io::WindowFile file = io::read_window(window_path);
    const Window& g = file.window;
    RunConfig resolved = cfg;
    if (!lattice_overridden) {
      if (file.hop) resolved.lattice.a = *file.hop;
      if (file.channels) resolved.lattice.M = *file.channels;
      if (file.length) resolved.lattice.L = *file.length;
    }
    const GaborParams p = lattice_params(resolved, g.size());
    const FrameDiagnostics diag = frame_diagnostics(g, p);
    const int k_tilde = envelope_bins(resolved, g.size());
    const ComplexVector response = zero_pad_dft(g, k_tilde);
    const Json config = config_to_json(resolved);

    Json j;
    j["window"] = io::window_to_json(g, p, Json::object());
    j["window"].erase("config");
    j["lower_bound"] = diag.lower_bound;
    j["upper_bound"] = diag.upper_bound;
    j["kappa"] = diag.condition_number;
    j["painless"] = diag.painless;
    j["redundancy"] = p.redundancy();
    if (p.warning()) j["warning"] = *p.warning();
    j["K_tilde"] = k_tilde;
    j["config"] = config;
    const fs::path out(cfg.output_dir);
    const std::string stem = fs::path(window_path).stem().string();
    io::write_json_file(out / (stem + "_analysis.json"), j);

    std::ofstream csv(out / (stem + "_response.csv"), std::ios::binary);
    if (!csv) throw io::IoError("cannot write response CSV");
    csv << io::config_comment(config) << "bin,linear,dB\n";
    for (int n = 0; n < k_tilde; ++n) {
      const double mag = std::abs(response[n]);
      csv << n << ',' << io::format_double(mag) << ','
          << io::format_double(20.0 * std::log10(mag + kMagnitudeFloor)) << '\n';
    }
    std::cout << "A = " << io::format_double(diag.lower_bound)
              << "  B = " << io::format_double(diag.upper_bound)
              << "  kappa = " << io::format_double(diag.condition_number)
              << (diag.painless ? "  (painless)" : "") << '\n';
    return kExitOk;
  });
}

int cmd_denoise(const RunConfig& cfg) {
  return guarded("denoise", [&] {
    apply_threads(cfg);
    const Json config = config_to_json(cfg);
    const std::vector<Signal> signals = load_signals(cfg);
    const Window w = configured_window(cfg);
    const int M = cfg.lattice.M;
    const MaskSpec spec = mask_spec(cfg, M);
    const io::WavFormat audio_format = cfg.eval.audio_format == "float32" ? io::WavFormat::Float32
                                                                           : io::WavFormat::Pcm16;
    if (cfg.eval.audio_format != "float32" && cfg.eval.audio_format != "pcm16") {
      throw ConfigFileError("eval.audio_format must be pcm16 or float32");
    }
    const fs::path out(cfg.output_dir);

    std::vector<io::FileRecord> rows;
    int failures = 0;
    for (int a : hop_list(cfg)) {
      EvalRecord mean = new_record(w.name(), a, spec.kind);
      double kappa = 0.0;
      try {
        kappa = condition_number(w, GaborParams::make(a, M, default_ambient_length(a, M, w.size())));
      } catch (const std::exception& e) {
        mean.error = e.what();
      }
      for (std::size_t i = 0; i < signals.size(); ++i) {
        const Signal& s = signals[i];
        EvalRecord r = new_record(w.name(), a, spec.kind);
        r.kappa = kappa;
        r.signals = 1;
        try {
          const int L = padded_length(static_cast<int>(s.samples.size()), w.size(), a, M);
          const GaborParams p = GaborParams::make(a, M, L);
          const NoisyPair pair = add_noise_at_snr(s.samples, cfg.eval.snr_db, cfg.eval.noise_seed + i);
          const RealVector estimate = enhance(pair, w, p, spec);
          r.snr_in_db = snr_db(pair.clean, pair.noisy);
          r.snr_out_db = snr_db(pair.clean, estimate);
          mean.snr_in_db += r.snr_in_db;
          mean.snr_out_db += r.snr_out_db;
          ++mean.signals;
          if (cfg.eval.write_audio) {
            const std::string tag = s.id + "_a" + std::to_string(a);
            io::write_wav(out / "audio" / (tag + "_noisy.wav"), {pair.noisy, s.sample_rate}, audio_format);
            io::write_wav(out / "audio" / (tag + "_enhanced.wav"), {estimate, s.sample_rate}, audio_format);
          }
        } catch (const std::exception& e) {
          r.error = e.what();
          ++failures;
          std::cerr << "ntw denoise: " << s.id << " at a = " << a << ": " << e.what() << '\n';
        }
        rows.push_back({s.id, std::move(r)});
      }
      if (mean.signals > 0) {
        mean.snr_in_db /= mean.signals;
        mean.snr_out_db /= mean.signals;
        mean.kappa = kappa;
      } else if (mean.error.empty()) {
        mean.error = "every file failed";
      }
      rows.push_back({"mean", std::move(mean)});
    }
    io::write_records_csv(out / "denoise_records.csv", rows, config);
    io::write_records_json(out / "denoise_records.json", rows, config);
    const auto attempted = static_cast<int>(signals.size() * hop_list(cfg).size());
    return failures == attempted ? kExitAllFailed : kExitOk;
  });
}

namespace {

NamedWindow sweep_window(const std::string& id, const RunConfig& cfg) {
  const bool is_file = id.find('/') != std::string::npos || fs::path(id).has_extension();
  if (is_file) {
    return {fs::path(id).stem().string(), io::read_window(id).window};
  }
  std::string family = id;
  bool tighten = false;
  const std::string suffix = "-tight";
  if (family.size() > suffix.size() && family.ends_with(suffix)) {
    family.resize(family.size() - suffix.size());
    tighten = true;
  }
  RunConfig one = cfg;
  one.window.family = family;
  one.window.path.reset();
  return {id, configured_window(one), tighten};
}

}  // namespace

int cmd_sweep(const RunConfig& cfg) {
  return guarded("sweep", [&] {
    apply_threads(cfg);
    const Json config = config_to_json(cfg);
    const std::vector<Signal> signals = load_signals(cfg);
    std::vector<std::string> ids = cfg.eval.windows;
    if (ids.empty()) ids = {cfg.window.path.value_or(cfg.window.family)};
    std::vector<NamedWindow> windows;
    for (const std::string& id : ids) windows.push_back(sweep_window(id, cfg));
    std::vector<RealVector> samples;
    for (const Signal& s : signals) samples.push_back(s.samples);

    SweepSetup setup;
    setup.channels = cfg.lattice.M;
    setup.snr_db = cfg.eval.snr_db;
    setup.noise_seed = cfg.eval.noise_seed;
    const std::vector<EvalRecord> records =
        sweep(windows, hop_list(cfg), samples, mask_spec(cfg, setup.channels), setup);

    std::vector<io::FileRecord> rows;
    int failures = 0;
    for (const EvalRecord& r : records) {
      if (!r.error.empty()) {
        ++failures;
        std::cerr << "ntw sweep: " << r.window_id << " at a = " << r.hop << ": " << r.error << '\n';
      }
      rows.push_back({"mean", r});
    }
    const fs::path out(cfg.output_dir);
    io::write_records_csv(out / "sweep_records.csv", rows, config);
    io::write_records_json(out / "sweep_records.json", rows, config);
    return failures == static_cast<int>(records.size()) ? kExitAllFailed : kExitOk;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Nearly tight Gabor window design and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, out_dir;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("--threads", threads, "OpenMP thread count");

  // Lattice and window overrides shared by every subcommand.
  std::optional<int> a, M, L, K, k_tilde;
  std::optional<double> alpha;
  std::optional<std::string> family, window_file;
  std::vector<CLI::Option*> lattice_opts;
  CLI::Option* no_normalize = nullptr;
  auto add_window_options = [&](CLI::App* sub) {
    lattice_opts.push_back(sub->add_option("-a,--hop", a, "time hop a"));
    lattice_opts.push_back(sub->add_option("-M,--channels", M, "frequency channels M"));
    lattice_opts.push_back(sub->add_option("-L,--length", L, "ambient length L"));
    sub->add_option("--family", family, "hann, kaiser or rect");
    sub->add_option("-K,--window-length", K, "window support K");
    sub->add_option("--alpha", alpha, "Kaiser alpha");
    sub->add_option("--window-file", window_file, "load the window instead of generating it");
    sub->add_option("--k-tilde", k_tilde, "zero-padded DFT length");
    no_normalize = sub->add_flag("--no-normalize", "keep the raw window scale");
  };

  CLI::App* generate = app.add_subcommand("generate", "write window files");
  add_window_options(generate);
  CLI::Option* tight = generate->add_flag("--tight", "also write the canonical tight window");
  CLI::Option* dual = generate->add_flag("--dual", "also write the canonical dual window");
  std::optional<std::string> format;
  generate->add_option("--format", format, "json, csv or both");

  CLI::App* design = app.add_subcommand("design", "nearly tight window design over a beta grid");
  add_window_options(design);
  std::vector<double> betas;
  std::optional<double> mu, lambda, tol_primal, tol_change;
  std::optional<int> max_iter, restarts;
  std::optional<std::uint64_t> seed;
  design->add_option("--beta", betas, "beta grid");
  design->add_option("--mu", mu, "prox step for the distance term");
  design->add_option("--lambda", lambda, "linearization step, at least mu");
  design->add_option("--max-iter", max_iter, "iteration cap per run");
  design->add_option("--tol-primal", tol_primal, "primal residual threshold");
  design->add_option("--tol-change", tol_change, "relative window change threshold");
  design->add_option("--restarts", restarts, "extra perturbed runs per beta");
  design->add_option("--seed", seed, "restart perturbation seed");
  CLI::Option* no_polish = design->add_flag("--no-polish", "skip the final projection");

  CLI::App* analyze = app.add_subcommand("analyze", "frame bounds and response of a window file");
  add_window_options(analyze);
  std::string analyze_path;
  analyze->add_option("window", analyze_path, "window JSON or CSV")->required()->check(CLI::ExistingFile);

  std::vector<std::string> inputs, window_ids;
  std::vector<int> hops;
  std::optional<int> fixtures, fixture_length;
  std::optional<std::uint64_t> fixture_seed, noise_seed;
  std::optional<double> snr, dd_alpha;
  std::optional<std::string> mask, noise_psd, psd_file, audio_format;
  CLI::Option* write_audio = nullptr;
  auto add_eval_options = [&](CLI::App* sub) {
    add_window_options(sub);
    sub->add_option("-i,--input", inputs, "WAV or CSV signals");
    sub->add_option("--fixtures", fixtures, "number of synthetic fixtures");
    sub->add_option("--fixture-seed", fixture_seed, "seed of the first fixture");
    sub->add_option("--fixture-length", fixture_length, "fixture length in samples");
    sub->add_option("--snr", snr, "input SNR in dB");
    sub->add_option("--mask", mask, "ideal or dd");
    sub->add_option("--dd-alpha", dd_alpha, "decision-directed smoothing");
    sub->add_option("--noise-psd", noise_psd, "oracle, first_frames or supplied");
    sub->add_option("--psd-file", psd_file, "CSV with M noise powers");
    sub->add_option("--noise-seed", noise_seed, "noise seed of the first signal");
    sub->add_option("--hops", hops, "hop list");
  };
  CLI::App* denoise = app.add_subcommand("denoise", "per-file Wiener denoising");
  add_eval_options(denoise);
  write_audio = denoise->add_flag("--write-audio", "write noisy and enhanced WAV files");
  denoise->add_option("--audio-format", audio_format, "pcm16 or float32");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "window x hop evaluation grid");
  add_eval_options(sweep_cmd);
  sweep_cmd->add_option("--windows", window_ids, "hann, kaiser, <family>-tight or window files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  RunConfig cfg;
  try {
    if (config_path) cfg = load_config(*config_path);
  } catch (const std::exception& e) {
    std::cerr << "ntw: " << e.what() << '\n';
    return kExitInputError;
  }
  auto set = [](auto& target, const auto& value) {
    if (value) target = *value;
  };
  set(cfg.output_dir, out_dir);
  set(cfg.threads, threads);
  set(cfg.lattice.a, a);
  set(cfg.lattice.M, M);
  if (L) cfg.lattice.L = *L;
  set(cfg.window.family, family);
  set(cfg.window.K, K);
  set(cfg.window.alpha, alpha);
  if (window_file) cfg.window.path = *window_file;
  if (k_tilde) cfg.envelope.K_tilde = *k_tilde;
  if (no_normalize && no_normalize->count()) cfg.window.normalize = false;
  if (generate->parsed()) {
    if (tight->count()) cfg.generate.tight = true;
    if (dual->count()) cfg.generate.dual = true;
    set(cfg.generate.format, format);
  }
  if (!betas.empty()) cfg.admm.beta_grid = betas;
  AdmmConfig& solver = cfg.admm.solver;
  set(solver.mu, mu);
  set(solver.lambda, lambda);
  if (tol_primal) solver.tol_primal = *tol_primal;
  set(solver.tol_change, tol_change);
  set(solver.max_iter, max_iter);
  set(solver.restarts, restarts);
  set(solver.seed, seed);
  if (no_polish->count()) solver.polish = false;
  if (!inputs.empty()) cfg.eval.inputs = inputs;
  if (!hops.empty()) cfg.eval.hops = hops;
  if (!window_ids.empty()) cfg.eval.windows = window_ids;
  set(cfg.eval.fixtures, fixtures);
  set(cfg.eval.fixture_seed, fixture_seed);
  set(cfg.eval.fixture_length, fixture_length);
  set(cfg.eval.noise_seed, noise_seed);
  set(cfg.eval.snr_db, snr);
  set(cfg.eval.dd_alpha, dd_alpha);
  set(cfg.eval.mask, mask);
  set(cfg.eval.noise_psd, noise_psd);
  if (psd_file) cfg.eval.psd_path = *psd_file;
  if (write_audio->count()) cfg.eval.write_audio = true;
  set(cfg.eval.audio_format, audio_format);

  if (generate->parsed()) return cmd_generate(cfg);
  if (design->parsed()) return cmd_design(cfg);
  if (analyze->parsed()) {
    bool overridden = false;
    for (const CLI::Option* opt : lattice_opts) overridden = overridden || opt->count() > 0;
    return cmd_analyze(cfg, analyze_path, overridden);
  }
  if (denoise->parsed()) return cmd_denoise(cfg);
  return cmd_sweep(cfg);
}

}  // namespace ntw::app
