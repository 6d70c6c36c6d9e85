#include "ntw/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace ntw {

std::string to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::IdealWiener: return "ideal_wiener";
    case MaskKind::DecisionDirectedWiener: return "dd_wiener";
  }
  return "unknown";
}

std::string to_string(NoisePsdMode mode) {
  switch (mode) {
    case NoisePsdMode::Oracle: return "oracle";
    case NoisePsdMode::FirstFrames: return "first_frames";
    case NoisePsdMode::Supplied: return "supplied";
  }
  return "unknown";
}

MaskKind parse_mask_kind(const std::string& name) {
  if (name == "ideal_wiener" || name == "ideal") return MaskKind::IdealWiener;
  if (name == "dd_wiener" || name == "dd") return MaskKind::DecisionDirectedWiener;
  throw std::invalid_argument("unknown mask kind '" + name + "' (expected ideal or dd)");
}

NoisePsdMode parse_noise_psd_mode(const std::string& name) {
  if (name == "oracle") return NoisePsdMode::Oracle;
  if (name == "first_frames") return NoisePsdMode::FirstFrames;
  if (name == "supplied") return NoisePsdMode::Supplied;
  throw std::invalid_argument("unknown noise PSD mode '" + name +
                              "' (expected oracle, first_frames or supplied)");
}

NoisyPair add_noise_at_snr(const RealVector& f, double snr_db, std::uint64_t seed) {
  const double signal_energy = f.squaredNorm();
  if (!(signal_energy > 0.0)) throw std::invalid_argument("cannot set an SNR for a zero signal");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("target SNR must be finite");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector noise(f.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = normal(rng);
  const double target_energy = signal_energy / std::pow(10.0, snr_db / 10.0);
  noise *= std::sqrt(target_energy / noise.squaredNorm());

  NoisyPair pair;
  pair.clean = f;
  pair.noise = std::move(noise);
  pair.noisy = pair.clean + pair.noise;
  pair.target_snr_db = snr_db;
  pair.seed = seed;
  return pair;
}

Eigen::MatrixXd ideal_wiener_mask(const GaborCoefficients& c_clean,
                                  const GaborCoefficients& c_noise) {
  if (c_clean.channels() != c_noise.channels() || c_clean.frames() != c_noise.frames()) {
    throw ShapeError("ideal Wiener mask: clean and noise coefficients differ in shape");
  }
  const Eigen::ArrayXXd speech = c_clean.values().cwiseAbs2().array();
  const Eigen::ArrayXXd total = speech + c_noise.values().cwiseAbs2().array();
  return (total > 0.0).select(speech / total, 0.0).matrix();
}

Eigen::MatrixXd dd_wiener_mask(const GaborCoefficients& c_noisy, const RealVector& noise_psd,
                               double dd_alpha) {
  const int M = c_noisy.channels();
  const int N = c_noisy.frames();
  if (noise_psd.size() != M) throw ShapeError("noise PSD length must equal the channel count");
  if (!(noise_psd.minCoeff() > 0.0)) throw std::invalid_argument("noise PSD must be positive");
  if (!(dd_alpha >= 0.0 && dd_alpha < 1.0)) {
    throw std::invalid_argument("decision-directed alpha must lie in [0, 1)");
  }
  Eigen::MatrixXd gain(M, N);
  for (int m = 0; m < M; ++m) {
    double previous = 0.0;  // G^2 |c|^2 / psd of the previous frame
    for (int n = 0; n < N; ++n) {
      const double posterior = std::norm(c_noisy(m, n)) / noise_psd[m];
      const double xi = dd_alpha * previous + (1.0 - dd_alpha) * std::max(posterior - 1.0, 0.0);
      const double g = std::isinf(xi) ? 1.0 : xi / (1.0 + xi);
      gain(m, n) = g;
      previous = g * g * posterior;
    }
  }
  return gain;
}

RealVector estimate_noise_psd(const GaborCoefficients& c_noisy, const GaborCoefficients& c_noise,
                              const MaskSpec& spec) {
  RealVector psd;
  switch (spec.noise_psd_mode) {
    case NoisePsdMode::Oracle:
      psd = c_noise.values().cwiseAbs2().rowwise().mean();
      break;
    case NoisePsdMode::FirstFrames: {
      const int frames = std::min(kNoiseEstimationFrames, c_noisy.frames());
      psd = c_noisy.values().leftCols(frames).cwiseAbs2().rowwise().mean();
      break;
    }
    case NoisePsdMode::Supplied:
      if (spec.supplied_psd.size() != c_noisy.channels()) {
        throw ShapeError("supplied noise PSD length must equal the channel count");
      }
      psd = spec.supplied_psd;
      break;
  }
  const double peak = psd.maxCoeff();
  if (!(peak > 0.0)) throw std::invalid_argument("noise PSD estimate vanishes in every channel");
  return psd.cwiseMax(peak * 1e-12);
}

int padded_length(int signal_length, int window_length, int a, int M) {
  return default_ambient_length(a, M, std::max(signal_length, window_length));
}

namespace {

RealVector pad_to(const RealVector& x, int L) {
  if (x.size() > L) throw ShapeError("signal longer than the ambient length of the lattice");
  RealVector out = RealVector::Zero(L);
  out.head(x.size()) = x;
  return out;
}

RealVector synthesize(const GaborCoefficients& masked, const RealVector& dual,
                      const GaborParams& p, Eigen::Index length) {
  return idgt(masked, dual, p).head(length);
}

RealVector enhance_with_dual(const NoisyPair& pair, const RealVector& g, const RealVector& dual,
                             const GaborParams& p, const MaskSpec& spec) {
  const int L = p.length();
  const GaborCoefficients noisy = dgt(pad_to(pair.noisy, L), g, p);
  Eigen::MatrixXd mask;
  if (spec.kind == MaskKind::IdealWiener) {
    mask = ideal_wiener_mask(dgt(pad_to(pair.clean, L), g, p), dgt(pad_to(pair.noise, L), g, p));
  } else {
    const GaborCoefficients noise = spec.noise_psd_mode == NoisePsdMode::Oracle
                                        ? dgt(pad_to(pair.noise, L), g, p)
                                        : GaborCoefficients(p.channels(), p.frames());
    mask = dd_wiener_mask(noisy, estimate_noise_psd(noisy, noise, spec), spec.dd_alpha);
  }
  GaborCoefficients masked(noisy.values().cwiseProduct(mask.cast<Complex>()));
  return synthesize(masked, dual, p, pair.noisy.size());
}

}  // namespace

RealVector enhance(const NoisyPair& pair, const RealVector& g, const GaborParams& p,
                   const MaskSpec& spec) {
  return enhance_with_dual(pair, g, canonical_dual(g, p), p, spec);
}

RealVector enhance(const NoisyPair& pair, const Window& g, const GaborParams& p,
                   const MaskSpec& spec) {
  return enhance(pair, g.embed(p.length()), p, spec);
}

RealVector apply_mask(const RealVector& noisy, const Eigen::MatrixXd& mask, const RealVector& g,
                      const GaborParams& p) {
  const GaborCoefficients c = dgt(pad_to(noisy, p.length()), g, p);
  if (mask.rows() != c.channels() || mask.cols() != c.frames()) {
    throw ShapeError("mask shape does not match the lattice");
  }
  GaborCoefficients masked(c.values().cwiseProduct(mask.cast<Complex>()));
  return synthesize(masked, canonical_dual(g, p), p, noisy.size());
}

double snr_db(const RealVector& reference, const RealVector& estimate) {
  if (reference.size() != estimate.size()) throw ShapeError("snr: length mismatch");
  const double energy = reference.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("snr: zero reference signal");
  const double residual = (reference - estimate).squaredNorm();
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(energy / residual);
}

std::vector<EvalRecord> sweep(const std::vector<NamedWindow>& windows, const std::vector<int>& hops,
                              const std::vector<RealVector>& signals, const MaskSpec& spec,
                              const SweepSetup& setup) {
  std::vector<NoisyPair> pairs;
  pairs.reserve(signals.size());
  for (std::size_t i = 0; i < signals.size(); ++i) {
    pairs.push_back(add_noise_at_snr(signals[i], setup.snr_db, setup.noise_seed + i));
  }

  const auto window_count = static_cast<int>(windows.size());
  const auto hop_count = static_cast<int>(hops.size());
  std::vector<EvalRecord> records(static_cast<std::size_t>(window_count) * hop_count);
  const int M = setup.channels;

#pragma omp parallel for schedule(dynamic)
  for (int cell = 0; cell < window_count * hop_count; ++cell) {
    const NamedWindow& named = windows[cell / hop_count];
    const int a = hops[cell % hop_count];
    EvalRecord& record = records[cell];
    record.window_id = named.id;
    record.hop = a;
    record.mask_kind = to_string(spec.kind);
    record.signals = static_cast<int>(pairs.size());
    try {
      const int K = named.window.size();
      const GaborParams base = GaborParams::make(a, M, default_ambient_length(a, M, K));
      Window window = named.window;
      if (named.tighten) {
        window = Window(canonical_tight(window, base).head(K), named.id);
      }
      record.kappa = condition_number(window, base);

      std::map<int, std::pair<RealVector, RealVector>> by_length;  // L -> (g, dual)
      double snr_in = 0.0;
      double snr_out = 0.0;
      for (const NoisyPair& pair : pairs) {
        const int L = padded_length(static_cast<int>(pair.noisy.size()), K, a, M);
        const GaborParams p = GaborParams::make(a, M, L);
        auto it = by_length.find(L);
        if (it == by_length.end()) {
          RealVector g = window.embed(L);
          RealVector dual = canonical_dual(g, p);
          it = by_length.emplace(L, std::make_pair(std::move(g), std::move(dual))).first;
        }
        const RealVector estimate = enhance_with_dual(pair, it->second.first, it->second.second, p, spec);
        snr_in += snr_db(pair.clean, pair.noisy);
        snr_out += snr_db(pair.clean, estimate);
      }
      if (!pairs.empty()) {
        record.snr_in_db = snr_in / pairs.size();
        record.snr_out_db = snr_out / pairs.size();
      }
    } catch (const std::exception& e) {
      record.error = e.what();
    }
  }
  return records;
}

}  // namespace ntw
