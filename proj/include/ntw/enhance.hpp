#pragma once

// Denoising harness: additive Gaussian noise at a prescribed SNR, T-F
// masking with Wiener gains, and resynthesis with the canonical dual.

#include "ntw/gabor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ntw {

struct NoisyPair {
  RealVector clean;
  RealVector noisy;
  RealVector noise;
  double target_snr_db = 0.0;
  std::uint64_t seed = 0;
};

enum class MaskKind { IdealWiener, DecisionDirectedWiener };

/// Noise power source for the decision-directed mask. The MMSE tracker used
/// in the speech literature is replaced by these modes.
enum class NoisePsdMode {
  Oracle,       // per-channel mean power of the true noise coefficients
  FirstFrames,  // mean periodogram of the first kNoiseEstimationFrames frames
  Supplied      // caller-provided vector
};

inline constexpr int kNoiseEstimationFrames = 8;
inline constexpr double kDefaultDdAlpha = 0.98;

struct MaskSpec {
  MaskKind kind = MaskKind::IdealWiener;
  double dd_alpha = kDefaultDdAlpha;
  NoisePsdMode noise_psd_mode = NoisePsdMode::Oracle;
  RealVector supplied_psd;  // length M, used with NoisePsdMode::Supplied
};

std::string to_string(MaskKind kind);
std::string to_string(NoisePsdMode mode);
MaskKind parse_mask_kind(const std::string& name);
NoisePsdMode parse_noise_psd_mode(const std::string& name);

struct EvalRecord {
  std::string window_id;
  int hop = 0;
  std::string mask_kind;
  double snr_in_db = 0.0;
  double snr_out_db = 0.0;
  double kappa = 0.0;
  int signals = 0;
  std::string error;  // empty on success
};

/// Seeded Gaussian noise rescaled so that 10 log10(||f||^2 / ||n||^2) equals
/// snr_db. Throws std::invalid_argument for a zero signal.
NoisyPair add_noise_at_snr(const RealVector& f, double snr_db, std::uint64_t seed);

/// |c_clean|^2 / (|c_clean|^2 + |c_noise|^2), 0 where both vanish.
Eigen::MatrixXd ideal_wiener_mask(const GaborCoefficients& c_clean,
                                  const GaborCoefficients& c_noise);

/// Decision-directed a priori SNR recursion over frames,
///   xi[m,n] = alpha G[m,n-1]^2 |c[m,n-1]|^2 / psd[m]
///             + (1 - alpha) max(|c[m,n]|^2 / psd[m] - 1, 0),
/// with gain G = xi / (1 + xi).
Eigen::MatrixXd dd_wiener_mask(const GaborCoefficients& c_noisy, const RealVector& noise_psd,
                               double dd_alpha);

/// Per-channel noise power for the decision-directed mask.
RealVector estimate_noise_psd(const GaborCoefficients& c_noisy, const GaborCoefficients& c_noise,
                              const MaskSpec& spec);

/// Analysis with g, masking, synthesis with the canonical dual of g. Signals
/// are zero-padded to the ambient length of p and the result is cut back to
/// the input length.
RealVector enhance(const NoisyPair& pair, const RealVector& g, const GaborParams& p,
                   const MaskSpec& spec);
RealVector enhance(const NoisyPair& pair, const Window& g, const GaborParams& p,
                   const MaskSpec& spec);

/// Same pipeline with an explicit mask, shape M x N of p.
RealVector apply_mask(const RealVector& noisy, const Eigen::MatrixXd& mask, const RealVector& g,
                      const GaborParams& p);

/// 10 log10(||ref||^2 / ||ref - est||^2); +inf when the residual is exactly zero.
double snr_db(const RealVector& reference, const RealVector& estimate);

/// Smallest ambient length that holds a signal of the given length and the
/// window, and is a multiple of lcm(a, M).
int padded_length(int signal_length, int window_length, int a, int M);

struct NamedWindow {
  std::string id;
  Window window;
  /// Evaluate the canonical tight window of `window` on each hop's lattice
  /// instead, truncated to the original support.
  bool tighten = false;
};

struct SweepSetup {
  int channels = 256;
  double snr_db = 0.0;
  std::uint64_t noise_seed = 1;
};

/// Every (window, hop) cell evaluated on every signal; one record per cell with
/// the arithmetic mean of per-signal output SNR in dB. Cell failures are
/// recorded in EvalRecord::error and the sweep continues.
std::vector<EvalRecord> sweep(const std::vector<NamedWindow>& windows, const std::vector<int>& hops,
                              const std::vector<RealVector>& signals, const MaskSpec& spec,
                              const SweepSetup& setup);

}  // namespace ntw
