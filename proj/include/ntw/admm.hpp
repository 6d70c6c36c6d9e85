#pragma once

// Nearly tight window design: minimize half the squared distance to the set
// of Parseval tight windows subject to |F g| <= beta * d, solved by
// linearized ADMM with F the zero-padded DFT.

#include "ntw/gabor.hpp"
#include "ntw/spectral.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntw {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AdmmConfig {
  double beta = 1.0;
  double mu = 0.3;
  double lambda = 0.3;
  int max_iter = 2000;
  /// Primal residual threshold; defaults to 1e-8 * sqrt(K~) when unset.
  std::optional<double> tol_primal;
  /// Threshold on ||g_{k+1} - g_k|| / ||g_k||.
  double tol_change = 1e-10;
  /// Extra runs from seeded perturbations of g0; the best feasible result wins.
  int restarts = 0;
  std::uint64_t seed = 0;
  /// Finish with the exact Euclidean projection onto the constraint set when
  /// the ADMM iterate still violates it.
  bool polish = true;

  /// Throws ConfigError on beta < 1, non-positive steps, or mu > lambda
  /// (the step rule mu <= lambda / ||F||^2 with ||F|| = 1).
  void validate() const;
  double primal_tolerance(int k_tilde) const;
};

struct AdmmState {
  RealVector g;      // primal window, length K
  ComplexVector z;   // split variable, length K~
  ComplexVector u;   // scaled dual, length K~
  int iter = 0;
  double primal_residual = 0.0;
  double change = 0.0;
  double leaked_energy = 0.0;  // energy of the last tight step outside [0, K)
};

struct ProxTightResult {
  RealVector window;          // length K
  double leaked_energy = 0.0; // energy of S^{-1/2} g outside [0, K)
};

/// prox of (mu/2) d_T^2: g / (1 + mu) + mu / (1 + mu) * S_g^{-1/2} g, with the
/// tight part computed in the ambient length of p and truncated back to K.
ProxTightResult prox_tight_distance(const RealVector& g, double mu, const GaborParams& p);

/// Radial projection of every bin onto the disc of radius ceiling[n].
/// Zero bins pass through unchanged.
ComplexVector prox_magnitude_ceiling(const ComplexVector& z, const RealVector& ceiling);
ComplexVector prox_magnitude_ceiling(const ComplexVector& z, const FrequencyEnvelope& env,
                                     double beta);

struct CeilingProjection {
  RealVector window;
  int newton_steps = 0;
};

/// argmin ||x - g|| subject to |F x[n]| <= ceiling[n] for every bin, by a
/// log-barrier Newton method started from the strictly feasible point
/// `interior`. Throws std::invalid_argument if `interior` is not strictly
/// feasible.
CeilingProjection project_onto_ceiling(const RealVector& g, const RealVector& ceiling,
                                       const RealVector& interior);

/// ||g - S_g^{-1/2} g||_2 over the ambient length (g zero-extended from K).
double distance_to_tight(const RealVector& g, const GaborParams& p);

/// max_n |F g[n]| / (beta d[n]) - 1, floored at zero.
double constraint_violation(const RealVector& g, const FrequencyEnvelope& env, double beta);

struct DesignReport {
  explicit DesignReport(Window w) : window(std::move(w)) {}

  Window window;
  double beta = 1.0;
  double kappa = 1.0;
  double distance_to_tight = 0.0;
  double initial_distance_to_tight = 0.0;
  double max_constraint_violation = 0.0;
  /// Violation of the last ADMM iterate, before any polish.
  double admm_constraint_violation = 0.0;
  bool polished = false;
  double polish_displacement = 0.0;
  double leaked_energy = 0.0;
  int iterations_run = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

class DesignError : public std::runtime_error {
 public:
  DesignError(const std::string& what, int iteration, std::vector<double> history)
      : std::runtime_error(what), iteration_(iteration), history_(std::move(history)) {}

  int iteration() const { return iteration_; }
  const std::vector<double>& history() const { return history_; }

 private:
  int iteration_;
  std::vector<double> history_;
};

/// One linearized ADMM run. Initialized with g = g0, z = F g0, u = 0.
class NearlyTightDesigner {
 public:
  NearlyTightDesigner(const Window& g0, const FrequencyEnvelope& env, const AdmmConfig& cfg,
                      const GaborParams& p);

  /// One g, z, u update. Throws DesignError if an iterate stops generating a
  /// frame or turns non-finite.
  void step();

  /// Iterates until both stopping thresholds hold or max_iter is reached.
  /// Returns true on convergence.
  bool run();

  const AdmmState& state() const { return state_; }
  const std::vector<double>& residual_history() const { return history_; }
  /// Largest imaginary part discarded when applying F*, relative to ||g||.
  double max_discarded_imaginary() const { return max_discarded_imag_; }

 private:
  FrequencyEnvelope env_;
  AdmmConfig cfg_;
  GaborParams params_;
  RealVector ceiling_;
  AdmmState state_;
  std::vector<double> history_;
  double tol_primal_;
  double max_discarded_imag_ = 0.0;
};

/// Solves the design problem for one beta and recomputes every diagnostic
/// from the final window.
DesignReport design_window(const Window& g0, const FrequencyEnvelope& env,
                           const AdmmConfig& cfg, const GaborParams& p);

struct BetaOutcome {
  double beta = 1.0;
  std::optional<DesignReport> report;
  std::string error;
};

/// design_window for every beta in the grid; independent runs execute in
/// parallel and come back in grid order.
std::vector<BetaOutcome> design_beta_sweep(const Window& g0, const FrequencyEnvelope& env,
                                           const AdmmConfig& base, const std::vector<double>& betas,
                                           const GaborParams& p);

}  // namespace ntw
