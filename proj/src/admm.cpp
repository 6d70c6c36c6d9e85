#include "ntw/admm.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ntw {

void AdmmConfig::validate() const {
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and >= 1");
  if (!(mu > 0.0) || !(lambda > 0.0)) throw ConfigError("mu and lambda must be positive");
  if (mu > lambda) {
    std::ostringstream msg;
    msg << "step rule violated: mu = " << mu << " exceeds lambda / ||F||^2 = " << lambda;
    throw ConfigError(msg.str());
  }
  if (max_iter <= 0) throw ConfigError("max_iter must be positive");
  if (tol_primal && !(*tol_primal > 0.0)) throw ConfigError("tol_primal must be positive");
  if (!(tol_change > 0.0)) throw ConfigError("tol_change must be positive");
  if (restarts < 0) throw ConfigError("restarts must be >= 0");
}

double AdmmConfig::primal_tolerance(int k_tilde) const {
  return tol_primal.value_or(1e-8 * std::sqrt(static_cast<double>(k_tilde)));
}

ProxTightResult prox_tight_distance(const RealVector& g, double mu, const GaborParams& p) {
  if (!(mu > 0.0)) throw std::invalid_argument("prox step mu must be positive");
  const auto K = static_cast<int>(g.size());
  if (K > p.length()) throw ShapeError("window longer than the ambient length");
  RealVector embedded = RealVector::Zero(p.length());
  embedded.head(K) = g;
  const RealVector tight = canonical_tight(embedded, p);
  ProxTightResult out;
  out.window = (g + mu * tight.head(K)) / (1.0 + mu);
  out.leaked_energy = tight.tail(p.length() - K).squaredNorm();
  return out;
}

ComplexVector prox_magnitude_ceiling(const ComplexVector& z, const RealVector& ceiling) {
  if (z.size() != ceiling.size()) throw ShapeError("ceiling length does not match the spectrum");
  ComplexVector out = z;
  for (Eigen::Index n = 0; n < z.size(); ++n) {
    const double magnitude = std::abs(z[n]);
    if (magnitude > ceiling[n]) out[n] = z[n] * (ceiling[n] / magnitude);
  }
  return out;
}

ComplexVector prox_magnitude_ceiling(const ComplexVector& z, const FrequencyEnvelope& env,
                                     double beta) {
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  return prox_magnitude_ceiling(z, RealVector(beta * env.d));
}

namespace {

// Real and imaginary parts of the non-negative-frequency rows of the
// zero-padded DFT, each row divided by its ceiling.
struct ScaledRows {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
};

ScaledRows scaled_dft_rows(int K, const RealVector& ceiling) {
  const auto k_tilde = static_cast<long>(ceiling.size());
  const long rows = k_tilde / 2 + 1;
  ScaledRows out{Eigen::MatrixXd(rows, K), Eigen::MatrixXd(rows, K)};
  const double norm = 1.0 / std::sqrt(static_cast<double>(k_tilde));
  for (long n = 0; n < rows; ++n) {
    const double s = norm / ceiling[n];
    for (long l = 0; l < K; ++l) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((n * l) % k_tilde) / k_tilde;
      out.re(n, l) = s * std::cos(phase);
      out.im(n, l) = s * std::sin(phase);
    }
  }
  return out;
}

}  // namespace

CeilingProjection project_onto_ceiling(const RealVector& g, const RealVector& ceiling,
                                       const RealVector& interior) {
  const auto K = static_cast<int>(g.size());
  if (interior.size() != K) throw ShapeError("interior point length differs from the window");
  if (ceiling.size() <= K) throw ShapeError("ceiling must cover more bins than the window length");
  if (!(ceiling.minCoeff() > 0.0)) throw std::invalid_argument("ceiling must be positive");
  const ScaledRows A = scaled_dft_rows(K, ceiling);
  const auto m = static_cast<double>(A.re.rows());

  // Slack 1 - |a_n x|^2 / c_n^2 per bin; empty when x is not strictly inside.
  auto slack = [&](const RealVector& x) -> std::optional<Eigen::ArrayXd> {
    const Eigen::ArrayXd s = 1.0 - (A.re * x).array().square() - (A.im * x).array().square();
    if (!(s > 0.0).all()) return std::nullopt;
    return s;
  };
  if (!slack(interior)) throw std::invalid_argument("interior point is not strictly feasible");

  CeilingProjection out;
  // Start from the feasible point on the segment [interior, g] nearest to g.
  double lo = 0.0, hi = 1.0;
  if (slack(g)) {
    out.window = g;
    return out;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slack(interior + mid * (g - interior)) ? lo : hi) = mid;
  }
  RealVector x = interior + 0.99 * lo * (g - interior);

  const double scale = std::max(g.squaredNorm(), std::numeric_limits<double>::min());
  double t = m / std::max((x - g).squaredNorm(), 1e-30 * scale);
  Eigen::MatrixXd B(3 * A.re.rows(), K);
  for (;;) {
    for (int inner = 0; inner < 100; ++inner) {
      const RealVector r = A.re * x;
      const RealVector i = A.im * x;
      const Eigen::ArrayXd w = (1.0 - r.array().square() - i.array().square()).inverse();
      const RealVector grad =
          t * (x - g) + 2.0 * (A.re.transpose() * (w * r.array()).matrix() +
                               A.im.transpose() * (w * i.array()).matrix());
      // Hessian t I + B^T B with B stacking sqrt(2w) A and the w-weighted
      // gradients of the quadratic constraints.
      const Eigen::ArrayXd root = (2.0 * w).sqrt();
      const auto rows = A.re.rows();
      B.topRows(rows) = root.matrix().asDiagonal() * A.re;
      B.middleRows(rows, rows) = root.matrix().asDiagonal() * A.im;
      B.bottomRows(rows) = (2.0 * w * r.array()).matrix().asDiagonal() * A.re +
                           (2.0 * w * i.array()).matrix().asDiagonal() * A.im;
      Eigen::MatrixXd H = Eigen::MatrixXd::Identity(K, K) * t;
      H.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
      const RealVector dx = -H.selfadjointView<Eigen::Lower>().ldlt().solve(grad);
      ++out.newton_steps;
      const double decrement = -grad.dot(dx);
      if (decrement <= 1e-10) break;

      auto barrier = [&](const RealVector& y, const Eigen::ArrayXd& s) {
        return 0.5 * t * (y - g).squaredNorm() - s.log().sum();
      };
      const double f0 = barrier(x, w.inverse());
      double step = 1.0;
      for (; step > 1e-20; step *= 0.5) {
        const RealVector trial = x + step * dx;
        if (auto s = slack(trial); s && barrier(trial, *s) <= f0 - 0.25 * step * decrement) break;
      }
      if (!(step > 1e-20)) break;
      x += step * dx;
    }
    if (m / t <= 1e-12 * scale) break;
    t *= 50.0;
  }
  out.window = std::move(x);
  return out;
}

double distance_to_tight(const RealVector& g, const GaborParams& p) {
  RealVector embedded = RealVector::Zero(p.length());
  embedded.head(g.size()) = g;
  return (embedded - canonical_tight(embedded, p)).norm();
}

double constraint_violation(const RealVector& g, const FrequencyEnvelope& env, double beta) {
  const ComplexVector spectrum = zero_pad_dft(g, env.k_tilde);
  double worst = 0.0;
  for (int n = 0; n < env.k_tilde; ++n) {
    worst = std::max(worst, std::abs(spectrum[n]) / (beta * env.d[n]) - 1.0);
  }
  return worst;
}

NearlyTightDesigner::NearlyTightDesigner(const Window& g0, const FrequencyEnvelope& env,
                                         const AdmmConfig& cfg, const GaborParams& p)
    : env_(env), cfg_(cfg), params_(p) {
  cfg_.validate();
  if (env_.window_length != g0.size()) {
    std::ostringstream msg;
    msg << "envelope was built for K = " << env_.window_length << " but the window has K = "
        << g0.size();
    throw ConfigError(msg.str());
  }
  if (g0.size() > p.length()) throw ShapeError("window longer than the ambient length");
  ceiling_ = cfg_.beta * env_.d;
  tol_primal_ = cfg_.primal_tolerance(env_.k_tilde);
  state_.g = g0.samples();
  state_.z = zero_pad_dft(state_.g, env_.k_tilde);
  state_.u = ComplexVector::Zero(env_.k_tilde);
}

void NearlyTightDesigner::step() {
  const int K = static_cast<int>(state_.g.size());
  const int iteration = state_.iter + 1;
  const ComplexVector fg = zero_pad_dft(state_.g, env_.k_tilde);

  // Linearized primal step on (1/(2 lambda)) ||F g - z + u||^2.
  const ComplexVector back = zero_pad_dft_adjoint(fg - state_.z + state_.u, K);
  const double g_norm = std::max(state_.g.norm(), std::numeric_limits<double>::min());
  max_discarded_imag_ = std::max(max_discarded_imag_, back.imag().norm() / g_norm);
  const RealVector point = state_.g - (cfg_.mu / cfg_.lambda) * back.real();

  ProxTightResult prox;
  try {
    prox = prox_tight_distance(point, cfg_.mu, params_);
  } catch (const NotAFrameError& e) {
    std::ostringstream msg;
    msg << "iteration " << iteration << ": " << e.what();
    throw DesignError(msg.str(), iteration, history_);
  }
  if (!prox.window.allFinite()) {
    std::ostringstream msg;
    msg << "iteration " << iteration << ": non-finite window iterate";
    throw DesignError(msg.str(), iteration, history_);
  }

  const ComplexVector fg_next = zero_pad_dft(prox.window, env_.k_tilde);
  const ComplexVector shifted = fg_next + state_.u;
  state_.z = prox_magnitude_ceiling(shifted, ceiling_);
  state_.u = shifted - state_.z;

  state_.change = (prox.window - state_.g).norm() / g_norm;
  state_.primal_residual = (fg_next - state_.z).norm();
  state_.leaked_energy = prox.leaked_energy;
  state_.g = std::move(prox.window);
  state_.iter = iteration;
  history_.push_back(state_.primal_residual);
}

bool NearlyTightDesigner::run() {
  while (state_.iter < cfg_.max_iter) {
    step();
    if (state_.primal_residual <= tol_primal_ && state_.change <= cfg_.tol_change) return true;
  }
  return false;
}

namespace {

// Violations below this are round-off in the spectrum evaluation.
constexpr double kPolishThreshold = 1e-9;

DesignReport single_run(const Window& start, const Window& g0, const FrequencyEnvelope& env,
                        const AdmmConfig& cfg, const GaborParams& p) {
  NearlyTightDesigner designer(start, env, cfg, p);
  const bool converged = designer.run();
  const AdmmState& state = designer.state();

  std::ostringstream provenance;
  provenance.precision(17);
  provenance << "nearly-tight(beta=" << cfg.beta << ", mu=" << cfg.mu << ", lambda=" << cfg.lambda
             << ", a=" << p.hop() << ", M=" << p.channels() << ", L=" << p.length()
             << ") from " << (g0.provenance().empty() ? g0.name() : g0.provenance());
  RealVector g = state.g;
  const double admm_violation = constraint_violation(g, env, cfg.beta);
  double displacement = 0.0;
  const bool polish = cfg.polish && admm_violation > kPolishThreshold;
  if (polish) {
    provenance << " + projection";
    const RealVector interior = g0.samples() * (1.0 - 1e-6);
    RealVector projected = project_onto_ceiling(g, cfg.beta * env.d, interior).window;
    displacement = (projected - g).norm();
    g = std::move(projected);
  }

  DesignReport report(Window(g, g0.name() + "-nt", provenance.str()));
  report.beta = cfg.beta;
  report.kappa = condition_number(report.window.embed(p.length()), p);
  report.distance_to_tight = distance_to_tight(g, p);
  report.initial_distance_to_tight = distance_to_tight(g0.samples(), p);
  report.max_constraint_violation = constraint_violation(g, env, cfg.beta);
  report.admm_constraint_violation = admm_violation;
  report.polished = polish;
  report.polish_displacement = displacement;
  report.leaked_energy = state.leaked_energy;
  report.iterations_run = state.iter;
  report.converged = converged;
  report.residual_history = designer.residual_history();
  return report;
}

}  // namespace

DesignReport design_window(const Window& g0, const FrequencyEnvelope& env,
                           const AdmmConfig& cfg, const GaborParams& p) {
  cfg.validate();
  DesignReport best = single_run(g0, g0, env, cfg, p);
  if (cfg.restarts == 0) return best;

  constexpr double kFeasible = 1e-6;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1e-2 * g0.samples().norm() / std::sqrt(static_cast<double>(g0.size()));
  for (int r = 0; r < cfg.restarts; ++r) {
    RealVector perturbed = g0.samples();
    for (Eigen::Index l = 0; l < perturbed.size(); ++l) perturbed[l] += scale * normal(rng);
    std::optional<DesignReport> attempt;
    try {
      attempt = single_run(Window(perturbed, g0.name()), g0, env, cfg, p);
    } catch (const DesignError&) {
      continue;
    }
    DesignReport& candidate = *attempt;
    const bool candidate_ok = candidate.max_constraint_violation <= kFeasible;
    const bool best_ok = best.max_constraint_violation <= kFeasible;
    if ((candidate_ok && !best_ok) ||
        (candidate_ok == best_ok && candidate.distance_to_tight < best.distance_to_tight)) {
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<BetaOutcome> design_beta_sweep(const Window& g0, const FrequencyEnvelope& env,
                                           const AdmmConfig& base, const std::vector<double>& betas,
                                           const GaborParams& p) {
  std::vector<BetaOutcome> outcomes(betas.size());
  const auto count = static_cast<int>(betas.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    AdmmConfig cfg = base;
    cfg.beta = betas[i];
    outcomes[i].beta = betas[i];
    try {
      outcomes[i].report = design_window(g0, env, cfg, p);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  }
  return outcomes;
}

}  // namespace ntw
