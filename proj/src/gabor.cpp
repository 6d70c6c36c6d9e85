#include "ntw/gabor.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ntw {

namespace {

inline Eigen::Index wrap(Eigen::Index index, Eigen::Index n) {
  const Eigen::Index r = index % n;
  return r < 0 ? r + n : r;
}

void check_window_length(const RealVector& g, const GaborParams& p, const char* what) {
  if (g.size() != p.length()) {
    std::ostringstream msg;
    msg << what << ": window length " << g.size() << " does not match L = " << p.length();
    throw ShapeError(msg.str());
  }
}

// Eigendecomposition of every Walnut block, or the diagonal in the painless case.
struct FrameSpectrum {
  bool painless = false;
  RealVector diagonal;
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> blocks;
  double lower = 0.0;
  double upper = 0.0;
};

FrameSpectrum frame_spectrum(const RealVector& g, const GaborParams& p, FramePath path) {
  check_window_length(g, p, "frame operator");
  FrameSpectrum spectrum;
  spectrum.painless = path == FramePath::Automatic && is_painless(g, p);
  if (spectrum.painless) {
    spectrum.diagonal = frame_operator_diagonal(g, p);
    spectrum.lower = spectrum.diagonal.minCoeff();
    spectrum.upper = spectrum.diagonal.maxCoeff();
    return spectrum;
  }

  const std::vector<Eigen::MatrixXd> blocks = walnut_blocks(g, p);
  const int M = p.channels();
  spectrum.blocks.resize(M);
  double lower = std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : lower) reduction(max : upper)
  for (int r = 0; r < M; ++r) {
    spectrum.blocks[r].compute(blocks[r]);
    const RealVector& ev = spectrum.blocks[r].eigenvalues();
    lower = std::min(lower, ev.minCoeff());
    upper = std::max(upper, ev.maxCoeff());
  }
  spectrum.lower = std::max(lower, 0.0);
  spectrum.upper = upper;
  return spectrum;
}

void require_frame(const FrameSpectrum& spectrum) {
  if (!(spectrum.upper > 0.0) || spectrum.lower < kFrameTolerance * spectrum.upper) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "not a frame: lower bound " << spectrum.lower << " is below " << kFrameTolerance
        << " * upper bound " << spectrum.upper;
    throw NotAFrameError(msg.str());
  }
}

// Applies a function of S to g blockwise: S^{power} g with power -1 or -1/2.
RealVector apply_frame_power(const RealVector& g, const GaborParams& p, FramePath path,
                             double power) {
  const FrameSpectrum spectrum = frame_spectrum(g, p, path);
  require_frame(spectrum);
  const int L = p.length();
  const int M = p.channels();
  RealVector out(L);

  if (spectrum.painless) {
    for (int l = 0; l < L; ++l) out[l] = g[l] * std::pow(spectrum.diagonal[l], power);
    return out;
  }

  const int Q = L / M;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < M; ++r) {
    RealVector local(Q);
    for (int j = 0; j < Q; ++j) local[j] = g[r + j * M];
    const auto& solver = spectrum.blocks[r];
    const RealVector scaled = solver.eigenvalues().array().pow(power).matrix();
    const RealVector coords = solver.eigenvectors().transpose() * local;
    const RealVector result = solver.eigenvectors() * scaled.cwiseProduct(coords);
    for (int j = 0; j < Q; ++j) out[r + j * M] = result[j];
  }
  return out;
}

}  // namespace

GaborParams GaborParams::make(int a, int M, int L) {
  if (a <= 0 || M <= 0 || L <= 0) {
    throw LatticeError("lattice parameters a, M, L must be positive");
  }
  if (L % a != 0 || L % M != 0) {
    std::ostringstream msg;
    msg << "lattice incompatible: ";
    if (L % a != 0) msg << "a = " << a << " does not divide L = " << L;
    else msg << "M = " << M << " does not divide L = " << L;
    throw LatticeError(msg.str());
  }
  GaborParams params(a, M, L);
  if (M < a) {
    std::ostringstream msg;
    msg << "redundancy M/a = " << params.redundancy()
        << " < 1: an undersampled lattice cannot be a frame";
    params.warning_ = msg.str();
  }
  return params;
}

int default_ambient_length(int a, int M, int K) {
  if (a <= 0 || M <= 0 || K <= 0) throw LatticeError("a, M and K must be positive");
  const long base = std::lcm(static_cast<long>(a), static_cast<long>(M));
  const long multiple = (K + base - 1) / base;
  return static_cast<int>(std::max(1L, multiple) * base);
}

Window::Window(RealVector samples, std::string name, std::string provenance)
    : samples_(std::move(samples)), name_(std::move(name)), provenance_(std::move(provenance)) {
  if (samples_.size() == 0) throw std::invalid_argument("window must have at least one sample");
  if (!samples_.allFinite()) throw std::invalid_argument("window samples must be finite");
  if (!(samples_.squaredNorm() > 0.0)) throw std::invalid_argument("window energy must be positive");
}

Window Window::with_ambient_length(int L) const {
  if (size() > L) {
    std::ostringstream msg;
    msg << "window length K = " << size() << " exceeds ambient length L = " << L;
    throw ShapeError(msg.str());
  }
  Window copy = *this;
  copy.ambient_length_ = L;
  return copy;
}

Window Window::renamed(std::string name, std::string provenance) const {
  Window copy = *this;
  copy.name_ = std::move(name);
  copy.provenance_ = std::move(provenance);
  return copy;
}

RealVector Window::embed(int L) const {
  if (size() > L) {
    std::ostringstream msg;
    msg << "window length K = " << size() << " exceeds ambient length L = " << L;
    throw ShapeError(msg.str());
  }
  RealVector out = RealVector::Zero(L);
  out.head(size()) = samples_;
  return out;
}

void GaborCoefficients::check_shape(const GaborParams& p) const {
  if (channels() != p.channels() || frames() != p.frames()) {
    std::ostringstream msg;
    msg << "coefficient shape " << channels() << "x" << frames() << " does not match lattice "
        << p.channels() << "x" << p.frames();
    throw ShapeError(msg.str());
  }
}

int support_length(const RealVector& g) {
  for (Eigen::Index l = g.size(); l > 0; --l) {
    if (g[l - 1] != 0.0) return static_cast<int>(l);
  }
  return 0;
}

bool is_painless(const RealVector& g, const GaborParams& p) {
  return support_length(g) <= p.channels();
}

GaborCoefficients dgt(const RealVector& f, const RealVector& g, const GaborParams& p) {
  const int L = p.length();
  if (f.size() != L) {
    std::ostringstream msg;
    msg << "dgt: signal length " << f.size() << " does not match L = " << L;
    throw ShapeError(msg.str());
  }
  check_window_length(g, p, "dgt");
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  const int K = support_length(g);
  GaborCoefficients c(M, N);

#pragma omp parallel
  {
    Eigen::FFT<double> fft;
    std::vector<Complex> folded(M);
    std::vector<Complex> spectrum(M);
#pragma omp for schedule(static)
    for (int n = 0; n < N; ++n) {
      std::fill(folded.begin(), folded.end(), Complex{});
      // The modulation is M-periodic in l, so the windowed segment folds to M samples.
      for (int k = 0; k < K; ++k) {
        const Eigen::Index l = wrap(static_cast<Eigen::Index>(a) * n + k, L);
        folded[l % M] += f[l] * g[k];
      }
      fft.fwd(spectrum, folded);
      for (int m = 0; m < M; ++m) c(m, n) = spectrum[m];
    }
  }
  return c;
}

GaborCoefficients dgt(const RealVector& f, const Window& g, const GaborParams& p) {
  return dgt(f, g.embed(p.length()), p);
}

ComplexVector idgt_complex(const GaborCoefficients& c, const RealVector& h,
                           const GaborParams& p) {
  c.check_shape(p);
  check_window_length(h, p, "idgt");
  const int L = p.length();
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  const int K = support_length(h);

  // Unnormalized inverse DFT of every frame: s_n[j] = sum_m c[m, n] e^{+i 2 pi m j / M}.
  Eigen::MatrixXcd frames(M, N);
#pragma omp parallel
  {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> column(M);
    std::vector<Complex> synthesized(M);
#pragma omp for schedule(static)
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < M; ++m) column[m] = c(m, n);
      fft.inv(synthesized, column);
      for (int j = 0; j < M; ++j) frames(j, n) = synthesized[j];
    }
  }

  // Gather per output sample in a fixed frame order so results do not depend
  // on the thread count.
  ComplexVector out(L);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l) {
    Complex acc{};
    for (int n = 0; n < N; ++n) {
      const Eigen::Index k = wrap(l - static_cast<Eigen::Index>(a) * n, L);
      if (k < K) acc += h[k] * frames(l % M, n);
    }
    out[l] = acc;
  }
  return out;
}

RealVector idgt(const GaborCoefficients& c, const RealVector& h, const GaborParams& p) {
  const ComplexVector full = idgt_complex(c, h, p);
  RealVector out = full.real();
  const double residue = full.imag().norm();
  if (residue > 1e-8 * std::max(out.norm(), std::numeric_limits<double>::min())) {
    std::ostringstream msg;
    msg << "idgt: imaginary residue " << residue << " exceeds 1e-8 of the result norm "
        << out.norm() << "; coefficients are not those of a real signal";
    throw std::runtime_error(msg.str());
  }
  return out;
}

RealVector idgt(const GaborCoefficients& c, const Window& h, const GaborParams& p) {
  return idgt(c, h.embed(p.length()), p);
}

RealVector frame_operator_diagonal(const RealVector& g, const GaborParams& p) {
  check_window_length(g, p, "frame operator");
  const int L = p.length();
  const int a = p.hop();
  const int N = p.frames();
  const int K = support_length(g);
  const double M = p.channels();
  RealVector diag(L);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l) {
    double acc = 0.0;
    for (int n = 0; n < N; ++n) {
      const Eigen::Index k = wrap(l - static_cast<Eigen::Index>(a) * n, L);
      if (k < K) acc += g[k] * g[k];
    }
    diag[l] = M * acc;
  }
  return diag;
}

std::vector<Eigen::MatrixXd> walnut_blocks(const RealVector& g, const GaborParams& p) {
  check_window_length(g, p, "frame operator");
  const int L = p.length();
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  const int Q = L / M;
  const int K = support_length(g);
  std::vector<Eigen::MatrixXd> blocks(M);

#pragma omp parallel
  {
    std::vector<std::pair<int, double>> hits;
#pragma omp for schedule(static)
    for (int r = 0; r < M; ++r) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(Q, Q);
      for (int n = 0; n < N; ++n) {
        const Eigen::Index shift = static_cast<Eigen::Index>(a) * n;
        // Window samples k whose shifted position an + k lands on residue r.
        hits.clear();
        for (Eigen::Index k = wrap(r - shift, M); k < K; k += M) {
          const Eigen::Index l = wrap(shift + k, L);
          hits.emplace_back(static_cast<int>(l / M), g[k]);
        }
        for (const auto& [ji, vi] : hits) {
          for (const auto& [jj, vj] : hits) block(ji, jj) += M * vi * vj;
        }
      }
      blocks[r] = std::move(block);
    }
  }
  return blocks;
}

Eigen::MatrixXd frame_operator_matrix(const RealVector& g, const GaborParams& p) {
  const int L = p.length();
  const int M = p.channels();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(L, L);
  if (is_painless(g, p)) {
    S.diagonal() = frame_operator_diagonal(g, p);
    return S;
  }
  const std::vector<Eigen::MatrixXd> blocks = walnut_blocks(g, p);
  const int Q = L / M;
  for (int r = 0; r < M; ++r) {
    for (int j = 0; j < Q; ++j) {
      for (int jj = 0; jj < Q; ++jj) S(r + j * M, r + jj * M) = blocks[r](j, jj);
    }
  }
  return S;
}

Eigen::MatrixXd frame_operator_matrix(const Window& g, const GaborParams& p) {
  return frame_operator_matrix(g.embed(p.length()), p);
}

FrameDiagnostics frame_diagnostics(const RealVector& g, const GaborParams& p, FramePath path) {
  const FrameSpectrum spectrum = frame_spectrum(g, p, path);
  require_frame(spectrum);
  FrameDiagnostics out;
  out.lower_bound = spectrum.lower;
  out.upper_bound = spectrum.upper;
  out.condition_number = std::sqrt(spectrum.upper / spectrum.lower);
  out.painless = is_painless(g, p);
  return out;
}

FrameDiagnostics frame_diagnostics(const Window& g, const GaborParams& p, FramePath path) {
  return frame_diagnostics(g.embed(p.length()), p, path);
}

std::pair<double, double> frame_bounds(const RealVector& g, const GaborParams& p,
                                       FramePath path) {
  const FrameDiagnostics d = frame_diagnostics(g, p, path);
  return {d.lower_bound, d.upper_bound};
}

std::pair<double, double> frame_bounds(const Window& g, const GaborParams& p, FramePath path) {
  return frame_bounds(g.embed(p.length()), p, path);
}

double condition_number(const RealVector& g, const GaborParams& p, FramePath path) {
  return frame_diagnostics(g, p, path).condition_number;
}

double condition_number(const Window& g, const GaborParams& p, FramePath path) {
  return condition_number(g.embed(p.length()), p, path);
}

RealVector canonical_dual(const RealVector& g, const GaborParams& p, FramePath path) {
  return apply_frame_power(g, p, path, -1.0);
}

RealVector canonical_dual(const Window& g, const GaborParams& p, FramePath path) {
  return canonical_dual(g.embed(p.length()), p, path);
}

RealVector canonical_tight(const RealVector& g, const GaborParams& p, FramePath path) {
  return apply_frame_power(g, p, path, -0.5);
}

RealVector canonical_tight(const Window& g, const GaborParams& p, FramePath path) {
  return canonical_tight(g.embed(p.length()), p, path);
}

}  // namespace ntw
