#pragma once

// Discrete Gabor transform on a finite cyclic group of length L with a
// separable lattice (hop a, M channels), plus the frame algebra built on the
// Walnut representation of the frame operator.

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ntw {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAFrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative threshold below which the lower frame bound counts as zero.
inline constexpr double kFrameTolerance = 1e-10;

/// Lattice description a, M, L with N = L / a time shifts.
class GaborParams {
 public:
  /// Throws LatticeError unless a, M, L > 0, a | L and M | L.
  /// Undersampled lattices (M < a) are accepted with a warning attached.
  static GaborParams make(int a, int M, int L);

  int hop() const { return a_; }
  int channels() const { return M_; }
  int length() const { return L_; }
  int frames() const { return L_ / a_; }
  double redundancy() const { return static_cast<double>(M_) / a_; }
  bool undersampled() const { return M_ < a_; }
  const std::optional<std::string>& warning() const { return warning_; }

  bool operator==(const GaborParams& other) const {
    return a_ == other.a_ && M_ == other.M_ && L_ == other.L_;
  }

 private:
  GaborParams(int a, int M, int L) : a_(a), M_(M), L_(L) {}

  int a_;
  int M_;
  int L_;
  std::optional<std::string> warning_;
};

/// Smallest common multiple of a and M that is >= K.
int default_ambient_length(int a, int M, int K);

/// Real window with finite support [0, K). Samples beyond K are zero when
/// the window is placed in an ambient signal length.
class Window {
 public:
  /// Throws std::invalid_argument on empty, non-finite or zero-energy samples.
  explicit Window(RealVector samples, std::string name = "custom",
                  std::string provenance = {});

  int size() const { return static_cast<int>(samples_.size()); }
  const RealVector& samples() const { return samples_; }
  double energy() const { return samples_.squaredNorm(); }
  const std::string& name() const { return name_; }
  const std::string& provenance() const { return provenance_; }
  const std::optional<int>& ambient_length() const { return ambient_length_; }

  /// Copy bound to an ambient length; throws ShapeError if K > L.
  Window with_ambient_length(int L) const;
  Window renamed(std::string name, std::string provenance) const;

  /// Zero-extension to length L.
  RealVector embed(int L) const;

 private:
  RealVector samples_;
  std::string name_;
  std::string provenance_;
  std::optional<int> ambient_length_;
};

/// M x N coefficient array. Column-major storage makes the flat index m + nM.
class GaborCoefficients {
 public:
  GaborCoefficients(int M, int N) : values_(Eigen::MatrixXcd::Zero(M, N)) {}
  explicit GaborCoefficients(Eigen::MatrixXcd values) : values_(std::move(values)) {}

  int channels() const { return static_cast<int>(values_.rows()); }
  int frames() const { return static_cast<int>(values_.cols()); }

  Complex& operator()(int m, int n) { return values_(m, n); }
  Complex operator()(int m, int n) const { return values_(m, n); }
  Complex flat(Eigen::Index index) const { return values_.data()[index]; }

  Eigen::MatrixXcd& values() { return values_; }
  const Eigen::MatrixXcd& values() const { return values_; }

  double energy() const { return values_.squaredNorm(); }

  /// Throws ShapeError unless the shape is (p.channels(), p.frames()).
  void check_shape(const GaborParams& p) const;

 private:
  Eigen::MatrixXcd values_;
};

struct FrameDiagnostics {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double condition_number = 0.0;
  bool painless = false;
};

/// Selects the painless (diagonal) fast path when available, or forces the
/// general Walnut block path.
enum class FramePath { Automatic, General };

/// Index of the last nonzero sample plus one.
int support_length(const RealVector& g);

/// True when the window support fits within M samples, which makes the
/// frame operator diagonal.
bool is_painless(const RealVector& g, const GaborParams& p);

// Transforms. Windows are given either as a Window (zero-extended) or as a
// length-L vector.

GaborCoefficients dgt(const RealVector& f, const RealVector& g, const GaborParams& p);
GaborCoefficients dgt(const RealVector& f, const Window& g, const GaborParams& p);

/// Synthesis sum_{m,n} c[m + nM] h_{m,n} without discarding the imaginary part.
ComplexVector idgt_complex(const GaborCoefficients& c, const RealVector& h,
                           const GaborParams& p);

/// Real synthesis. Throws std::runtime_error if the discarded imaginary residue
/// exceeds 1e-8 of the result norm.
RealVector idgt(const GaborCoefficients& c, const RealVector& h, const GaborParams& p);
RealVector idgt(const GaborCoefficients& c, const Window& h, const GaborParams& p);

// Frame algebra.

/// Dense L x L frame operator S = G* G assembled from its Walnut blocks.
Eigen::MatrixXd frame_operator_matrix(const RealVector& g, const GaborParams& p);
Eigen::MatrixXd frame_operator_matrix(const Window& g, const GaborParams& p);

/// diag(S)[l] = M * sum_n g[l - an]^2.
RealVector frame_operator_diagonal(const RealVector& g, const GaborParams& p);

/// S restricted to indices r, r + M, r + 2M, ... for each residue r < M.
std::vector<Eigen::MatrixXd> walnut_blocks(const RealVector& g, const GaborParams& p);

FrameDiagnostics frame_diagnostics(const RealVector& g, const GaborParams& p,
                                   FramePath path = FramePath::Automatic);
FrameDiagnostics frame_diagnostics(const Window& g, const GaborParams& p,
                                   FramePath path = FramePath::Automatic);

/// (A, B). Throws NotAFrameError when A < kFrameTolerance * B.
std::pair<double, double> frame_bounds(const RealVector& g, const GaborParams& p,
                                       FramePath path = FramePath::Automatic);
std::pair<double, double> frame_bounds(const Window& g, const GaborParams& p,
                                       FramePath path = FramePath::Automatic);

double condition_number(const RealVector& g, const GaborParams& p,
                        FramePath path = FramePath::Automatic);
double condition_number(const Window& g, const GaborParams& p,
                        FramePath path = FramePath::Automatic);

/// S^{-1} g, length L.
RealVector canonical_dual(const RealVector& g, const GaborParams& p,
                          FramePath path = FramePath::Automatic);
RealVector canonical_dual(const Window& g, const GaborParams& p,
                          FramePath path = FramePath::Automatic);

/// S^{-1/2} g, the closest Parseval tight window to g. Length L.
RealVector canonical_tight(const RealVector& g, const GaborParams& p,
                           FramePath path = FramePath::Automatic);
RealVector canonical_tight(const Window& g, const GaborParams& p,
                           FramePath path = FramePath::Automatic);

}  // namespace ntw
