#include "ntw/reference.hpp"

#include <cmath>
#include <numbers>

namespace ntw::reference {

namespace {

inline Eigen::Index wrap(Eigen::Index index, Eigen::Index n) {
  const Eigen::Index r = index % n;
  return r < 0 ? r + n : r;
}

}  // namespace

GaborCoefficients dgt(const RealVector& f, const RealVector& g, const GaborParams& p) {
  const int L = p.length();
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  if (f.size() != L || g.size() != L) throw ShapeError("reference dgt: length mismatch");
  const int K = support_length(g);
  GaborCoefficients c(M, N);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      Complex acc{};
      for (int k = 0; k < K; ++k) {
        const Eigen::Index l = wrap(static_cast<Eigen::Index>(a) * n + k, L);
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((m * l) % M) / M;
        acc += f[l] * g[k] * std::polar(1.0, phase);
      }
      c(m, n) = acc;
    }
  }
  return c;
}

ComplexVector idgt_complex(const GaborCoefficients& c, const RealVector& h,
                           const GaborParams& p) {
  c.check_shape(p);
  const int L = p.length();
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  if (h.size() != L) throw ShapeError("reference idgt: length mismatch");
  ComplexVector out = ComplexVector::Zero(L);
  for (int n = 0; n < N; ++n) {
    for (int l = 0; l < L; ++l) {
      const double w = h[wrap(l - static_cast<Eigen::Index>(a) * n, L)];
      if (w == 0.0) continue;
      Complex acc{};
      for (int m = 0; m < M; ++m) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((m * l) % M) / M;
        acc += c(m, n) * std::polar(1.0, phase);
      }
      out[l] += w * acc;
    }
  }
  return out;
}

Eigen::MatrixXd frame_operator_matrix(const RealVector& g, const GaborParams& p) {
  const int L = p.length();
  const int a = p.hop();
  const int M = p.channels();
  const int N = p.frames();
  if (g.size() != L) throw ShapeError("reference frame operator: length mismatch");
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(L, L);
  for (int l = 0; l < L; ++l) {
    for (int lp = l % M; lp < L; lp += M) {
      double acc = 0.0;
      for (int n = 0; n < N; ++n) {
        const Eigen::Index shift = static_cast<Eigen::Index>(a) * n;
        acc += g[wrap(l - shift, L)] * g[wrap(lp - shift, L)];
      }
      S(l, lp) = M * acc;
    }
  }
  return S;
}

}  // namespace ntw::reference
