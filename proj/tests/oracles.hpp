#pragma once

// Independent brute-force references for the unit and acceptance tests.

#include "ntw/gabor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

using ntw::Complex;
using ntw::ComplexVector;
using ntw::RealVector;

inline int wrap(long i, long n) { return static_cast<int>(((i % n) + n) % n); }

/// Rows are conj(g_{m,n}), row index m + nM, so that c = G f.
inline Eigen::MatrixXcd gabor_matrix(const RealVector& g, int a, int M, int L) {
  const int N = L / a;
  Eigen::MatrixXcd G(M * N, L);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      for (int l = 0; l < L; ++l) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((long)m * l % M) / M;
        G(m + n * M, l) = g[wrap(l - (long)a * n, L)] * std::polar(1.0, phase);
      }
    }
  }
  return G;
}

inline std::pair<double, double> svd_bounds(const Eigen::MatrixXcd& G) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
  const auto& s = svd.singularValues();
  return {s.minCoeff() * s.minCoeff(), s.maxCoeff() * s.maxCoeff()};
}

/// Direct e^{-2 pi i n l / K~} sum scaled by 1/sqrt(K~).
inline ComplexVector padded_dft(const RealVector& g, int k_tilde) {
  ComplexVector out(k_tilde);
  for (int n = 0; n < k_tilde; ++n) {
    Complex acc = 0.0;
    for (int l = 0; l < g.size(); ++l) {
      acc += g[l] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((long)n * l % k_tilde) / k_tilde);
    }
    out[n] = acc / std::sqrt(static_cast<double>(k_tilde));
  }
  return out;
}

/// Nearest Parseval tight window when supp g fits in M samples: every
/// residue class mod a is rescaled to squared norm 1/M.
inline RealVector painless_tight(const RealVector& g_full, int a, int M) {
  RealVector out = g_full;
  const auto L = g_full.size();
  for (int r = 0; r < a; ++r) {
    double energy = 0.0;
    for (auto l = r; l < L; l += a) energy += g_full[l] * g_full[l];
    const double scale = 1.0 / std::sqrt(M * energy);
    for (auto l = r; l < L; l += a) out[l] *= scale;
  }
  return out;
}

inline RealVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector x(n);
  for (int i = 0; i < n; ++i) x[i] = normal(rng);
  return x;
}

inline ComplexVector random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector x(n);
  for (int i = 0; i < n; ++i) x[i] = Complex(normal(rng), normal(rng));
  return x;
}

inline RealVector embed(const RealVector& g, int L) {
  RealVector out = RealVector::Zero(L);
  out.head(g.size()) = g;
  return out;
}

}  // namespace oracle
