#pragma once

// Serial, direct-summation versions of the transform kernels. They evaluate
// the defining sums term by term and exist to check and benchmark the
// parallel FFT-based kernels in gabor.hpp.

#include "ntw/gabor.hpp"

namespace ntw::reference {

/// c[m + nM] = sum_l f[l] g[(l - an) mod L] exp(-i 2 pi m l / M).
GaborCoefficients dgt(const RealVector& f, const RealVector& g, const GaborParams& p);

/// sum_{m,n} c[m + nM] exp(i 2 pi m l / M) h[(l - an) mod L].
ComplexVector idgt_complex(const GaborCoefficients& c, const RealVector& h,
                           const GaborParams& p);

/// S[l, l'] = M sum_n g[l - an] g[l' - an] when M | (l - l'), else 0.
Eigen::MatrixXd frame_operator_matrix(const RealVector& g, const GaborParams& p);

}  // namespace ntw::reference
