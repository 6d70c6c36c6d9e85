#include "oracles.hpp"

#include "ntw/spectral.hpp"
#include "ntw/spline.hpp"

#include <doctest.h>

using namespace ntw;

TEST_SUITE("spectral") {

TEST_CASE("zero-padded DFT") {
  const ComplexVector delta = zero_pad_dft(RealVector::Unit(1, 0), 8);
  for (int n = 0; n < 8; ++n) CHECK(std::abs(delta[n] - 1.0 / std::sqrt(8.0)) < 1e-15);

  const ComplexVector pair = zero_pad_dft((RealVector(2) << 1, 1).finished(), 4);
  const Complex expected[] = {{1.0, 0.0}, {0.5, -0.5}, {0.0, 0.0}, {0.5, 0.5}};
  for (int n = 0; n < 4; ++n) CHECK(std::abs(pair[n] - expected[n]) < 1e-15);

  std::mt19937_64 rng(21);
  for (auto [K, kt] : {std::pair{8, 8}, {13, 64}, {256, 4096}}) {
    const RealVector g = oracle::random_vector(K, rng);
    const ComplexVector Fg = zero_pad_dft(g, kt);
    CHECK(Fg.norm() == doctest::Approx(g.norm()).epsilon(1e-12));
    CHECK((Fg - oracle::padded_dft(g, kt)).norm() < 1e-11 * g.norm());
    const ComplexVector v = oracle::random_complex(kt, rng);
    const Complex lhs = v.dot(Fg);  // <v, F g>
    const Complex rhs = zero_pad_dft_adjoint(v, K).dot(g.cast<Complex>());  // <F* v, g>
    CHECK(std::abs(lhs - rhs) < 1e-10 * v.norm() * g.norm());
    CHECK((zero_pad_dft_adjoint(Fg, K).real() - g).norm() < 1e-12 * g.norm());
  }
  CHECK_THROWS(zero_pad_dft(RealVector::Ones(8), 4));
}

TEST_CASE("magnitude in dB") {
  const ComplexVector x = (ComplexVector(3) << 1.0, 0.1, 0.0).finished();
  const RealVector db = magnitude_db(x);
  CHECK(std::abs(db[0]) < 1e-10);
  CHECK(db[1] == doctest::Approx(-20.0));
  CHECK(db[2] == doctest::Approx(-240.0));
}

TEST_CASE("windows") {
  for (int K : {4, 7, 256}) {
    for (const Window& w : {hann_window(K), kaiser_window(K, 10.0)}) {
      for (int l = 0; l < K; ++l) {
        CHECK(w.samples()[l] > 0.0);
        CHECK(w.samples()[l] == doctest::Approx(w.samples()[K - 1 - l]).epsilon(1e-14));
      }
    }
  }
  const RealVector hann4 = hann_window(4).samples();
  CHECK(hann4[0] == doctest::Approx(std::pow(std::sin(std::numbers::pi / 8.0), 2)));
  CHECK(kaiser_window(16, 0.0).samples().isApprox(RealVector::Ones(16)));
  CHECK_THROWS(hann_window(1));

  // Kaiser main lobe towers over every sidelobe bin.
  const ComplexVector spectrum = zero_pad_dft(kaiser_window(256, 10.0), 4096);
  int first_null = 1;
  while (std::abs(spectrum[first_null + 1]) < std::abs(spectrum[first_null])) ++first_null;
  double sidelobe = 0.0;
  for (int n = first_null; n <= 2048; ++n) sidelobe = std::max(sidelobe, std::abs(spectrum[n]));
  CHECK(std::abs(spectrum[0]) > 1e3 * sidelobe);
}

TEST_CASE("energy normalization") {
  const GaborParams p = GaborParams::make(128, 256, 512);
  const Window w = normalize_energy(kaiser_window(256, 10.0), p);
  CHECK(w.energy() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normalize_energy(w, p).samples() == w.samples());
  std::mt19937_64 rng(22);
  const GaborParams q = GaborParams::make(3, 4, 12);
  CHECK(normalize_energy(Window(oracle::random_vector(7, rng)), q).energy() ==
        doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("natural cubic spline against a dense solve") {
  const std::vector<double> x{0.0, 1.0, 2.5, 3.0, 5.0, 7.5};
  const std::vector<double> y{1.0, -2.0, 0.5, 3.0, -1.0, 2.0};
  const NaturalCubicSpline s(x, y);
  const int n = static_cast<int>(x.size()) - 1;
  // Unknowns a_i, b_i, c_i, d_i for each piece a + b t + c t^2 + d t^3, t = x - x_i.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * n);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    const double h = x[i + 1] - x[i];
    A(row, 4 * i) = 1;
    rhs[row++] = y[i];
    A(row, 4 * i) = 1, A(row, 4 * i + 1) = h, A(row, 4 * i + 2) = h * h, A(row, 4 * i + 3) = h * h * h;
    rhs[row++] = y[i + 1];
    if (i + 1 < n) {
      A(row, 4 * i + 1) = 1, A(row, 4 * i + 2) = 2 * h, A(row, 4 * i + 3) = 3 * h * h;
      A(row++, 4 * (i + 1) + 1) = -1;
      A(row, 4 * i + 2) = 2, A(row, 4 * i + 3) = 6 * h;
      A(row++, 4 * (i + 1) + 2) = -2;
    }
  }
  A(row++, 2) = 2;
  const double hn = x[n] - x[n - 1];
  A(row, 4 * (n - 1) + 2) = 2, A(row++, 4 * (n - 1) + 3) = 6 * hn;
  REQUIRE(row == 4 * n);
  const Eigen::VectorXd coef = A.fullPivLu().solve(rhs);
  for (double t = 0.0; t <= 7.5; t += 0.05) {
    int i = 0;
    while (i + 1 < n && t >= x[i + 1]) ++i;
    const double u = t - x[i];
    const double expected = coef[4 * i] + u * (coef[4 * i + 1] + u * (coef[4 * i + 2] + u * coef[4 * i + 3]));
    CHECK(s(t) == doctest::Approx(expected).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(s(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
  CHECK(std::abs(s.second_derivative(0.0)) < 1e-12);
  CHECK(std::abs(s.second_derivative(7.5)) < 1e-12);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    CHECK(s.derivative(x[i] - 1e-9) == doctest::Approx(s.derivative(x[i] + 1e-9)).epsilon(1e-6));
  }
}

TEST_CASE("spline reproduces lines and rejects bad knots") {
  const NaturalCubicSpline line({0.0, 1.0, 3.0, 4.0}, {1.0, 3.0, 7.0, 9.0});
  CHECK(line(2.2) == doctest::Approx(5.4));
  CHECK(line.derivative(0.7) == doctest::Approx(2.0));
  CHECK_THROWS(NaturalCubicSpline({0.0}, {1.0}));
  CHECK_THROWS(NaturalCubicSpline({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}));
  CHECK_THROWS(NaturalCubicSpline({0.0, 1.0}, {1.0}));
}

TEST_CASE("sidelobe envelope") {
  const GaborParams p = GaborParams::make(192, 256, 768);
  const Window hann = normalize_energy(hann_window(256), p);
  const int kt = 4096;
  const FrequencyEnvelope env = sidelobe_envelope(hann, kt);
  const ComplexVector X = zero_pad_dft(hann, kt);
  CHECK(env.d.size() == kt);
  CHECK_FALSE(env.degenerate);
  for (int n = 0; n < kt; ++n) {
    CHECK(env.d[n] >= std::abs(X[n]));
    CHECK(env.d[n] == env.d[(kt - n) % kt]);
  }
  REQUIRE(env.knots.size() >= 3);
  CHECK(env.knots.front().bin == 0);
  CHECK(env.knots.back().bin == kt / 2);
  for (std::size_t i = 1; i + 1 < env.knots.size(); ++i) {
    const int b = env.knots[i].bin;
    CHECK(std::abs(X[b]) > std::abs(X[b - 1]));
    CHECK(std::abs(X[b]) > std::abs(X[b + 1]));
    CHECK(std::abs(env.d[b] - std::abs(X[b])) <= 1e-9);
  }
}

TEST_CASE("degenerate envelope") {
  const RealVector g = (RealVector(2) << 1.0, 1.0 + 1e-3).finished();
  const FrequencyEnvelope env = sidelobe_envelope(Window(g), 8);
  CHECK(env.degenerate);
  const ComplexVector X = zero_pad_dft(g, 8);
  for (int n = 0; n < 8; ++n) CHECK(env.d[n] == doctest::Approx(std::abs(X[n])));
}

TEST_CASE("external envelope validation") {
  CHECK_NOTHROW(make_envelope(RealVector::Ones(8), 4));
  CHECK_THROWS(make_envelope(RealVector::Ones(4), 4));
  RealVector bad = RealVector::Ones(8);
  bad[1] = 2.0;
  CHECK_THROWS(make_envelope(bad, 4));
  bad[1] = 0.0;
  bad[7] = 0.0;
  CHECK_THROWS(make_envelope(bad, 4));
}

}  // TEST_SUITE
