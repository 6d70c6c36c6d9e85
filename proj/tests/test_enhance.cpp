#include "oracles.hpp"

#include "ntw/enhance.hpp"
#include "ntw/fixtures.hpp"
#include "ntw/spectral.hpp"

#include <doctest.h>

using namespace ntw;

TEST_SUITE("enhance") {

TEST_CASE("noise at a prescribed SNR") {
  const RealVector f = speech_like_fixture(3, 4000);
  const NoisyPair zero = add_noise_at_snr(f, 0.0, 5);
  CHECK(zero.noise.norm() == doctest::Approx(f.norm()).epsilon(1e-12));
  CHECK(zero.noisy == f + zero.noise);
  const NoisyPair twenty = add_noise_at_snr(f, 20.0, 5);
  CHECK(twenty.noise.squaredNorm() == doctest::Approx(f.squaredNorm() / 100.0).epsilon(1e-12));
  CHECK(add_noise_at_snr(f, 0.0, 5).noise == zero.noise);
  CHECK(add_noise_at_snr(f, 0.0, 6).noise != zero.noise);
  CHECK_THROWS(add_noise_at_snr(RealVector::Zero(8), 0.0, 1));
}

TEST_CASE("ideal Wiener mask") {
  GaborCoefficients clean(2, 2), noise(2, 2);
  clean.values() << Complex(1, 1), 0.0, Complex(0, 2), 3.0;
  noise.values() << 0.0, 0.0, Complex(2, 0), Complex(0, -3);
  const Eigen::MatrixXd m = ideal_wiener_mask(clean, noise);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 0) == doctest::Approx(0.5));
  CHECK(m(1, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ideal_wiener_mask(clean, GaborCoefficients(2, 3)), ShapeError);
}

TEST_CASE("decision-directed mask limits") {
  GaborCoefficients c(1, 3);
  c.values() << 2.0, 1.0, 3.0;
  const RealVector psd = RealVector::Constant(1, 4.0);
  CHECK(dd_wiener_mask(c, psd, 0.0)(0, 0) == 0.0);
  const Eigen::MatrixXd tiny = dd_wiener_mask(c, RealVector::Constant(1, 1e-300), 0.98);
  CHECK(tiny(0, 0) == doctest::Approx(1.0));
  CHECK(tiny(0, 2) == doctest::Approx(1.0));
  CHECK_THROWS(dd_wiener_mask(c, RealVector::Zero(1), 0.5));
  CHECK_THROWS(dd_wiener_mask(c, psd, 1.0));
}

TEST_CASE("noise PSD modes") {
  const GaborParams p = GaborParams::make(8, 16, 256);
  const RealVector g = hann_window(16).embed(256);
  std::mt19937_64 rng(41);
  const GaborCoefficients noisy = dgt(oracle::random_vector(256, rng), g, p);
  const GaborCoefficients noise = dgt(oracle::random_vector(256, rng), g, p);
  MaskSpec spec;
  spec.noise_psd_mode = NoisePsdMode::Oracle;
  CHECK(estimate_noise_psd(noisy, noise, spec).isApprox(noise.values().cwiseAbs2().rowwise().mean()));
  spec.noise_psd_mode = NoisePsdMode::FirstFrames;
  CHECK(estimate_noise_psd(noisy, noise, spec)
            .isApprox(noisy.values().leftCols(kNoiseEstimationFrames).cwiseAbs2().rowwise().mean()));
  spec.noise_psd_mode = NoisePsdMode::Supplied;
  spec.supplied_psd = RealVector::Constant(16, 2.0);
  CHECK(estimate_noise_psd(noisy, noise, spec) == spec.supplied_psd);
  spec.supplied_psd = RealVector::Constant(3, 2.0);
  CHECK_THROWS_AS(estimate_noise_psd(noisy, noise, spec), ShapeError);
  CHECK(parse_noise_psd_mode("first_frames") == NoisePsdMode::FirstFrames);
  CHECK(parse_mask_kind("dd") == MaskKind::DecisionDirectedWiener);
  CHECK_THROWS(parse_mask_kind("mmse"));
}

TEST_CASE("unit and zero masks") {
  const GaborParams p = GaborParams::make(96, 128, 1536);
  const RealVector g = hann_window(128).embed(1536);
  const RealVector noisy = speech_like_fixture(8, 1500);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(128, 16);
  CHECK((apply_mask(noisy, ones, g, p) - noisy).norm() <= 1e-10 * noisy.norm());
  CHECK(apply_mask(noisy, Eigen::MatrixXd::Zero(128, 16), g, p).norm() == 0.0);
  CHECK_THROWS_AS(apply_mask(noisy, Eigen::MatrixXd::Ones(4, 4), g, p), ShapeError);
}

TEST_CASE("SNR") {
  const RealVector ref = RealVector::LinSpaced(10, 1.0, 10.0);
  CHECK(std::isinf(snr_db(ref, ref)));
  CHECK(snr_db(ref, RealVector::Zero(10)) == doctest::Approx(0.0));
  RealVector n = RealVector::Zero(10);
  n[3] = ref.norm();
  CHECK(snr_db(ref, ref + n) == doctest::Approx(0.0));
  CHECK_THROWS(snr_db(ref, RealVector::Zero(4)));
}

TEST_CASE("fixtures") {
  const RealVector a = speech_like_fixture(1);
  CHECK(a.size() == kFixtureLength);
  CHECK(std::sqrt(a.squaredNorm() / a.size()) == doctest::Approx(1.0));
  CHECK(speech_like_fixture(1) == a);
  CHECK(speech_like_fixture(2) != a);
  CHECK(fixture_corpus(3, 5).at(1) == speech_like_fixture(6));
  // Speech-like: most energy below 4 kHz.
  const ComplexVector X = zero_pad_dft(a, 16384);
  const double low = X.head(4096).squaredNorm();
  CHECK(low > 0.8 * X.head(8193).squaredNorm());
}

TEST_CASE("ideal Wiener improves a fixture") {
  const GaborParams p = GaborParams::make(128, 256, padded_length(kFixtureLength, 256, 128, 256));
  const NoisyPair pair = add_noise_at_snr(speech_like_fixture(4), 0.0, 9);
  const RealVector out = enhance(pair, hann_window(256), p, MaskSpec{});
  CHECK(snr_db(pair.clean, out) > 0.0);
}

TEST_CASE("decision-directed mask improves a tone in white noise") {
  const int len = 8000;
  const GaborParams p = GaborParams::make(128, 256, padded_length(len, 256, 128, 256));
  const NoisyPair pair = add_noise_at_snr(sine_tone(440.0, len), 0.0, 10);
  MaskSpec spec;
  spec.kind = MaskKind::DecisionDirectedWiener;
  spec.noise_psd_mode = NoisePsdMode::Oracle;
  const RealVector out = enhance(pair, hann_window(256), p, spec);
  CHECK(snr_db(pair.clean, out) > snr_db(pair.clean, pair.noisy));
}

TEST_CASE("sweep records") {
  const std::vector<RealVector> corpus = fixture_corpus(3, 1, 8000);
  const Window kaiser = kaiser_window(256, 10.0);
  std::vector<NamedWindow> windows{{"hann", hann_window(256)}, {"kaiser-tight", kaiser, true}};
  const auto one = sweep({windows[0]}, {128}, {corpus[0]}, MaskSpec{}, SweepSetup{});
  REQUIRE(one.size() == 1);
  CHECK(one[0].signals == 1);

  const auto records = sweep(windows, {128, 192}, corpus, MaskSpec{}, SweepSetup{});
  REQUIRE(records.size() == 4);
  CHECK(records[0].window_id == "hann");
  CHECK(records[0].hop == 128);
  CHECK(records[1].snr_out_db < records[0].snr_out_db);
  CHECK(records[3].snr_out_db > records[1].snr_out_db);
  CHECK(records[2].kappa == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(records[3].kappa == doctest::Approx(1.0).epsilon(1e-8));
  for (const auto& r : records) CHECK(r.error.empty());
  CHECK(sweep(windows, {128, 192}, corpus, MaskSpec{}, SweepSetup{})[3].snr_out_db == records[3].snr_out_db);

  const auto bad = sweep({windows[0]}, {0}, {corpus[0]}, MaskSpec{}, SweepSetup{});
  CHECK_FALSE(bad[0].error.empty());
}

}  // TEST_SUITE
