#include "oracles.hpp"

#include "ntw/commands.hpp"
#include "ntw/config.hpp"
#include "ntw/io.hpp"
#include "ntw/spectral.hpp"
#include "ntw/wav.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace ntw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("ntw_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ntw");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return app::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest doubles round-trip") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 2000; ++i) {
    const double x = oracle::random_vector(1, rng)[0] * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("window files round-trip bit for bit") {
  TempDir dir;
  const GaborParams p = GaborParams::make(192, 256, 768);
  const Window w = normalize_energy(kaiser_window(256, 10.0), p);
  io::write_window_json(dir.path / "w.json", w, p, {{"k", 1}});
  io::write_window_csv(dir.path / "w.csv", w, {{"k", 1}});
  const io::WindowFile j = io::read_window(dir.path / "w.json");
  const io::WindowFile c = io::read_window(dir.path / "w.csv");
  CHECK(j.window.samples() == w.samples());
  CHECK(c.window.samples() == w.samples());
  CHECK(j.window.name() == "kaiser");
  CHECK(c.window.name() == "kaiser");
  CHECK(*j.hop == 192);
  CHECK(*j.channels == 256);
  CHECK(*j.length == 768);
  CHECK(io::read_json_file(dir.path / "w.json")["config"]["k"] == 1);
  CHECK(slurp(dir.path / "w.csv").find("# config {\"k\":1}") != std::string::npos);
}

TEST_CASE("malformed inputs") {
  TempDir dir;
  CHECK_THROWS_AS(io::read_window(dir.path / "missing.csv"), io::IoError);
  std::ofstream(dir.path / "bad.csv") << "value\n1.0\nabc\n";
  CHECK_THROWS_AS(io::read_sample_csv(dir.path / "bad.csv"), io::IoError);
  std::ofstream(dir.path / "bad.json") << "{\"samples\": [1, 2], \"K\": 3}";
  CHECK_THROWS_AS(io::read_window(dir.path / "bad.json"), io::IoError);
  std::ofstream(dir.path / "two.csv") << "index,value\n0,1.5\n1,2.5\n";
  CHECK(io::read_sample_csv(dir.path / "two.csv") == (RealVector(2) << 1.5, 2.5).finished());
}

TEST_CASE("WAV round-trip") {
  TempDir dir;
  std::mt19937_64 rng(52);
  RealVector x = oracle::random_vector(1000, rng) * 0.2;
  // 16-bit: quantize first so the round-trip is exact.
  RealVector q = (x * 32768.0).array().round() / 32768.0;
  io::write_wav(dir.path / "p.wav", {q, 8000}, io::WavFormat::Pcm16);
  const io::Audio pcm = io::read_wav(dir.path / "p.wav");
  CHECK(pcm.sample_rate == 8000);
  CHECK(pcm.samples == q);
  io::write_wav(dir.path / "f.wav", {x, 16000}, io::WavFormat::Float32);
  const io::Audio flt = io::read_wav(dir.path / "f.wav");
  CHECK(flt.samples == x.cast<float>().cast<double>());
  CHECK(fs::file_size(dir.path / "f.wav") == 44 + 4000);
  std::ofstream(dir.path / "junk.wav") << "not a wave file";
  CHECK_THROWS_AS(io::read_wav(dir.path / "junk.wav"), io::IoError);
}

TEST_CASE("config") {
  const io::Json j = io::Json::parse(R"({"lattice": {"a": 16, "M": 32}, "admm": {"beta": 3}})");
  const app::RunConfig c = app::config_from_json(j);
  CHECK(c.lattice.a == 16);
  CHECK(c.admm.beta_grid == std::vector<double>{3.0});
  const app::RunConfig back = app::config_from_json(app::config_to_json(c));
  CHECK(app::config_to_json(back) == app::config_to_json(c));
  CHECK_THROWS_AS(app::config_from_json(io::Json::parse(R"({"latice": {}})")), app::ConfigFileError);
  CHECK_THROWS_AS(app::config_from_json(io::Json::parse(R"({"admm": {"bta": 1}})")), app::ConfigFileError);
  CHECK_THROWS_AS(app::config_from_json(io::Json::parse(R"({"lattice": {"a": "x"}})")), app::ConfigFileError);
  CHECK(app::lattice_params(c, 32).length() == 32);
}

TEST_CASE("generate and analyze") {
  TempDir dir;
  const std::string out = (dir.path / "g").string();
  CHECK(cli({"generate", "--family", "kaiser", "--tight", "-o", out}) == 0);
  const io::WindowFile w = io::read_window(dir.path / "g" / "kaiser-256.json");
  CHECK(w.window.size() == 256);
  CHECK(w.window.energy() == doctest::Approx(0.75).epsilon(1e-14));
  const std::string tight = (dir.path / "g" / "kaiser-256-tight.json").string();
  CHECK(cli({"analyze", tight, "-o", out}) == 0);
  const io::Json a = io::read_json_file(dir.path / "g" / "kaiser-256-tight_analysis.json");
  CHECK(a["kappa"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(data_rows(dir.path / "g" / "kaiser-256-tight_response.csv") == 16 * 768);
  CHECK(a["window"]["samples"].size() == 768);
  CHECK(cli({"analyze", (dir.path / "g" / "kaiser-256.json").string(), "-o", out}) == 0);
  CHECK(io::read_json_file(dir.path / "g" / "kaiser-256_analysis.json")["window"]["samples"] ==
        io::read_json_file(dir.path / "g" / "kaiser-256.json")["samples"]);

  std::ofstream(dir.path / "delta.csv") << "1\n0\n0\n0\n0\n0\n0\n0\n";
  CHECK(cli({"analyze", (dir.path / "delta.csv").string(), "-a", "1", "-M", "8", "-L", "8", "-o", out}) == 0);
  const io::Json d = io::read_json_file(dir.path / "g" / "delta_analysis.json");
  CHECK(d["lower_bound"].get<double>() == doctest::Approx(8.0));
  CHECK(d["upper_bound"].get<double>() == doctest::Approx(8.0));
}

TEST_CASE("exit codes") {
  TempDir dir;
  const std::string out = (dir.path / "x").string();
  CHECK(cli({"generate", "--family", "bogus", "-o", out}) == app::kExitInputError);
  CHECK(cli({"generate", "-a", "5", "-M", "4", "-L", "12", "-K", "4", "-o", out}) == app::kExitInputError);
  CHECK(cli({"design", "--mu", "2", "--lambda", "1", "-o", out}) == app::kExitInputError);
  CHECK(cli({"analyze", (dir.path / "none.json").string()}) == app::kExitInputError);
  CHECK(cli({"denoise", "-o", out}) == app::kExitInputError);
  CHECK(cli({"sweep", "--fixtures", "1", "--fixture-length", "2000", "--hops", "0", "-o", out}) ==
        app::kExitAllFailed);
  CHECK(cli({"frobnicate"}) == app::kExitInputError);
  std::ofstream(dir.path / "cfg.json") << R"({"lattice": {"hop": 3}})";
  CHECK(cli({"generate", "--config", (dir.path / "cfg.json").string()}) == app::kExitInputError);
}

TEST_CASE("design command outputs") {
  TempDir dir;
  const std::string out = (dir.path / "d").string();
  REQUIRE(cli({"design", "-K", "32", "-M", "32", "-a", "16", "--beta", "1", "2", "4", "--max-iter", "100",
               "-o", out}) == 0);
  CHECK(data_rows(dir.path / "d" / "design_summary.csv") == 3);
  for (const char* tag : {"beta1", "beta2", "beta4"}) {
    CHECK(fs::exists(dir.path / "d" / (std::string("report_") + tag + ".json")));
    CHECK(fs::exists(dir.path / "d" / (std::string("residual_") + tag + ".csv")));
    CHECK(fs::exists(dir.path / "d" / (std::string("window_") + tag + ".json")));
  }
  CHECK(data_rows(dir.path / "d" / "envelope.csv") == 512);
  const io::Json report = io::read_json_file(dir.path / "d" / "report_beta2.json");
  CHECK(report["config"]["lattice"]["a"] == 16);
  CHECK(report["residual_history"].size() == report["iterations_run"].get<std::size_t>());
}

TEST_CASE("denoise command") {
  TempDir dir;
  const std::string out = (dir.path / "n").string();
  std::mt19937_64 rng(53);
  io::write_wav(dir.path / "in.wav", {0.1 * oracle::random_vector(3000, rng), 16000}, io::WavFormat::Pcm16);
  REQUIRE(cli({"denoise", "-i", (dir.path / "in.wav").string(), "--fixtures", "2", "--fixture-length", "3000",
               "-a", "128", "--write-audio", "--audio-format", "float32", "-o", out}) == 0);
  CHECK(data_rows(dir.path / "n" / "denoise_records.csv") == 4);
  CHECK(io::read_wav(dir.path / "n" / "audio" / "fixture1_a128_enhanced.wav").samples.size() == 3000);
  CHECK(io::read_wav(dir.path / "n" / "audio" / "in_a128_enhanced.wav").samples.size() == 3000);
  const io::Json j = io::read_json_file(dir.path / "n" / "denoise_records.json");
  CHECK(j["records"].back()["file"] == "mean");
  CHECK(j["records"].back()["snr_out_db"].get<double>() > 0.0);
}

}  // TEST_SUITE
