#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "semcom/dsp.hpp"
#include "semcom/errors.hpp"

using namespace semcom;
using namespace semcom::dsp;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> naive_dft(const std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      out[k] += x[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi * double(j * k) / double(n));
  return out;
}

SpeechSamples sine(double freq, int rate, std::size_t len, double amp = 0.5) {
  SpeechSamples m;
  m.sample_rate = rate;
  m.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i)
    m.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * double(i) / rate);
  return m;
}

std::size_t argmax_bin(const Spectrogram& s, std::size_t frame) {
  std::size_t best = 0;
  for (std::size_t f = 1; f < s.bins; ++f)
    if (s.at(frame, f) > s.at(frame, best)) best = f;
  return best;
}

}  // namespace

TEST_CASE("fft: impulse and constant") {
  auto a = fft({1, 0, 0, 0});
  for (auto v : a) CHECK(std::abs(v - cplx(1, 0)) < 1e-15);
  auto b = fft({1, 1, 1, 1});
  CHECK(std::abs(b[0] - cplx(4, 0)) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(b[i]) < 1e-15);
}

TEST_CASE("fft: matches naive DFT and inverts through the inverse DFT") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 2u, 8u, 64u, 512u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = {nd(rng), nd(rng)};
    auto got = fft(x);
    auto want = naive_dft(x, -1);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(got[i] - want[i]));
    CHECK(err <= 1e-9);
    auto back = naive_dft(got, +1);
    double rerr = 0;
    for (std::size_t i = 0; i < n; ++i) rerr = std::max(rerr, std::abs(back[i] / double(n) - x[i]));
    CHECK(rerr <= 1e-9);
  }
}

TEST_CASE("fft: non power of two is rejected") {
  CHECK_THROWS_AS(fft(std::vector<cplx>(6)), InvalidArgument);
  CHECK_THROWS_AS(fft(std::vector<cplx>{}), InvalidArgument);
}

TEST_CASE("hamming window endpoints") {
  auto w = hamming(320);
  CHECK(w.front() == doctest::Approx(0.08));
  CHECK(w.back() == doctest::Approx(0.08));
}

TEST_CASE("spectrogram: default framing of one second") {
  FrontendConfig cfg;
  Spectrogram s = make_spectrogram(sine(440, 16000, 16000), cfg);
  CHECK(s.frames == 99);
  CHECK(s.bins == 257);
}

TEST_CASE("spectrogram: 1 kHz tone peaks in bin 32") {
  FrontendConfig cfg;
  Spectrogram s = log_magnitude(sine(1000, 16000, 16000), cfg);
  for (std::size_t n = 0; n < s.frames; ++n) CHECK(argmax_bin(s, n) == 32);
}

TEST_CASE("spectrogram: silence") {
  FrontendConfig cfg;
  SpeechSamples zero{std::vector<double>(4000, 0.0), 16000};
  Spectrogram raw = log_magnitude(zero, cfg);
  for (double v : raw.values) CHECK(v == std::log(1e-10));
  Spectrogram s = make_spectrogram(zero, cfg);
  for (double v : s.values) CHECK(v == 0.0);
}

TEST_CASE("spectrogram: per-bin zero mean and unit variance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  SpeechSamples m{std::vector<double>(9000), 16000};
  for (auto& v : m.samples) v = u(rng);
  Spectrogram s = make_spectrogram(m, FrontendConfig{});
  for (std::size_t f = 0; f < s.bins; ++f) {
    double mean = 0, var = 0;
    for (std::size_t n = 0; n < s.frames; ++n) mean += s.at(n, f);
    mean /= double(s.frames);
    for (std::size_t n = 0; n < s.frames; ++n) var += (s.at(n, f) - mean) * (s.at(n, f) - mean);
    var /= double(s.frames);
    CHECK(std::abs(mean) <= 1e-5);
    CHECK(std::abs(var - 1.0) <= 1e-5);
  }
  for (double v : s.values) CHECK(std::isfinite(v));
}

TEST_CASE("spectrogram: frame count formula for every length") {
  FrontendConfig cfg;
  for (std::size_t q = 320; q < 1400; q += 7) {
    Spectrogram s = make_spectrogram(sine(300, 16000, q), cfg);
    CHECK(s.frames == (q - 320) / 160 + 1);
  }
}

TEST_CASE("spectrogram: too short and bad config") {
  FrontendConfig cfg;
  CHECK_THROWS_AS(make_spectrogram(sine(300, 16000, 319), cfg), TooShortError);
  cfg.fft_size = 256;
  CHECK_THROWS_AS(make_spectrogram(sine(300, 16000, 1000), cfg), InvalidArgument);
}

TEST_CASE("resample: LJSpeech rate to 16 kHz") {
  SpeechSamples m = sine(1000, 22050, 22050);
  SpeechSamples r = resample(m, 16000);
  CHECK(r.sample_rate == 16000);
  CHECK(r.samples.size() == 16000);
  Spectrogram s = log_magnitude(r, FrontendConfig{});
  for (std::size_t n = 0; n < s.frames; ++n) {
    const long bin = long(argmax_bin(s, n));
    CHECK(std::abs(bin - 32) <= 1);
  }
}

TEST_CASE("resample: identity at equal rates") {
  SpeechSamples m = sine(700, 16000, 1234);
  CHECK(resample(m, 16000).samples == m.samples);
  CHECK_THROWS_AS(resample(m, 0), InvalidArgument);
}

TEST_CASE("wav: write then read") {
  const auto path = std::filesystem::temp_directory_path() / "semcom_test_dsp.wav";
  SpeechSamples m = sine(440, 22050, 5000);
  write_wav(path, m);
  SpeechSamples back = read_wav(path);
  CHECK(back.sample_rate == 22050);
  REQUIRE(back.samples.size() == m.samples.size());
  for (std::size_t i = 0; i < m.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - m.samples[i]) <= 1.0 / 32768.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_wav(path), WavError);
}
