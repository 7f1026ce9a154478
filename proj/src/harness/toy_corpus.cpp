#include <cmath>
#include <numbers>
#include <random>

#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

constexpr double kToneSeconds = 0.08;
constexpr double kGapSeconds = 0.02;
constexpr double kEdgeSeconds = 0.05;
constexpr double kRampSeconds = 0.01;

double tone_hz(ctc::Token t) { return 250.0 + 125.0 * t; }

dsp::SpeechSamples synthesize(const std::string& text, int rate, std::uint64_t seed) {
  const auto n = [rate](double seconds) { return static_cast<std::size_t>(std::lround(seconds * rate)); };
  std::vector<double> s(n(kEdgeSeconds), 0.0);
  for (ctc::Token t : ctc::encode_text(text)) {
    const std::size_t len = n(kToneSeconds), ramp = n(kRampSeconds);
    for (std::size_t i = 0; i < len; ++i) {
      double env = 1.0;
      if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      if (len - 1 - i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (len - 1 - i) / ramp);
      s.push_back(0.5 * env * std::sin(2.0 * std::numbers::pi * tone_hz(t) * i / rate));
    }
    s.insert(s.end(), n(kGapSeconds), 0.0);
  }
  s.insert(s.end(), n(kEdgeSeconds), 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (double& v : s) v += noise(rng);
  return {std::move(s), rate};
}

}  // namespace

std::vector<SpeechRecord> toy_corpus(const dsp::FrontendConfig& frontend) {
  static const char* texts[] = {"go", "hi there", "sun", "a cat", "tell me"};
  std::vector<SpeechRecord> out;
  std::uint64_t k = 0;
  for (const char* t : texts) {
    out.push_back({"toy" + std::to_string(k), synthesize(t, frontend.sample_rate, 1000 + k), t});
    ++k;
  }
  return out;
}

ExperimentConfig toy_experiment() {
  ExperimentConfig cfg;
  cfg.model.conv_filters = 4;
  cfg.model.gru_layers = 1;
  cfg.model.gru_units = 32;
  cfg.model.encoder_dense = {};
  cfg.train.epochs = 500;
  cfg.train.batch_size = 1;
  cfg.train.learning_rate = 0.002;
  cfg.train.channel_enabled = false;
  return cfg;
}

}  // namespace semcom::harness
