#include <cmath>
#include <random>
#include <string>

#include "semcom/codec.hpp"
#include "semcom/errors.hpp"

namespace semcom::codec {
namespace {

using nn::ParamGroup;
using nn::Tensor;

Tensor glorot(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
              std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dist(rng);
  return t;
}

void add_dense(nn::ModelParams& p, ParamGroup g, const std::string& name, std::size_t in,
               std::size_t out, std::mt19937_64& rng) {
  p.add(g, name + "/weight", glorot({in, out}, in, out, rng));
  p.add(g, name + "/bias", Tensor({out}, 0.0));
}

void add_gru(nn::ModelParams& p, const std::string& name, std::size_t in, std::size_t h,
             std::mt19937_64& rng) {
  const auto g = ParamGroup::semantic_encoder;
  p.add(g, name + "/input", glorot({in, 3 * h}, in, h, rng));
  p.add(g, name + "/hidden", glorot({h, 3 * h}, h, h, rng));
  p.add(g, name + "/bias", Tensor({3 * h}, 0.0));
}

}  // namespace

void ModelConfig::validate() const {
  if (conv_layers == 0 || conv_filters == 0 || conv_kernel == 0)
    throw InvalidArgument("model config: convolution sizes must be positive");
  if (conv_stride.time == 0 || conv_stride.freq == 0)
    throw InvalidArgument("model config: strides must be positive");
  if (gru_layers == 0 || gru_units == 0)
    throw InvalidArgument("model config: recurrent sizes must be positive");
  for (std::size_t w : encoder_dense)
    if (w == 0) throw InvalidArgument("model config: dense widths must be positive");
  if (channel_hidden == 0 || decoder_hidden == 0)
    throw InvalidArgument("model config: dense widths must be positive");
  if (!(output_gain > 0.0) || !std::isfinite(output_gain))
    throw InvalidArgument("model config: output gain must be positive");
}

std::size_t ModelConfig::output_steps(std::size_t frames) const {
  for (std::size_t i = 0; i < conv_layers; ++i)
    frames = (frames + conv_stride.time - 1) / conv_stride.time;
  return frames;
}

std::size_t ModelConfig::output_bins(std::size_t bins) const {
  for (std::size_t i = 0; i < conv_layers; ++i)
    bins = (bins + conv_stride.freq - 1) / conv_stride.freq;
  return bins;
}

nn::ModelParams init_params(const ModelConfig& cfg, std::size_t bins, std::uint64_t seed) {
  cfg.validate();
  if (bins == 0) throw InvalidArgument("init_params: zero spectrogram width");
  std::mt19937_64 rng(seed);
  nn::ModelParams p;
  const auto enc = ParamGroup::semantic_encoder;
  const std::size_t k = cfg.conv_kernel;

  std::size_t channels = 1;
  for (std::size_t i = 0; i < cfg.conv_layers; ++i) {
    const std::string name = "conv" + std::to_string(i);
    p.add(enc, name + "/kernel",
          glorot({cfg.conv_filters, channels, k, k}, channels * k * k, cfg.conv_filters * k * k,
                 rng));
    p.add(enc, name + "/bias", Tensor({cfg.conv_filters}, 0.0));
    channels = cfg.conv_filters;
  }

  std::size_t width = channels * cfg.output_bins(bins);
  for (std::size_t i = 0; i < cfg.gru_layers; ++i) {
    const std::string name = "gru" + std::to_string(i);
    add_gru(p, name + "/fwd", width, cfg.gru_units, rng);
    add_gru(p, name + "/bwd", width, cfg.gru_units, rng);
    width = 2 * cfg.gru_units;
  }
  for (std::size_t i = 0; i < cfg.encoder_dense.size(); ++i) {
    add_dense(p, enc, "dense" + std::to_string(i), width, cfg.encoder_dense[i], rng);
    width = cfg.encoder_dense[i];
  }
  add_dense(p, enc, "out", width, ctc::kAlphabetSize, rng);
  for (auto& w : p.at("semantic_encoder/out/weight").raw()) w *= cfg.output_gain;

  const auto tx = ParamGroup::channel_encoder;
  add_dense(p, tx, "dense0", ctc::kAlphabetSize, cfg.channel_hidden, rng);
  add_dense(p, tx, "dense1", cfg.channel_hidden, kChannelWidth, rng);

  const auto rx = ParamGroup::channel_decoder;
  add_dense(p, rx, "dense0", kChannelWidth, cfg.decoder_hidden, rng);
  add_dense(p, rx, "dense1", cfg.decoder_hidden, cfg.decoder_hidden, rng);
  add_dense(p, rx, "out", cfg.decoder_hidden, ctc::kAlphabetSize, rng);
  return p;
}

std::size_t count_symbols(std::size_t samples_len, const dsp::FrontendConfig& frontend,
                          const ModelConfig& cfg) {
  const std::size_t frames = frontend.frame_count(samples_len);
  if (frames == 0) throw TooShortError("count_symbols: shorter than one frame");
  return cfg.output_steps(frames) * kSymbolsPerStep;
}

}  // namespace semcom::codec
