#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semcom/autograd.hpp"
#include "semcom/channel.hpp"
#include "semcom/ctc.hpp"
#include "semcom/dsp.hpp"
#include "semcom/layers.hpp"
#include "semcom/params.hpp"
#include "semcom/tensor.hpp"

namespace semcom::codec {

inline constexpr std::size_t kChannelWidth = 40;  // reals per time step on the air
inline constexpr std::size_t kSymbolsPerStep = kChannelWidth / 2;

struct ModelConfig {
  std::size_t conv_layers = 2;
  std::size_t conv_filters = 32;
  std::size_t conv_kernel = 3;
  nn::Stride conv_stride{2, 2};
  std::size_t gru_layers = 6;
  std::size_t gru_units = 64;
  std::vector<std::size_t> encoder_dense{64};  // hidden widths before the 29-way output
  std::size_t channel_hidden = 40;
  std::size_t decoder_hidden = 40;
  /// Extra scale on the initial encoder output weights. A sharper initial
  /// softmax lets the 29-wide bottleneck carry information from the start.
  double output_gain = 4.0;

  /// Throws InvalidArgument for zero sizes or strides.
  void validate() const;
  /// Steps after the convolution stack for n input frames.
  std::size_t output_steps(std::size_t frames) const;
  /// Frequency width after the convolution stack.
  std::size_t output_bins(std::size_t bins) const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Glorot-uniform weights, zero biases. `bins` is the spectrogram width.
nn::ModelParams init_params(const ModelConfig& cfg, std::size_t bins, std::uint64_t seed);

/// Complex symbols emitted for an utterance of samples_len samples.
std::size_t count_symbols(std::size_t samples_len, const dsp::FrontendConfig& frontend,
                          const ModelConfig& cfg = {});

// Graph building blocks. Sequence tensors are [1, L, width].

/// Spectrogram as a [1,1,N,F] constant.
nn::Var spectrogram_input(nn::Tape& tape, const dsp::Spectrogram& s);
/// Pre-softmax encoder output [1,L,29].
nn::Var semantic_logits(const nn::BoundParams& p, nn::Var spectrogram, const ModelConfig& cfg);
/// Softmax of semantic_logits.
nn::Var semantic_encoder(const nn::BoundParams& p, nn::Var spectrogram, const ModelConfig& cfg);
/// Power-normalized interleaved reals [2n] (re0, im0, re1, im1, ...).
nn::Var channel_encoder(const nn::BoundParams& p, nn::Var features, const ModelConfig& cfg);
/// x -> x / sqrt(mean |x_i|^2) over complex pairs. Zero input throws DegeneratePowerError.
nn::Var power_normalize(nn::Var reals);
/// Fading, noise and zero-forcing equalization with a fixed realization.
nn::Var channel_layer(nn::Var reals, const channel::ChannelState& state);
/// Receiver logits [1,L,29] from interleaved reals; length must be a multiple of 40.
nn::Var channel_decoder(const nn::BoundParams& p, nn::Var reals, const ModelConfig& cfg);

struct PipelineGraph {
  nn::Var encoder_logits;
  nn::Var symbols;   // after power normalization
  nn::Var received;  // after equalization (== symbols without a channel)
  nn::Var logits;    // receiver, pre-softmax
};

/// Full transmitter-channel-receiver graph. A null state bypasses the channel.
PipelineGraph build_pipeline(const nn::BoundParams& p, nn::Var spectrogram,
                             const channel::ChannelState* state, const ModelConfig& cfg);

// Plain inference API.

using SemanticFeatures = nn::Tensor;   // [L,29], row-stochastic
using ProbabilityMatrix = nn::Tensor;  // [L,29], row-stochastic

SemanticFeatures semantic_encode(const dsp::Spectrogram& s, const nn::ModelParams& params,
                                 const ModelConfig& cfg);
/// Encoder logits [L,29]; used as the feature map for distribution metrics.
nn::Tensor semantic_features(const dsp::Spectrogram& s, const nn::ModelParams& params,
                             const ModelConfig& cfg);
channel::SymbolVector channel_encode(const SemanticFeatures& features,
                                     const nn::ModelParams& params, const ModelConfig& cfg);
ProbabilityMatrix channel_decode(const channel::SymbolVector& y_eq, const nn::ModelParams& params,
                                 const ModelConfig& cfg);

nn::Tensor symbols_to_reals(const channel::SymbolVector& x);
channel::SymbolVector reals_to_symbols(const nn::Tensor& reals);

}  // namespace semcom::codec
