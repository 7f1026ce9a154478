#include <cmath>
#include <string>

#include "semcom/codec.hpp"
#include "semcom/errors.hpp"

namespace semcom::codec {
namespace {

using nn::Activation;
using nn::Tensor;
using nn::Var;

std::string enc(const std::string& name) { return std::string("semantic_encoder/") + name; }
std::string tx(const std::string& name) { return std::string("channel_encoder/") + name; }
std::string rx(const std::string& name) { return std::string("channel_decoder/") + name; }

Var dense_layer(const nn::BoundParams& p, const std::string& prefix, Var x, Activation act) {
  return nn::dense(x, p[prefix + "/weight"], p[prefix + "/bias"], act);
}

nn::GruWeights gru_weights(const nn::BoundParams& p, const std::string& prefix) {
  return {p[prefix + "/input"], p[prefix + "/hidden"], p[prefix + "/bias"]};
}

// Drops the leading batch axis of a [1,L,K] tensor.
Tensor unbatch(const Tensor& t) { return t.reshaped({t.dim(1), t.dim(2)}); }

}  // namespace

Var spectrogram_input(nn::Tape& tape, const dsp::Spectrogram& s) {
  if (s.frames == 0 || s.bins == 0) throw InvalidArgument("empty spectrogram");
  return tape.constant(Tensor({1, 1, s.frames, s.bins}, s.values));
}

Var semantic_logits(const nn::BoundParams& p, Var spectrogram, const ModelConfig& cfg) {
  Var x = spectrogram;
  for (std::size_t i = 0; i < cfg.conv_layers; ++i) {
    const std::string name = enc("conv" + std::to_string(i));
    x = nn::conv2d(x, p[name + "/kernel"], p[name + "/bias"], cfg.conv_stride, Activation::relu);
  }
  x = nn::conv_to_sequence(x);
  for (std::size_t i = 0; i < cfg.gru_layers; ++i) {
    const std::string name = enc("gru" + std::to_string(i));
    x = nn::bigru(x, gru_weights(p, name + "/fwd"), gru_weights(p, name + "/bwd"));
  }
  for (std::size_t i = 0; i < cfg.encoder_dense.size(); ++i)
    x = dense_layer(p, enc("dense" + std::to_string(i)), x, Activation::relu);
  return dense_layer(p, enc("out"), x, Activation::none);
}

Var semantic_encoder(const nn::BoundParams& p, Var spectrogram, const ModelConfig& cfg) {
  return nn::softmax(semantic_logits(p, spectrogram, cfg));
}

Var power_normalize(Var reals) {
  const Tensor& u = reals.value();
  if (u.rank() != 1 || u.size() % 2 != 0)
    throw InvalidArgument("power_normalize expects an even-length vector, got " +
                          nn::shape_string(u.shape()));
  const double n = static_cast<double>(u.size() / 2);
  double energy = 0.0;
  for (double v : u.data()) energy += v * v;
  if (!(energy > 0.0)) throw DegeneratePowerError("cannot normalize an all-zero symbol vector");
  const double s = std::sqrt(energy / n);
  Tensor out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= s;
  return reals.tape()->record(std::move(out), {reals},
                              [reals, s, n](const Tensor& g, const Tensor& x, nn::Tape& tape) {
                                // x = u / s, so dL/du = (g - x (g.x) / n) / s
                                double gx = 0.0;
                                for (std::size_t i = 0; i < g.size(); ++i) gx += g[i] * x[i];
                                Tensor& gu = tape.grad(reals);
                                for (std::size_t i = 0; i < g.size(); ++i)
                                  gu[i] += (g[i] - x[i] * gx / n) / s;
                              });
}

Var channel_layer(Var reals, const channel::ChannelState& state) {
  const channel::SymbolVector x = reals_to_symbols(reals.value());
  if (state.noise.size() != x.size())
    throw InvalidArgument("channel state covers " + std::to_string(state.noise.size()) +
                          " symbols, input has " + std::to_string(x.size()));
  Tensor out = symbols_to_reals(channel::equalize(channel::apply_channel(x, state), state));
  // With perfect channel knowledge the equalized output is x + n/h, so the
  // Jacobian with respect to x is the identity.
  return reals.tape()->record(std::move(out), {reals},
                              [reals](const Tensor& g, const Tensor&, nn::Tape& tape) {
                                tape.grad(reals) += g;
                              });
}

Var channel_encoder(const nn::BoundParams& p, Var features, const ModelConfig&) {
  Var x = dense_layer(p, tx("dense0"), features, Activation::relu);
  x = dense_layer(p, tx("dense1"), x, Activation::none);
  return power_normalize(nn::reshape(x, {x.value().size()}));
}

Var channel_decoder(const nn::BoundParams& p, Var reals, const ModelConfig&) {
  const std::size_t n = reals.value().size();
  if (n == 0 || n % kChannelWidth != 0)
    throw InvalidArgument("channel_decoder: " + std::to_string(n / 2) +
                          " symbols is not a multiple of " + std::to_string(kSymbolsPerStep));
  Var x = nn::reshape(reals, {1, n / kChannelWidth, kChannelWidth});
  x = dense_layer(p, rx("dense0"), x, Activation::relu);
  x = dense_layer(p, rx("dense1"), x, Activation::relu);
  return dense_layer(p, rx("out"), x, Activation::none);
}

PipelineGraph build_pipeline(const nn::BoundParams& p, Var spectrogram,
                             const channel::ChannelState* state, const ModelConfig& cfg) {
  PipelineGraph g;
  g.encoder_logits = semantic_logits(p, spectrogram, cfg);
  g.symbols = channel_encoder(p, nn::softmax(g.encoder_logits), cfg);
  g.received = state ? channel_layer(g.symbols, *state) : g.symbols;
  g.logits = channel_decoder(p, g.received, cfg);
  return g;
}

Tensor semantic_features(const dsp::Spectrogram& s, const nn::ModelParams& params,
                         const ModelConfig& cfg) {
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  return unbatch(semantic_logits(p, spectrogram_input(tape, s), cfg).value());
}

SemanticFeatures semantic_encode(const dsp::Spectrogram& s, const nn::ModelParams& params,
                                 const ModelConfig& cfg) {
  return nn::softmax(semantic_features(s, params, cfg));
}

channel::SymbolVector channel_encode(const SemanticFeatures& features,
                                     const nn::ModelParams& params, const ModelConfig& cfg) {
  if (features.rank() != 2 || features.dim(1) != static_cast<std::size_t>(ctc::kAlphabetSize))
    throw InvalidArgument("channel_encode expects [L,29] features, got " +
                          nn::shape_string(features.shape()));
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  Var in = tape.constant(features.reshaped({1, features.dim(0), features.dim(1)}));
  return reals_to_symbols(channel_encoder(p, in, cfg).value());
}

ProbabilityMatrix channel_decode(const channel::SymbolVector& y_eq, const nn::ModelParams& params,
                                 const ModelConfig& cfg) {
  if (y_eq.empty() || y_eq.size() % kSymbolsPerStep != 0)
    throw InvalidArgument("channel_decode: " + std::to_string(y_eq.size()) +
                          " symbols is not a positive multiple of " +
                          std::to_string(kSymbolsPerStep));
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  Var logits = channel_decoder(p, tape.constant(symbols_to_reals(y_eq)), cfg);
  return nn::softmax(unbatch(logits.value()));
}

Tensor symbols_to_reals(const channel::SymbolVector& x) {
  if (x.empty()) throw InvalidArgument("empty symbol vector");
  Tensor out({2 * x.size()});
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[2 * i] = x[i].real();
    out[2 * i + 1] = x[i].imag();
  }
  return out;
}

channel::SymbolVector reals_to_symbols(const Tensor& reals) {
  if (reals.size() % 2 != 0) throw InvalidArgument("odd number of reals cannot form symbols");
  channel::SymbolVector x(reals.size() / 2);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {reals[2 * i], reals[2 * i + 1]};
  return x;
}

}  // namespace semcom::codec
