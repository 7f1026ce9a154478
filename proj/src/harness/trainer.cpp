#include <algorithm>
#include <cmath>
#include <numeric>

#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

// Separates the training channel streams from evaluation streams.
constexpr std::uint64_t kTrainStream = 0x7472616e;

struct LossAndGrad {
  double loss;
  nn::Gradients grads;
};

LossAndGrad loss_and_grad(const Utterance& u, const nn::ModelParams& params,
                          const codec::ModelConfig& model, const channel::ChannelState* state) {
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  const auto g = codec::build_pipeline(p, codec::spectrogram_input(tape, u.spectrogram), state, model);
  const nn::Var loss = ctc::ctc_loss(g.logits, u.target);
  const double v = loss.value()[0];
  if (!std::isfinite(v)) throw DivergenceError("non-finite loss on utterance " + u.id);
  return {v, tape.backward(loss)};
}

}  // namespace

double utterance_loss(const Utterance& u, const nn::ModelParams& params,
                      const codec::ModelConfig& model, const channel::ChannelState* state) {
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  const auto g = codec::build_pipeline(p, codec::spectrogram_input(tape, u.spectrogram), state, model);
  return ctc::ctc_loss(g.logits, u.target).value()[0];
}

TrainResult train(const std::vector<Utterance>& data, const ExperimentConfig& cfg,
                  nn::ModelParams init, const EpochCallback& on_epoch) {
  cfg.validate();
  TrainResult result;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (cfg.model.output_steps(data[i].spectrogram.frames) >= ctc::min_alignment_length(data[i].target))
      usable.push_back(i);
    else
      ++result.skipped;
  }
  if (usable.empty()) throw InvalidArgument("train: no utterance is long enough for its transcript");

  const TrainConfig& tc = cfg.train;
  const std::size_t batch = std::max<std::size_t>(1, std::min(tc.batch_size, usable.size()));
  nn::ModelParams params = std::move(init);
  std::size_t flat_epochs = 0;

  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    std::vector<std::size_t> order = usable;
    channel::Rng shuffle_rng(channel::mix_seed(cfg.seed, epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      nn::Gradients acc;
      for (std::size_t j = start; j < end; ++j) {
        const Utterance& u = data[order[j]];
        std::optional<channel::ChannelState> state;
        if (tc.channel_enabled) {
          channel::Rng rng(channel::mix_seed(channel::mix_seed(cfg.seed ^ kTrainStream, epoch), j));
          const std::size_t n = cfg.model.output_steps(u.spectrogram.frames) * codec::kSymbolsPerStep;
          state = channel::draw_state(n, tc.channel, rng);
        }
        LossAndGrad lg = loss_and_grad(u, params, cfg.model, state ? &*state : nullptr);
        loss_sum += lg.loss;
        for (auto& [key, g] : lg.grads) {
          for (auto& v : g.raw()) v *= scale;
          if (auto it = acc.find(key); it != acc.end())
            it->second += g;
          else
            acc.emplace(key, std::move(g));
        }
      }
      params = nn::sgd_step(params, acc, tc.learning_rate);
    }

    const double mean = loss_sum / static_cast<double>(order.size());
    if (!std::isfinite(mean)) throw DivergenceError("non-finite epoch loss at epoch " + std::to_string(epoch));
    if (!result.epoch_losses.empty()) {
      const double prev = result.epoch_losses.back();
      const double rel = (prev - mean) / std::max(std::abs(prev), 1e-300);
      flat_epochs = rel < tc.plateau_tolerance ? flat_epochs + 1 : 0;
    }
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
    if (tc.plateau_patience > 0 && flat_epochs >= tc.plateau_patience) {
      result.plateau_stop = true;
      break;
    }
  }
  result.params = std::move(params);
  return result;
}

}  // namespace semcom::harness
