#include <charconv>
#include <ostream>

#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

struct Decoded {
  std::string text;
  nn::Tensor sent;      // [L,29] encoder logits
  nn::Tensor received;  // [L,29] receiver logits
};

Decoded run_pipeline(const dsp::Spectrogram& s, const nn::ModelParams& params,
                     const codec::ModelConfig& model, const channel::ChannelConfig* ch,
                     std::uint64_t stream_seed) {
  nn::Tape tape;
  const nn::BoundParams p(tape, params);
  std::optional<channel::ChannelState> state;
  if (ch) {
    channel::Rng rng(stream_seed);
    state = channel::draw_state(model.output_steps(s.frames) * codec::kSymbolsPerStep, *ch, rng);
  }
  const auto g = codec::build_pipeline(p, codec::spectrogram_input(tape, s), state ? &*state : nullptr, model);
  const auto unbatch = [](const nn::Tensor& t) { return t.reshaped({t.dim(1), t.dim(2)}); };
  Decoded d;
  d.sent = unbatch(g.encoder_logits.value());
  d.received = unbatch(g.logits.value());
  d.text = ctc::decode_text(ctc::greedy_decode(nn::softmax(d.received)));
  return d;
}

nn::Tensor stack_rows(const std::vector<nn::Tensor>& parts) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.dim(0);
  std::vector<double> data;
  data.reserve(rows * static_cast<std::size_t>(ctc::kAlphabetSize));
  for (const auto& p : parts) data.insert(data.end(), p.data().begin(), p.data().end());
  return nn::Tensor({rows, static_cast<std::size_t>(ctc::kAlphabetSize)}, std::move(data));
}

Eigen::MatrixXd to_matrix(const nn::Tensor& t) {
  Eigen::MatrixXd m(t.dim(0), t.dim(1));
  for (std::size_t r = 0; r < t.dim(0); ++r)
    for (std::size_t c = 0; c < t.dim(1); ++c) m(r, c) = t.at(r, c);
  return m;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string transcribe(const dsp::Spectrogram& s, const nn::ModelParams& params,
                       const codec::ModelConfig& model, const channel::ChannelConfig* ch,
                       std::uint64_t seed) {
  return run_pipeline(s, params, model, ch, channel::mix_seed(seed, 0)).text;
}

EvalResult evaluate(const std::vector<Utterance>& data, const nn::ModelParams& params,
                    const codec::ModelConfig& model, const channel::ChannelConfig* ch,
                    std::uint64_t seed) {
  if (data.empty()) throw InvalidArgument("evaluate: empty dataset");
  EvalResult r;
  std::vector<nn::Tensor> sent, received;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Utterance& u = data[i];
    Decoded d = run_pipeline(u.spectrogram, params, model, ch, channel::mix_seed(seed, i));
    r.chars += metrics::char_ops(u.text, d.text);
    r.words += metrics::word_ops(u.text, d.text);
    r.transcripts.push_back({u.id, u.text, d.text});
    sent.push_back(std::move(d.sent));
    received.push_back(std::move(d.received));
  }
  r.sent_features = stack_rows(sent);
  r.received_features = stack_rows(received);
  return r;
}

SweepOutput evaluate_sweep(const std::vector<Utterance>& data, const nn::ModelParams& params,
                           const ExperimentConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  for (std::size_t c = 0; c < cfg.channels.size(); ++c) {
    for (std::size_t s = 0; s < cfg.snr_grid.size(); ++s) {
      channel::ChannelConfig ch;
      ch.kind = cfg.channels[c];
      ch.snr_db = cfg.snr_grid[s];
      ch.rician_k = cfg.rician_k;
      ch.fading = cfg.fading;
      const std::uint64_t seed = channel::mix_seed(channel::mix_seed(cfg.seed, c + 1), s + 1);
      EvalResult e = evaluate(data, params, cfg.model, &ch, seed);
      SweepRow row{channel::to_string(ch.kind), ch.snr_db, e.cer(), e.wer(), data.size(), {}, {}};
      if (cfg.distribution_metrics) {
        const Eigen::MatrixXd d = to_matrix(e.sent_features), dh = to_matrix(e.received_features);
        row.fdsd = metrics::fdsd(d, dh);
        row.kdsd = metrics::kdsd(d, dh);
      }
      if (cfg.dump_transcripts)
        for (auto& t : e.transcripts) out.transcripts.emplace_back(out.rows.size(), std::move(t));
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

void write_results_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const bool dist = !rows.empty() && rows.front().fdsd.has_value();
  out << "channel,snr_db,cer,wer,n_utts" << (dist ? ",fdsd,kdsd" : "") << '\n';
  for (const auto& r : rows) {
    out << r.channel << ',' << format_number(r.snr_db) << ',' << format_number(r.cer) << ','
        << format_number(r.wer) << ',' << r.n_utts;
    if (dist) out << ',' << format_number(*r.fdsd) << ',' << format_number(*r.kdsd);
    out << '\n';
  }
}

void write_plot_data(const std::vector<SweepRow>& rows, std::ostream& out) {
  std::string current;
  for (const auto& r : rows) {
    if (r.channel != current) {
      if (!current.empty()) out << "\n\n";
      out << "# " << r.channel << "\nsnr_db cer\n";
      current = r.channel;
    }
    out << format_number(r.snr_db) << ' ' << format_number(r.cer) << '\n';
  }
}

void write_transcripts(const SweepOutput& sweep, std::ostream& out) {
  out << "row\tchannel\tsnr_db\tid\treference\thypothesis\n";
  for (const auto& [row, t] : sweep.transcripts) {
    const SweepRow& r = sweep.rows.at(row);
    out << row << '\t' << r.channel << '\t' << format_number(r.snr_db) << '\t' << t.id << '\t'
        << t.reference << '\t' << t.hypothesis << '\n';
  }
}

}  // namespace semcom::harness
