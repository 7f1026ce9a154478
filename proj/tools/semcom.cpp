#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"
#include "semcom/harness.hpp"

namespace fs = std::filesystem;
using namespace semcom;
using harness::ExperimentConfig;

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string checkpoint;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "overrides the config seed and DEEPSC_ST_SEED");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--checkpoint", c.checkpoint, "checkpoint path");
  cmd->add_option("--set", c.overrides, "extra key=value config lines")->take_all();
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    if (!fs::exists(c.config)) throw UsageError("config file not found: " + c.config);
    cfg = harness::load_config(c.config);
  } else {
    harness::apply_seed_override(cfg);
  }
  if (!c.overrides.empty()) {
    std::string lines;
    for (const auto& o : c.overrides) lines += o + "\n";
    cfg = harness::parse_config(lines, cfg);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (!c.checkpoint.empty()) cfg.checkpoint = c.checkpoint;
  cfg.validate();
  return cfg;
}

std::vector<harness::Utterance> data_for(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  auto data = harness::load_experiment_data(cfg, &errors);
  for (const auto& e : errors) std::cerr << "skipped record: " << e << "\n";
  return data;
}

harness::Checkpoint checkpoint_for(const ExperimentConfig& cfg) {
  if (cfg.checkpoint.empty()) throw UsageError("no checkpoint given (--checkpoint or config key 'checkpoint')");
  harness::Checkpoint ck = harness::load_checkpoint(cfg.checkpoint);
  harness::require_compatible(ck, cfg.model, cfg.frontend.bins());
  return ck;
}

std::optional<channel::ChannelConfig> channel_for(const std::string& name, double snr_db,
                                                  const ExperimentConfig& cfg) {
  if (name == "none") return std::nullopt;
  return channel::ChannelConfig{channel::parse_channel_kind(name), snr_db, cfg.rician_k, cfg.fading};
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

metrics::FeatureMatrix read_matrix(const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& line : read_lines(path)) {
    std::istringstream is(line);
    std::vector<double> row;
    for (double v; is >> v;) row.push_back(v);
    if (!is.eof()) throw std::runtime_error(path + ": non-numeric value");
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows[0].size()) throw std::runtime_error(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no rows");
  metrics::FeatureMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_train(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const auto data = data_for(cfg);
  const std::size_t bins = cfg.frontend.bins();
  const auto result = harness::train(data, cfg, codec::init_params(cfg.model, bins, cfg.seed),
                                     [&](std::size_t epoch, double loss) {
                                       std::cerr << "epoch " << epoch + 1 << " loss "
                                                 << harness::format_number(loss) << "\n";
                                     });
  const fs::path path = cfg.checkpoint.empty() ? fs::path(cfg.out_dir) / "model.ckpt" : fs::path(cfg.checkpoint);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  harness::save_checkpoint({cfg.model, bins, result.params}, path);
  const auto eval = harness::evaluate(data, result.params, cfg.model, nullptr, cfg.seed);
  std::cout << "epochs=" << result.epoch_losses.size()
            << " loss=" << harness::format_number(result.epoch_losses.back())
            << " cer=" << harness::format_number(eval.cer()) << " wer=" << harness::format_number(eval.wer())
            << (result.plateau_stop ? " plateau" : "") << "\ncheckpoint " << path.string() << "\n";
  if (result.skipped) std::cerr << result.skipped << " utterances were too short for their transcripts\n";
  return 0;
}

int cmd_eval(const Common& c, const std::string& channel_name, double snr_db, bool show) {
  const ExperimentConfig cfg = load(c);
  const auto ck = checkpoint_for(cfg);
  const auto data = data_for(cfg);
  const auto ch = channel_for(channel_name, snr_db, cfg);
  const auto r = harness::evaluate(data, ck.params, cfg.model, ch ? &*ch : nullptr, cfg.seed);
  if (show)
    for (const auto& t : r.transcripts) std::cout << t.id << "\t" << t.reference << "\t" << t.hypothesis << "\n";
  std::cout << "cer=" << harness::format_number(r.cer()) << " wer=" << harness::format_number(r.wer())
            << " n_utts=" << data.size() << "\n";
  return 0;
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const auto ck = checkpoint_for(cfg);
  const auto data = data_for(cfg);
  const auto sweep = harness::evaluate_sweep(data, ck.params, cfg);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "results.csv");
    harness::write_results_csv(sweep.rows, out);
  }
  {
    auto out = open_out(dir / "plot_data.txt");
    harness::write_plot_data(sweep.rows, out);
  }
  if (cfg.dump_transcripts) {
    auto out = open_out(dir / "transcripts.tsv");
    harness::write_transcripts(sweep, out);
  }
  std::cout << sweep.rows.size() << " rows written to " << (dir / "results.csv").string() << "\n";
  return 0;
}

int cmd_metrics(const std::string& ref, const std::string& hyp, const std::string& sent,
                const std::string& received) {
  if (ref.empty() != hyp.empty()) throw UsageError("--ref and --hyp go together");
  if (sent.empty() != received.empty()) throw UsageError("--sent and --received go together");
  if (ref.empty() && sent.empty()) throw UsageError("nothing to score: give --ref/--hyp or --sent/--received");
  if (!ref.empty()) {
    const auto r = read_lines(ref), h = read_lines(hyp);
    if (r.size() != h.size())
      throw std::runtime_error("line counts differ: " + std::to_string(r.size()) + " vs " + std::to_string(h.size()));
    metrics::EditOps chars, words;
    for (std::size_t i = 0; i < r.size(); ++i) {
      chars += metrics::char_ops(r[i], h[i]);
      words += metrics::word_ops(r[i], h[i]);
    }
    std::cout << "cer=" << harness::format_number(chars.rate()) << " wer=" << harness::format_number(words.rate())
              << "\n";
  }
  if (!sent.empty()) {
    const auto a = read_matrix(sent), b = read_matrix(received);
    std::cout << "fdsd=" << harness::format_number(metrics::fdsd(a, b))
              << " kdsd=" << harness::format_number(metrics::kdsd(a, b)) << "\n";
  }
  return 0;
}

int cmd_baseline(const Common& c, const std::string& system, const std::string& channel_name,
                 std::optional<double> snr_db, const std::vector<std::string>& texts, bool sweep) {
  const ExperimentConfig cfg = load(c);
  const auto& bc = cfg.baseline;
  const auto polar = baselines::make_polar_config(bc.polar_n, bc.polar_k, bc.list_size, bc.design_snr_db);
  const std::vector<double> grid = sweep ? cfg.snr_grid : std::vector<double>{snr_db.value_or(10.0)};
  std::vector<channel::ChannelKind> kinds = cfg.channels;
  if (!sweep) kinds = {channel::parse_channel_kind(channel_name)};

  struct Item {
    std::string id, text;
    nn::Tensor features;
  };
  std::vector<Item> items;
  if (system == "text") {
    if (!texts.empty()) {
      for (std::size_t i = 0; i < texts.size(); ++i)
        items.push_back({"text" + std::to_string(i), ctc::normalize_transcript(texts[i]), {}});
    } else {
      for (const auto& u : data_for(cfg)) items.push_back({u.id, u.text, {}});
    }
  } else {
    if (!texts.empty()) throw UsageError("--text applies to the text system only");
    const auto ck = checkpoint_for(cfg);
    for (const auto& u : data_for(cfg))
      items.push_back({u.id, u.text, codec::semantic_encode(u.spectrogram, ck.params, cfg.model)});
  }
  baselines::HuffmanCodebook book;
  if (!bc.huffman_codebook.empty()) {
    book = baselines::HuffmanCodebook::parse(bc.huffman_codebook);
  } else if (!c.config.empty()) {
    std::string corpus;
    for (const auto& u : data_for(cfg)) corpus += u.text + " ";
    book = baselines::HuffmanCodebook::build(baselines::token_frequencies(corpus));
  } else {
    book = baselines::HuffmanCodebook::build(baselines::default_english_frequencies());
  }

  std::ostringstream csv;
  csv << "system,channel,snr_db,cer,wer,n_utts,symbols\n";
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const channel::ChannelConfig ch{kinds[k], grid[s], cfg.rician_k, cfg.fading};
      metrics::EditOps chars, words;
      std::size_t symbols = 0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        channel::Rng rng(channel::mix_seed(channel::mix_seed(cfg.seed, (k + 1) << 20 | (s + 1)), i));
        std::string hyp;
        std::size_t n = 0;
        if (system == "text") {
          const auto r = baselines::run_text_transceiver(items[i].text, book, polar, ch, rng);
          hyp = r.text;
          n = r.symbols;
        } else {
          const auto r = baselines::run_feature_transceiver(items[i].features, polar, ch, rng);
          hyp = r.text;
          n = r.symbols;
        }
        chars += metrics::char_ops(items[i].text, hyp);
        words += metrics::word_ops(items[i].text, hyp);
        symbols += n;
        if (!sweep) std::cout << items[i].id << "\tsent: " << items[i].text << "\n"
                              << items[i].id << "\trecv: " << hyp << "\n"
                              << items[i].id << "\tsymbols=" << n << "\n";
      }
      csv << system << "," << channel::to_string(kinds[k]) << "," << harness::format_number(grid[s]) << ","
          << harness::format_number(chars.rate()) << "," << harness::format_number(words.rate()) << ","
          << items.size() << "," << symbols << "\n";
    }
  }
  if (sweep) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    auto out = open_out(dir / ("baseline_" + system + ".csv"));
    out << csv.str();
    std::cout << "written " << (dir / ("baseline_" + system + ".csv")).string() << "\n";
  } else {
    std::cout << csv.str();
  }
  return 0;
}

int cmd_infer(const Common& c, const std::string& wav, const std::string& channel_name, double snr_db) {
  const ExperimentConfig cfg = load(c);
  const auto ck = checkpoint_for(cfg);
  auto audio = dsp::read_wav(wav);
  if (audio.sample_rate != cfg.frontend.sample_rate) audio = dsp::resample(audio, cfg.frontend.sample_rate);
  const auto spec = dsp::make_spectrogram(audio, cfg.frontend);
  if (spec.frames == 0) throw TooShortError("audio is shorter than one frame");
  const auto ch = channel_for(channel_name, snr_db, cfg);
  std::cout << harness::transcribe(spec, ck.params, cfg.model, ch ? &*ch : nullptr, cfg.seed) << "\n";
  return 0;
}

int cmd_synth(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const fs::path dir = c.out.empty() ? fs::path("toy_corpus") : fs::path(c.out);
  harness::write_corpus(harness::toy_corpus(cfg.frontend), dir);
  std::cout << "toy corpus written to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech semantic communication toolkit"};
  app.require_subcommand(1);

  Common common;
  std::string channel_name = "none";
  double snr_db = 10.0;
  std::optional<double> baseline_snr;
  bool show = false, baseline_sweep = false;
  std::string ref, hyp, sent, received, system, wav;
  std::vector<std::string> texts;

  auto* train = app.add_subcommand("train", "train the model and write a checkpoint");
  add_common(train, common, true);

  auto* eval = app.add_subcommand("eval", "score a checkpoint on the configured data at one channel setting");
  add_common(eval, common, true);
  eval->add_option("--channel", channel_name, "none, awgn, rayleigh or rician")->capture_default_str();
  eval->add_option("--snr", snr_db, "SNR in dB")->capture_default_str();
  eval->add_flag("--transcripts", show, "print every transcript");

  auto* sweep = app.add_subcommand("sweep", "CER/WER over channels and SNR grid");
  add_common(sweep, common, true);

  auto* met = app.add_subcommand("metrics", "score text or feature files");
  met->add_option("--ref", ref, "reference transcripts, one per line")->check(CLI::ExistingFile);
  met->add_option("--hyp", hyp, "hypothesis transcripts, one per line")->check(CLI::ExistingFile);
  met->add_option("--sent", sent, "feature matrix, whitespace separated rows")->check(CLI::ExistingFile);
  met->add_option("--received", received, "feature matrix, whitespace separated rows")->check(CLI::ExistingFile);

  auto* base = app.add_subcommand("baseline", "run a classical transceiver");
  add_common(base, common, false);
  base->add_option("--system", system, "text or feature")->required()->check(CLI::IsMember({"text", "feature"}));
  base->add_option("--channel", channel_name, "awgn, rayleigh or rician")->default_val("awgn");
  base->add_option("--snr", baseline_snr, "SNR in dB (default 10)");
  base->add_option("--text", texts, "sentence(s) for the text system");
  base->add_flag("--sweep", baseline_sweep, "use the config channels and SNR grid, write a CSV");

  auto* infer = app.add_subcommand("infer", "transcribe one WAV file");
  add_common(infer, common, true);
  infer->add_option("wav", wav, "input WAV")->required()->check(CLI::ExistingFile);
  infer->add_option("--channel", channel_name, "none, awgn, rayleigh or rician")->capture_default_str();
  infer->add_option("--snr", snr_db, "SNR in dB")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "write the synthetic toy corpus");
  add_common(synth, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(common);
    if (*eval) return cmd_eval(common, channel_name, snr_db, show);
    if (*sweep) return cmd_sweep(common);
    if (*met) return cmd_metrics(ref, hyp, sent, received);
    if (*base) return cmd_baseline(common, system, channel_name, baseline_snr, texts, baseline_sweep);
    if (*infer) return cmd_infer(common, wav, channel_name, snr_db);
    if (*synth) return cmd_synth(common);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
