#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/codec.hpp"
#include "semcom/ctc.hpp"
#include "semcom/dsp.hpp"
#include "semcom/errors.hpp"
#include "semcom/metrics.hpp"
#include "semcom/params.hpp"

namespace semcom::harness {

// ---- configuration ------------------------------------------------------------

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 24;
  double learning_rate = 1e-4;
  bool channel_enabled = true;  // false trains without fading or noise
  channel::ChannelConfig channel{channel::ChannelKind::rician, 8.0, 4.0,
                                 channel::FadingMode::block};
  std::size_t plateau_patience = 10;
  double plateau_tolerance = 1e-4;
};

/// Settings of the classical transceivers.
struct BaselineConfig {
  std::size_t polar_n = 512;
  std::size_t polar_k = 256;
  std::size_t list_size = 4;
  double design_snr_db = 2.0;
  /// Canonical Huffman code as "token:length" pairs. Empty derives one from
  /// the character counts of the experiment transcripts.
  std::string huffman_codebook;
};

struct ExperimentConfig {
  dsp::FrontendConfig frontend;
  codec::ModelConfig model;
  TrainConfig train;
  BaselineConfig baseline;

  std::vector<channel::ChannelKind> channels{channel::ChannelKind::awgn,
                                             channel::ChannelKind::rayleigh,
                                             channel::ChannelKind::rician};
  std::vector<double> snr_grid = default_snr_grid();
  double rician_k = 4.0;
  channel::FadingMode fading = channel::FadingMode::block;

  std::uint64_t seed = 1;
  std::string manifest;  // LJSpeech-style metadata; empty selects the built-in toy corpus
  std::string checkpoint;
  std::string out_dir = "results";
  bool distribution_metrics = false;
  bool dump_transcripts = false;

  static std::vector<double> default_snr_grid();  // -12..18 step 2
  void validate() const;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" lines; '#' starts a comment; values may be quoted.
/// Unknown keys are rejected. See README for the key list.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
/// Reads a file, then applies DEEPSC_ST_SEED from the environment if set.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_seed_override(ExperimentConfig& cfg);
/// Parses "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(std::string_view text);
/// Minimal canonical form accepted by parse_config.
std::string format_config(const ExperimentConfig& cfg);

// ---- data -----------------------------------------------------------------------

struct SpeechRecord {
  std::string id;
  dsp::SpeechSamples audio;
  std::string text;  // normalized
};

struct Utterance {
  std::string id;
  dsp::Spectrogram spectrogram;
  ctc::TextSequence target;
  std::string text;
  std::size_t samples = 0;
};

Utterance prepare_utterance(const SpeechRecord& record, const dsp::FrontendConfig& frontend);

struct DatasetReport {
  std::vector<Utterance> utterances;
  std::vector<std::string> errors;  // one message per rejected record
};

class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// LJSpeech layout: `id|raw|normalized` rows, audio at <manifest dir>/wavs/<id>.wav.
/// Audio is resampled to the frontend rate. Bad records are reported and skipped;
/// throws DatasetError only if no record survives.
DatasetReport load_dataset(const std::filesystem::path& manifest, const dsp::FrontendConfig& frontend);

/// Five short synthetic utterances: one fixed tone per character.
std::vector<SpeechRecord> toy_corpus(const dsp::FrontendConfig& frontend);
/// Writes records as an LJSpeech-style directory (metadata.csv + wavs/).
void write_corpus(const std::vector<SpeechRecord>& records, const std::filesystem::path& dir);
/// Model and training settings sized for the toy corpus.
ExperimentConfig toy_experiment();

/// Toy corpus unless cfg.manifest is set.
std::vector<Utterance> load_experiment_data(const ExperimentConfig& cfg,
                                            std::vector<std::string>* errors = nullptr);

// ---- checkpoints ----------------------------------------------------------------

struct Checkpoint {
  codec::ModelConfig model;
  std::size_t bins = 0;  // spectrogram width the model was built for
  nn::ModelParams params;
};

class CheckpointError : public std::runtime_error {
public:
  enum class Kind { io, bad_magic, version_mismatch, truncated, incompatible };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

inline constexpr char kCheckpointMagic[] = "DSCST001";

/// Little-endian binary32 tensors behind an 8-byte magic. The model
/// hyperparameters travel in a tensor named "meta".
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
void write_checkpoint(const Checkpoint& ckpt, std::ostream& out);
Checkpoint load_checkpoint(const std::filesystem::path& path);
Checkpoint read_checkpoint(std::istream& in);
/// Throws CheckpointError(incompatible) if the model settings differ.
void require_compatible(const Checkpoint& ckpt, const codec::ModelConfig& model, std::size_t bins);

// ---- training -------------------------------------------------------------------

struct TrainResult {
  nn::ModelParams params;
  std::vector<double> epoch_losses;  // mean per-utterance CTC loss
  bool plateau_stop = false;
  std::size_t skipped = 0;  // utterances too short for their transcript
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

/// Mini-batch SGD on the CTC loss of the full pipeline. Batches are drawn in a
/// seed-determined order and their gradient is the mean over the batch.
TrainResult train(const std::vector<Utterance>& data, const ExperimentConfig& cfg,
                  nn::ModelParams init, const EpochCallback& on_epoch = {});

/// Loss of one utterance through the pipeline, with an optional channel draw.
double utterance_loss(const Utterance& u, const nn::ModelParams& params,
                      const codec::ModelConfig& model, const channel::ChannelState* state);

// ---- evaluation -----------------------------------------------------------------

struct Transcript {
  std::string id;
  std::string reference;
  std::string hypothesis;
};

struct EvalResult {
  metrics::EditOps chars;
  metrics::EditOps words;
  std::vector<Transcript> transcripts;
  nn::Tensor sent_features;      // stacked encoder logits, rows = steps
  nn::Tensor received_features;  // stacked receiver logits
  double cer() const { return chars.rate(); }
  double wer() const { return words.rate(); }
};

/// Greedy transcription of every utterance. A null channel is noiseless.
/// Utterance i uses rng stream mix_seed(seed, i).
EvalResult evaluate(const std::vector<Utterance>& data, const nn::ModelParams& params,
                    const codec::ModelConfig& model, const channel::ChannelConfig* ch,
                    std::uint64_t seed);

/// Transcribes one spectrogram.
std::string transcribe(const dsp::Spectrogram& s, const nn::ModelParams& params,
                       const codec::ModelConfig& model, const channel::ChannelConfig* ch,
                       std::uint64_t seed);

struct SweepRow {
  std::string channel;
  double snr_db = 0.0;
  double cer = 0.0;
  double wer = 0.0;
  std::size_t n_utts = 0;
  std::optional<double> fdsd;
  std::optional<double> kdsd;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::size_t, Transcript>> transcripts;  // row index, transcript
};

SweepOutput evaluate_sweep(const std::vector<Utterance>& data, const nn::ModelParams& params,
                           const ExperimentConfig& cfg);

void write_results_csv(const std::vector<SweepRow>& rows, std::ostream& out);
/// One block per channel: "# <channel>" then "snr_db cer" lines.
void write_plot_data(const std::vector<SweepRow>& rows, std::ostream& out);
/// Tab-separated: row, channel, snr_db, id, reference, hypothesis.
void write_transcripts(const SweepOutput& sweep, std::ostream& out);

/// Shortest round-trip decimal form used in every emitted file.
std::string format_number(double v);

}  // namespace semcom::harness
