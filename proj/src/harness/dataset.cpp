#include <fstream>
#include <sstream>

#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == '|') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

Utterance prepare_utterance(const SpeechRecord& record, const dsp::FrontendConfig& frontend) {
  Utterance u;
  u.id = record.id;
  const dsp::SpeechSamples audio = record.audio.sample_rate == frontend.sample_rate
                                       ? record.audio
                                       : dsp::resample(record.audio, frontend.sample_rate);
  u.samples = audio.samples.size();
  u.spectrogram = dsp::make_spectrogram(audio, frontend);
  u.text = ctc::normalize_transcript(record.text);
  u.target = ctc::encode_text(u.text);
  return u;
}

DatasetReport load_dataset(const std::filesystem::path& manifest, const dsp::FrontendConfig& frontend) {
  std::ifstream in(manifest);
  if (!in) throw DatasetError("cannot open manifest " + manifest.string());
  DatasetReport report;
  const std::filesystem::path wav_dir = manifest.parent_path() / "wavs";
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = manifest.filename().string() + ":" + std::to_string(line_no);
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields[0].empty()) {
      report.errors.push_back(where + ": malformed row");
      continue;
    }
    const std::string& text = fields.size() >= 3 && !fields[2].empty() ? fields[2] : fields[1];
    try {
      SpeechRecord r{fields[0], dsp::read_wav(wav_dir / (fields[0] + ".wav")), text};
      Utterance u = prepare_utterance(r, frontend);
      if (u.target.empty()) {
        report.errors.push_back(where + ": empty transcript after normalization");
        continue;
      }
      report.utterances.push_back(std::move(u));
    } catch (const std::exception& e) {
      report.errors.push_back(where + ": " + e.what());
    }
  }
  if (report.utterances.empty()) {
    std::ostringstream os;
    os << "no usable records in " << manifest.string();
    for (const auto& e : report.errors) os << "\n  " << e;
    throw DatasetError(os.str());
  }
  return report;
}

void write_corpus(const std::vector<SpeechRecord>& records, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "wavs");
  std::ofstream meta(dir / "metadata.csv");
  if (!meta) throw DatasetError("cannot write " + (dir / "metadata.csv").string());
  for (const auto& r : records) {
    dsp::write_wav(dir / "wavs" / (r.id + ".wav"), r.audio);
    meta << r.id << '|' << r.text << '|' << r.text << '\n';
  }
}

std::vector<Utterance> load_experiment_data(const ExperimentConfig& cfg,
                                            std::vector<std::string>* errors) {
  if (cfg.manifest.empty()) {
    std::vector<Utterance> out;
    for (const auto& r : toy_corpus(cfg.frontend)) out.push_back(prepare_utterance(r, cfg.frontend));
    return out;
  }
  DatasetReport report = load_dataset(cfg.manifest, cfg.frontend);
  if (errors) *errors = std::move(report.errors);
  return std::move(report.utterances);
}

}  // namespace semcom::harness
