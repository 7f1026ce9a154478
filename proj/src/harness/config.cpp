#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "semcom/baselines.hpp"
#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

channel::ChannelKind to_kind(const std::string& key, const std::string& v) {
  try {
    return channel::parse_channel_kind(v);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' has unknown channel '" + v + "'");
  }
}

channel::FadingMode to_fading(const std::string& key, const std::string& v) {
  if (v == "block") return channel::FadingMode::block;
  if (v == "per_symbol") return channel::FadingMode::per_symbol;
  throw ConfigError("config: '" + key + "' expects block or per_symbol, got '" + v + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["seed"] = [](auto& c, auto& k, auto& v) { c.seed = to_uint(k, v); };
    t["manifest"] = [](auto& c, auto&, auto& v) { c.manifest = v; };
    t["checkpoint"] = [](auto& c, auto&, auto& v) { c.checkpoint = v; };
    t["out_dir"] = [](auto& c, auto&, auto& v) { c.out_dir = v; };
    t["distribution_metrics"] = [](auto& c, auto& k, auto& v) { c.distribution_metrics = to_bool(k, v); };
    t["dump_transcripts"] = [](auto& c, auto& k, auto& v) { c.dump_transcripts = to_bool(k, v); };

    t["frontend.sample_rate"] = [](auto& c, auto& k, auto& v) { c.frontend.sample_rate = static_cast<int>(to_uint(k, v)); };
    t["frontend.frame_len_ms"] = [](auto& c, auto& k, auto& v) { c.frontend.frame_len_ms = to_double(k, v); };
    t["frontend.hop_ms"] = [](auto& c, auto& k, auto& v) { c.frontend.hop_ms = to_double(k, v); };
    t["frontend.fft_size"] = [](auto& c, auto& k, auto& v) { c.frontend.fft_size = to_uint(k, v); };

    t["model.conv_layers"] = [](auto& c, auto& k, auto& v) { c.model.conv_layers = to_uint(k, v); };
    t["model.conv_filters"] = [](auto& c, auto& k, auto& v) { c.model.conv_filters = to_uint(k, v); };
    t["model.conv_kernel"] = [](auto& c, auto& k, auto& v) { c.model.conv_kernel = to_uint(k, v); };
    t["model.conv_stride_time"] = [](auto& c, auto& k, auto& v) { c.model.conv_stride.time = to_uint(k, v); };
    t["model.conv_stride_freq"] = [](auto& c, auto& k, auto& v) { c.model.conv_stride.freq = to_uint(k, v); };
    t["model.gru_layers"] = [](auto& c, auto& k, auto& v) { c.model.gru_layers = to_uint(k, v); };
    t["model.gru_units"] = [](auto& c, auto& k, auto& v) { c.model.gru_units = to_uint(k, v); };
    t["model.encoder_dense"] = [](auto& c, auto& k, auto& v) {
      c.model.encoder_dense.clear();
      for (const auto& item : split_list(v)) c.model.encoder_dense.push_back(to_uint(k, item));
    };
    t["model.channel_hidden"] = [](auto& c, auto& k, auto& v) { c.model.channel_hidden = to_uint(k, v); };
    t["model.decoder_hidden"] = [](auto& c, auto& k, auto& v) { c.model.decoder_hidden = to_uint(k, v); };
    t["model.output_gain"] = [](auto& c, auto& k, auto& v) { c.model.output_gain = to_double(k, v); };

    t["train.epochs"] = [](auto& c, auto& k, auto& v) { c.train.epochs = to_uint(k, v); };
    t["train.batch_size"] = [](auto& c, auto& k, auto& v) { c.train.batch_size = to_uint(k, v); };
    t["train.learning_rate"] = [](auto& c, auto& k, auto& v) { c.train.learning_rate = to_double(k, v); };
    t["train.channel"] = [](auto& c, auto& k, auto& v) {
      c.train.channel_enabled = v != "none";
      if (c.train.channel_enabled) c.train.channel.kind = to_kind(k, v);
    };
    t["train.snr_db"] = [](auto& c, auto& k, auto& v) { c.train.channel.snr_db = to_double(k, v); };
    t["train.rician_k"] = [](auto& c, auto& k, auto& v) { c.train.channel.rician_k = to_double(k, v); };
    t["train.fading"] = [](auto& c, auto& k, auto& v) { c.train.channel.fading = to_fading(k, v); };
    t["train.plateau_patience"] = [](auto& c, auto& k, auto& v) { c.train.plateau_patience = to_uint(k, v); };
    t["train.plateau_tolerance"] = [](auto& c, auto& k, auto& v) { c.train.plateau_tolerance = to_double(k, v); };

    t["sweep.channels"] = [](auto& c, auto& k, auto& v) {
      c.channels.clear();
      for (const auto& item : split_list(v)) c.channels.push_back(to_kind(k, item));
    };
    t["sweep.snr_grid"] = [](auto& c, auto&, auto& v) { c.snr_grid = parse_snr_grid(v); };
    t["sweep.rician_k"] = [](auto& c, auto& k, auto& v) { c.rician_k = to_double(k, v); };
    t["sweep.fading"] = [](auto& c, auto& k, auto& v) { c.fading = to_fading(k, v); };

    t["baseline.polar_n"] = [](auto& c, auto& k, auto& v) { c.baseline.polar_n = to_uint(k, v); };
    t["baseline.polar_k"] = [](auto& c, auto& k, auto& v) { c.baseline.polar_k = to_uint(k, v); };
    t["baseline.list_size"] = [](auto& c, auto& k, auto& v) { c.baseline.list_size = to_uint(k, v); };
    t["baseline.design_snr_db"] = [](auto& c, auto& k, auto& v) { c.baseline.design_snr_db = to_double(k, v); };
    t["baseline.huffman_codebook"] = [](auto& c, auto&, auto& v) { c.baseline.huffman_codebook = v; };
    return t;
  }();
  return table;
}

std::string fading_name(channel::FadingMode m) {
  return m == channel::FadingMode::block ? "block" : "per_symbol";
}

}  // namespace

std::vector<double> ExperimentConfig::default_snr_grid() {
  std::vector<double> g;
  for (int s = -12; s <= 18; s += 2) g.push_back(s);
  return g;
}

void ExperimentConfig::validate() const {
  if (snr_grid.empty()) throw ConfigError("config: SNR grid is empty");
  if (channels.empty()) throw ConfigError("config: no sweep channels");
  if (train.batch_size == 0) throw ConfigError("config: batch size must be positive");
  if (!(train.learning_rate >= 0.0)) throw ConfigError("config: learning rate must be non-negative");
  try {
    model.validate();
    baselines::make_polar_config(baseline.polar_n, baseline.polar_k, baseline.list_size, baseline.design_snr_db);
    if (!baseline.huffman_codebook.empty()) baselines::HuffmanCodebook::parse(baseline.huffman_codebook);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> parse_snr_grid(std::string_view text) {
  const std::string s = trim(text);
  if (const auto c1 = s.find(':'); c1 != std::string::npos) {
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("config: SNR range must be start:stop:step");
    const double a = to_double("sweep.snr_grid", trim(s.substr(0, c1)));
    const double b = to_double("sweep.snr_grid", trim(s.substr(c1 + 1, c2 - c1 - 1)));
    const double step = to_double("sweep.snr_grid", trim(s.substr(c2 + 1)));
    if (!(step > 0) || b < a) throw ConfigError("config: SNR range needs step > 0 and stop >= start");
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
      const double v = a + static_cast<double>(i) * step;
      if (v > b + 1e-9 * step) break;
      g.push_back(v);
    }
    return g;
  }
  std::vector<double> g;
  for (const auto& item : split_list(s)) g.push_back(to_double("sweep.snr_grid", item));
  if (g.empty()) throw ConfigError("config: SNR grid is empty");
  return g;
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty() || t.front() == '[') continue;  // blank line or table header
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key == "preset") {
      if (value != "toy") throw ConfigError("config: unknown preset '" + value + "'");
      cfg = toy_experiment();
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

void apply_seed_override(ExperimentConfig& cfg) {
  if (const char* env = std::getenv("DEEPSC_ST_SEED"); env && *env)
    cfg.seed = to_uint("DEEPSC_ST_SEED", trim(env));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  apply_seed_override(cfg);
  return cfg;
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  const auto num = [](double v) { return format_number(v); };
  std::vector<std::string> dense, kinds, grid;
  for (auto w : c.model.encoder_dense) dense.push_back(std::to_string(w));
  for (auto k : c.channels) kinds.push_back(channel::to_string(k));
  for (auto s : c.snr_grid) grid.push_back(num(s));
  os << "seed = " << c.seed << '\n'
     << "manifest = \"" << c.manifest << "\"\n"
     << "checkpoint = \"" << c.checkpoint << "\"\n"
     << "out_dir = \"" << c.out_dir << "\"\n"
     << "distribution_metrics = " << (c.distribution_metrics ? "true" : "false") << '\n'
     << "dump_transcripts = " << (c.dump_transcripts ? "true" : "false") << '\n'
     << "frontend.sample_rate = " << c.frontend.sample_rate << '\n'
     << "frontend.frame_len_ms = " << num(c.frontend.frame_len_ms) << '\n'
     << "frontend.hop_ms = " << num(c.frontend.hop_ms) << '\n'
     << "frontend.fft_size = " << c.frontend.fft_size << '\n'
     << "model.conv_layers = " << c.model.conv_layers << '\n'
     << "model.conv_filters = " << c.model.conv_filters << '\n'
     << "model.conv_kernel = " << c.model.conv_kernel << '\n'
     << "model.conv_stride_time = " << c.model.conv_stride.time << '\n'
     << "model.conv_stride_freq = " << c.model.conv_stride.freq << '\n'
     << "model.gru_layers = " << c.model.gru_layers << '\n'
     << "model.gru_units = " << c.model.gru_units << '\n'
     << "model.encoder_dense = \"" << join(dense) << "\"\n"
     << "model.channel_hidden = " << c.model.channel_hidden << '\n'
     << "model.decoder_hidden = " << c.model.decoder_hidden << '\n'
     << "model.output_gain = " << num(c.model.output_gain) << '\n'
     << "train.epochs = " << c.train.epochs << '\n'
     << "train.batch_size = " << c.train.batch_size << '\n'
     << "train.learning_rate = " << num(c.train.learning_rate) << '\n'
     << "train.channel = " << (c.train.channel_enabled ? channel::to_string(c.train.channel.kind) : "none") << '\n'
     << "train.snr_db = " << num(c.train.channel.snr_db) << '\n'
     << "train.rician_k = " << num(c.train.channel.rician_k) << '\n'
     << "train.fading = " << fading_name(c.train.channel.fading) << '\n'
     << "train.plateau_patience = " << c.train.plateau_patience << '\n'
     << "train.plateau_tolerance = " << num(c.train.plateau_tolerance) << '\n'
     << "sweep.channels = \"" << join(kinds) << "\"\n"
     << "sweep.snr_grid = \"" << join(grid) << "\"\n"
     << "sweep.rician_k = " << num(c.rician_k) << '\n'
     << "sweep.fading = " << fading_name(c.fading) << '\n'
     << "baseline.polar_n = " << c.baseline.polar_n << '\n'
     << "baseline.polar_k = " << c.baseline.polar_k << '\n'
     << "baseline.list_size = " << c.baseline.list_size << '\n'
     << "baseline.design_snr_db = " << num(c.baseline.design_snr_db) << '\n'
     << "baseline.huffman_codebook = \"" << c.baseline.huffman_codebook << "\"\n";
  return os.str();
}

}  // namespace semcom::harness
