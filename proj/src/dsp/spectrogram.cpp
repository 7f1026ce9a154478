#include <algorithm>
#include <cmath>

#include "semcom/dsp.hpp"
#include "semcom/errors.hpp"

namespace semcom::dsp {

void SpeechSamples::validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  for (double v : samples)
    if (!(v >= -1.0 && v < 1.0)) throw InvalidArgument("sample amplitude outside [-1, 1)");
}

std::size_t FrontendConfig::frame_samples() const {
  return static_cast<std::size_t>(std::lround(frame_len_ms * sample_rate / 1000.0));
}

std::size_t FrontendConfig::hop_samples() const {
  return static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

std::size_t FrontendConfig::frame_count(std::size_t samples) const {
  const std::size_t len = frame_samples();
  if (samples < len) return 0;
  return (samples - len) / hop_samples() + 1;
}

Spectrogram log_magnitude(const SpeechSamples& m, const FrontendConfig& cfg) {
  const std::size_t frame_len = cfg.frame_samples();
  const std::size_t hop = cfg.hop_samples();
  if (frame_len == 0 || hop == 0) throw InvalidArgument("frame and hop must span at least one sample");
  if (cfg.fft_size < frame_len || (cfg.fft_size & (cfg.fft_size - 1)) != 0)
    throw InvalidArgument("fft_size must be a power of two no smaller than the frame");
  if (m.sample_rate != cfg.sample_rate)
    throw InvalidArgument("spectrogram expects " + std::to_string(cfg.sample_rate) +
                          " Hz input, got " + std::to_string(m.sample_rate));
  if (m.samples.size() < frame_len)
    throw TooShortError("utterance of " + std::to_string(m.samples.size()) +
                        " samples is shorter than one frame (" + std::to_string(frame_len) + ")");

  Spectrogram s;
  s.frames = cfg.frame_count(m.samples.size());
  s.bins = cfg.bins();
  s.frame_len_ms = cfg.frame_len_ms;
  s.hop_ms = cfg.hop_ms;
  s.fft_size = cfg.fft_size;
  s.values.assign(s.frames * s.bins, 0.0);

  const std::vector<double> window = hamming(frame_len);
  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (std::size_t n = 0; n < s.frames; ++n) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (std::size_t i = 0; i < frame_len; ++i) buf[i] = m.samples[n * hop + i] * window[i];
    fft_inplace(buf);
    for (std::size_t f = 0; f < s.bins; ++f)
      s.values[n * s.bins + f] = std::log(std::max(std::abs(buf[f]), cfg.log_floor));
  }
  return s;
}

void normalize_bins(Spectrogram& s) {
  for (std::size_t f = 0; f < s.bins; ++f) {
    double mean = 0.0;
    for (std::size_t n = 0; n < s.frames; ++n) mean += s.values[n * s.bins + f];
    mean /= static_cast<double>(s.frames);
    double var = 0.0;
    for (std::size_t n = 0; n < s.frames; ++n) {
      const double d = s.values[n * s.bins + f] - mean;
      var += d * d;
    }
    var /= static_cast<double>(s.frames);
    const double inv = var > 1e-20 ? 1.0 / std::sqrt(var) : 0.0;
    for (std::size_t n = 0; n < s.frames; ++n) {
      double& v = s.values[n * s.bins + f];
      v = (v - mean) * inv;
    }
  }
}

Spectrogram make_spectrogram(const SpeechSamples& m, const FrontendConfig& cfg) {
  Spectrogram s = log_magnitude(m, cfg);
  normalize_bins(s);
  return s;
}

}  // namespace semcom::dsp
