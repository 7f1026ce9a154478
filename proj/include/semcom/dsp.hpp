#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace semcom::dsp {

/// Mono speech waveform with amplitudes in [-1, 1).
struct SpeechSamples {
  std::vector<double> samples;
  int sample_rate = 16000;

  /// Throws InvalidArgument when an amplitude is out of range or the rate is not positive.
  void validate() const;
};

/// Framing and transform settings. Every field is exposed in the experiment config.
struct FrontendConfig {
  int sample_rate = 16000;
  double frame_len_ms = 20.0;
  double hop_ms = 10.0;
  std::size_t fft_size = 512;
  double log_floor = 1e-10;

  std::size_t frame_samples() const;
  std::size_t hop_samples() const;
  std::size_t bins() const { return fft_size / 2 + 1; }
  /// Number of frames for an utterance of `samples` samples; zero if shorter than a frame.
  std::size_t frame_count(std::size_t samples) const;
};

/// Normalized log-magnitude spectrogram, frames x bins, row-major.
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;
  double frame_len_ms = 0.0;
  double hop_ms = 0.0;
  std::size_t fft_size = 0;

  double at(std::size_t frame, std::size_t bin) const { return values[frame * bins + bin]; }
};

/// In-place radix-2 DFT without normalization. Length must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x);

/// Symmetric Hamming window 0.54 - 0.46 cos(2 pi n / (len - 1)).
std::vector<double> hamming(std::size_t len);

/// Hamming-windowed, zero-padded FFT magnitudes with log(max(|X|, floor)); no normalization.
Spectrogram log_magnitude(const SpeechSamples& m, const FrontendConfig& cfg);

/// Per-bin zero-mean/unit-variance over frames. Bins with zero variance become zero.
void normalize_bins(Spectrogram& s);

/// log_magnitude followed by normalize_bins.
Spectrogram make_spectrogram(const SpeechSamples& m, const FrontendConfig& cfg);

/// Linear-interpolation resampler; output length round(Q * target / source).
SpeechSamples resample(const SpeechSamples& m, int target_rate);

class WavError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// RIFF/WAVE, PCM 16-bit little-endian mono. Amplitudes are scaled by 1/32768.
SpeechSamples read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const SpeechSamples& m);

}  // namespace semcom::dsp
