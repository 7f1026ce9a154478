#include <cmath>

#include "semcom/dsp.hpp"
#include "semcom/errors.hpp"

namespace semcom::dsp {

SpeechSamples resample(const SpeechSamples& m, int target_rate) {
  if (target_rate <= 0) throw InvalidArgument("target rate must be positive");
  if (m.sample_rate <= 0) throw InvalidArgument("source rate must be positive");
  if (target_rate == m.sample_rate) return m;

  SpeechSamples out;
  out.sample_rate = target_rate;
  const std::size_t q = m.samples.size();
  const auto len = static_cast<std::size_t>(
      std::llround(static_cast<double>(q) * target_rate / static_cast<double>(m.sample_rate)));
  out.samples.resize(len);
  if (q == 0) return out;
  const double step = static_cast<double>(m.sample_rate) / target_rate;
  for (std::size_t i = 0; i < len; ++i) {
    const double pos = static_cast<double>(i) * step;
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= q) {
      out.samples[i] = m.samples[q - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    out.samples[i] = (1.0 - frac) * m.samples[lo] + frac * m.samples[lo + 1];
  }
  return out;
}

}  // namespace semcom::dsp
