#include <array>
#include <cmath>
#include <limits>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

namespace semcom::baselines {
namespace {

const double kScale = 1.0 / std::sqrt(42.0);

double amplitude(unsigned level) { return (2.0 * level - 7.0) * kScale; }

// Inverse of the per-axis Gray labeling.
const std::array<unsigned, 8>& level_of_label() {
  static const std::array<unsigned, 8> table = [] {
    std::array<unsigned, 8> t{};
    for (unsigned level = 0; level < 8; ++level) t[qam64_axis_label(level)] = level;
    return t;
  }();
  return table;
}

// Max-log LLRs of the three bits on one axis, unscaled: d(b=1) - d(b=0).
void axis_llr(double z, double scale, double* out) {
  for (unsigned bit = 0; bit < 3; ++bit) {
    double d0 = std::numeric_limits<double>::infinity(), d1 = d0;
    for (unsigned level = 0; level < 8; ++level) {
      const double d = (z - amplitude(level)) * (z - amplitude(level));
      if ((qam64_axis_label(level) >> (2 - bit)) & 1u)
        d1 = std::min(d1, d);
      else
        d0 = std::min(d0, d);
    }
    out[bit] = (d1 - d0) * scale;
  }
}

}  // namespace

unsigned qam64_axis_label(unsigned level) {
  if (level > 7) throw InvalidArgument("qam64: level out of range");
  return level ^ (level >> 1);
}

channel::SymbolVector qam64_map(std::span<const Bit> bits) {
  if (bits.size() % 6 != 0) throw InvalidArgument("qam64: bit count must be a multiple of 6");
  channel::SymbolVector x(bits.size() / 6);
  const auto& level = level_of_label();
  for (std::size_t s = 0; s < x.size(); ++s) {
    const Bit* b = bits.data() + 6 * s;
    const unsigned li = ((b[0] & 1u) << 2) | ((b[1] & 1u) << 1) | (b[2] & 1u);
    const unsigned lq = ((b[3] & 1u) << 2) | ((b[4] & 1u) << 1) | (b[5] & 1u);
    x[s] = {amplitude(level[li]), amplitude(level[lq])};
  }
  return x;
}

std::vector<double> qam64_llr(const channel::SymbolVector& y_eq, const channel::ChannelState& state) {
  if (state.h.size() != 1 && state.h.size() != y_eq.size())
    throw InvalidArgument("qam64_llr: channel state does not match the symbol count");
  std::vector<double> llr(6 * y_eq.size());
  for (std::size_t s = 0; s < y_eq.size(); ++s) {
    const double scale = std::norm(state.gain(s)) / state.sigma2;
    axis_llr(y_eq[s].real(), scale, &llr[6 * s]);
    axis_llr(y_eq[s].imag(), scale, &llr[6 * s + 3]);
  }
  return llr;
}

std::vector<double> qam64_llr(const channel::SymbolVector& y_eq, channel::Symbol h, double sigma2) {
  if (!(sigma2 > 0)) throw InvalidArgument("qam64_llr: noise variance must be positive");
  channel::ChannelState state;
  state.h = {h};
  state.sigma2 = sigma2;
  return qam64_llr(y_eq, state);
}

}  // namespace semcom::baselines
