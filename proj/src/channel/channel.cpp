#include "semcom/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semcom/errors.hpp"

namespace semcom::channel {

ChannelKind parse_channel_kind(const std::string& name) {
  if (name == "awgn") return ChannelKind::awgn;
  if (name == "rayleigh") return ChannelKind::rayleigh;
  if (name == "rician") return ChannelKind::rician;
  throw InvalidArgument("unknown channel kind '" + name + "'");
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::awgn: return "awgn";
    case ChannelKind::rayleigh: return "rayleigh";
    case ChannelKind::rician: return "rician";
  }
  return "?";
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double mean_power(const SymbolVector& x) {
  if (x.empty()) return 0.0;
  double p = 0.0;
  for (const auto& s : x) p += std::norm(s);
  return p / static_cast<double>(x.size());
}

namespace {

Symbol draw_fading(const ChannelConfig& cfg, Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  switch (cfg.kind) {
    case ChannelKind::awgn: return {1.0, 0.0};
    case ChannelKind::rayleigh: return {nd(rng), nd(rng)};
    case ChannelKind::rician: {
      if (cfg.rician_k < 0) throw InvalidArgument("Rician K-factor must be nonnegative");
      const double los = std::sqrt(cfg.rician_k / (cfg.rician_k + 1.0));
      const double scatter = std::sqrt(1.0 / (cfg.rician_k + 1.0));
      const double re = nd(rng), im = nd(rng);
      return {los + scatter * re, scatter * im};
    }
  }
  return {1.0, 0.0};
}

}  // namespace

ChannelState draw_state(std::size_t n, const ChannelConfig& cfg, Rng& rng) {
  ChannelState st;
  st.kind = cfg.kind;
  st.snr_db = cfg.snr_db;
  st.rician_k = cfg.rician_k;
  st.sigma2 = noise_variance(cfg.snr_db);
  const std::size_t draws = cfg.fading == FadingMode::block ? 1 : std::max<std::size_t>(n, 1);
  st.h.reserve(draws);
  for (std::size_t i = 0; i < draws; ++i) st.h.push_back(draw_fading(cfg, rng));
  std::normal_distribution<double> nd(0.0, std::sqrt(st.sigma2 / 2.0));
  st.noise.resize(n);
  for (auto& w : st.noise) w = {nd(rng), nd(rng)};
  return st;
}

SymbolVector apply_channel(const SymbolVector& x, const ChannelState& state) {
  if (state.noise.size() != x.size())
    throw InvalidArgument("channel state drawn for a different symbol count");
  SymbolVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = state.gain(i) * x[i] + state.noise[i];
  return y;
}

Transmission transmit(const SymbolVector& x, const ChannelConfig& cfg, Rng& rng) {
  const double p = mean_power(x);
  if (std::abs(p - 1.0) > 1e-3)
    throw PreconditionError("transmit expects unit-power symbols, got mean power " +
                            std::to_string(p));
  Transmission t;
  t.state = draw_state(x.size(), cfg, rng);
  t.y = apply_channel(x, t.state);
  return t;
}

SymbolVector equalize(const SymbolVector& y, Symbol h) {
  const double mag2 = std::norm(h);
  if (std::sqrt(mag2) <= 1e-12) throw NearSingularChannelError("|h| <= 1e-12");
  SymbolVector out(y.size());
  const Symbol inv = std::conj(h) / mag2;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] * inv;
  return out;
}

SymbolVector equalize(const SymbolVector& y, const ChannelState& state) {
  if (state.h.size() == 1) return equalize(y, state.h[0]);
  if (state.h.size() != y.size()) throw InvalidArgument("per-symbol fading length mismatch");
  SymbolVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double mag2 = std::norm(state.h[i]);
    if (std::sqrt(mag2) <= 1e-12) throw NearSingularChannelError("|h| <= 1e-12");
    out[i] = y[i] * std::conj(state.h[i]) / mag2;
  }
  return out;
}

double estimate_snr(const SymbolVector& x, const SymbolVector& y, Symbol h) {
  if (x.size() != y.size()) throw InvalidArgument("estimate_snr length mismatch");
  double signal = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    signal += std::norm(h * x[i]);
    residual += std::norm(y[i] - h * x[i]);
  }
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / residual);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace semcom::channel
