#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace semcom::channel {

using Symbol = std::complex<double>;
using SymbolVector = std::vector<Symbol>;
using Rng = std::mt19937_64;

enum class ChannelKind { awgn, rayleigh, rician };
enum class FadingMode { block, per_symbol };

ChannelKind parse_channel_kind(const std::string& name);
std::string to_string(ChannelKind kind);

struct ChannelConfig {
  ChannelKind kind = ChannelKind::awgn;
  double snr_db = 10.0;
  double rician_k = 4.0;
  FadingMode fading = FadingMode::block;
};

/// One draw of the channel: fading coefficient(s) and the additive noise.
/// `h` holds one entry under block fading and one per symbol otherwise.
struct ChannelState {
  ChannelKind kind = ChannelKind::awgn;
  double snr_db = 0.0;
  double rician_k = 0.0;
  double sigma2 = 0.0;
  std::vector<Symbol> h;
  SymbolVector noise;

  Symbol gain(std::size_t i) const { return h.size() == 1 ? h[0] : h[i]; }
};

struct Transmission {
  SymbolVector y;
  ChannelState state;
};

/// sigma^2 per complex symbol for unit signal power.
double noise_variance(double snr_db);
double mean_power(const SymbolVector& x);

/// Draws h and w for n symbols. awgn: h = 1; rayleigh: h ~ CN(0,1);
/// rician: h = sqrt(K/(K+1)) + sqrt(1/(K+1)) CN(0,1).
ChannelState draw_state(std::size_t n, const ChannelConfig& cfg, Rng& rng);

/// y = h x + w using an already drawn state.
SymbolVector apply_channel(const SymbolVector& x, const ChannelState& state);

/// Draws a state and applies it. x must have unit mean power (within 1e-3).
Transmission transmit(const SymbolVector& x, const ChannelConfig& cfg, Rng& rng);

/// Zero-forcing with known h: y conj(h) / |h|^2.
SymbolVector equalize(const SymbolVector& y, Symbol h);
SymbolVector equalize(const SymbolVector& y, const ChannelState& state);

/// 10 log10(||h x||^2 / ||y - h x||^2); +infinity for a zero residual.
double estimate_snr(const SymbolVector& x, const SymbolVector& y, Symbol h);

/// splitmix64 finalizer, used to derive independent per-worker seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace semcom::channel
