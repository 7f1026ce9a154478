#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semcom/channel.hpp"
#include "semcom/errors.hpp"

using namespace semcom;
using namespace semcom::channel;

namespace {

// Unit-modulus symbols with random phase: exact unit power.
SymbolVector unit_symbols(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  SymbolVector x(n);
  for (auto& s : x) s = std::polar(1.0, u(rng));
  return x;
}

}  // namespace

TEST_CASE("awgn at 200 dB is transparent") {
  Rng rng(1);
  SymbolVector x = unit_symbols(1000, rng);
  Transmission t = transmit(x, {ChannelKind::awgn, 200.0}, rng);
  CHECK(t.state.h.size() == 1);
  CHECK(t.state.h[0] == Symbol(1.0, 0.0));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(t.y[i] - x[i]) <= 1e-8);
}

TEST_CASE("awgn calibration at 8 dB over 1e6 symbols") {
  Rng rng(2);
  SymbolVector x = unit_symbols(1'000'000, rng);
  Transmission t = transmit(x, {ChannelKind::awgn, 8.0}, rng);
  CHECK(std::abs(estimate_snr(x, t.y, t.state.h[0]) - 8.0) <= 0.1);
}

TEST_CASE("rayleigh fading statistics") {
  Rng rng(3);
  const std::size_t n = 100'000;
  std::vector<double> mags;
  double power = 0.0;
  ChannelConfig cfg{ChannelKind::rayleigh, 10.0};
  for (std::size_t i = 0; i < n; ++i) {
    Symbol h = draw_state(0, cfg, rng).h[0];
    power += std::norm(h);
    mags.push_back(std::abs(h));
  }
  CHECK(std::abs(power / double(n) - 1.0) <= 0.01);

  // Kolmogorov-Smirnov against F(r) = 1 - exp(-r^2), alpha = 0.01.
  std::sort(mags.begin(), mags.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = 1.0 - std::exp(-mags[i] * mags[i]);
    d = std::max({d, f - double(i) / double(n), double(i + 1) / double(n) - f});
  }
  CHECK(d < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("rician fading has unit mean power and degenerates for large K") {
  Rng rng(4);
  ChannelConfig cfg{ChannelKind::rician, 10.0, 4.0};
  double power = 0.0;
  for (int i = 0; i < 100'000; ++i) power += std::norm(draw_state(0, cfg, rng).h[0]);
  CHECK(std::abs(power / 1e5 - 1.0) <= 0.01);

  cfg.rician_k = 1e6;
  for (int i = 0; i < 100; ++i) {
    Symbol h = draw_state(0, cfg, rng).h[0];
    CHECK(std::abs(h - std::sqrt(cfg.rician_k / (cfg.rician_k + 1.0))) < 1e-2);
  }
}

TEST_CASE("per-symbol fading draws one coefficient per symbol") {
  Rng rng(5);
  ChannelConfig cfg{ChannelKind::rayleigh, 10.0, 4.0, FadingMode::per_symbol};
  SymbolVector x = unit_symbols(64, rng);
  Transmission t = transmit(x, cfg, rng);
  CHECK(t.state.h.size() == 64);
  ChannelState noiseless = t.state;
  std::fill(noiseless.noise.begin(), noiseless.noise.end(), Symbol{});
  SymbolVector back = equalize(apply_channel(x, noiseless), noiseless);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-12);
}

TEST_CASE("transmit is reproducible from the seed") {
  Rng a(77), b(77);
  Rng src(6);
  SymbolVector x = unit_symbols(500, src);
  Transmission ta = transmit(x, {ChannelKind::rician, 3.0}, a);
  Transmission tb = transmit(x, {ChannelKind::rician, 3.0}, b);
  CHECK(ta.y == tb.y);
  CHECK(ta.state.h == tb.state.h);
}

TEST_CASE("transmit rejects non-normalized input") {
  Rng rng(7);
  SymbolVector x(10, Symbol(2.0, 0.0));
  CHECK_THROWS_AS(transmit(x, {}, rng), PreconditionError);
}

TEST_CASE("equalize") {
  Rng rng(8);
  SymbolVector x = unit_symbols(100, rng);
  const Symbol h(0.3, -1.1);
  SymbolVector hx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) hx[i] = h * x[i];
  SymbolVector back = equalize(hx, h);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-15);
  CHECK(equalize(x, Symbol(1.0, 0.0)) == x);
  CHECK_THROWS_AS(equalize(x, Symbol(1e-13, 0.0)), NearSingularChannelError);
}

TEST_CASE("equalized noise variance is sigma^2 / |h|^2") {
  Rng rng(9);
  const std::size_t n = 1'000'000;
  const Symbol h(0.4, 0.2);
  const double sigma2 = noise_variance(5.0);
  std::normal_distribution<double> nd(0.0, std::sqrt(sigma2 / 2.0));
  SymbolVector y(n);
  for (auto& v : y) v = Symbol(nd(rng), nd(rng));  // x = 0
  double var = mean_power(equalize(y, h));
  CHECK(std::abs(var / (sigma2 / std::norm(h)) - 1.0) <= 0.02);
}

TEST_CASE("estimate_snr") {
  Rng rng(10);
  SymbolVector x = unit_symbols(1'000'000, rng);
  const Symbol h(0.7, 0.7);
  SymbolVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = h * x[i];
  CHECK(std::isinf(estimate_snr(x, y, h)));

  // noise with exactly sigma^2 = 0.1 against unit signal power
  std::normal_distribution<double> nd;
  SymbolVector w(x.size());
  double p = 0.0;
  for (auto& v : w) {
    v = Symbol(nd(rng), nd(rng));
    p += std::norm(v);
  }
  const double scale = std::sqrt(0.1 * std::norm(h) / (p / double(w.size())));
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = h * x[i] + scale * w[i];
  CHECK(estimate_snr(x, y, h) == doctest::Approx(10.0).epsilon(1e-9));

  for (double snr : {-12.0, 0.0, 8.0, 18.0}) {
    Transmission t = transmit(x, {ChannelKind::awgn, snr}, rng);
    CHECK(std::abs(estimate_snr(x, t.y, t.state.h[0]) - snr) <= 0.1);
  }
}

TEST_CASE("noise is white: lag-1 autocorrelation") {
  Rng rng(11);
  const std::size_t n = 1'000'000;
  ChannelState st = draw_state(n, {ChannelKind::awgn, 0.0}, rng);
  Symbol acc{};
  double p = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += st.noise[i + 1] * std::conj(st.noise[i]);
    p += std::norm(st.noise[i]);
  }
  CHECK(std::abs(acc) / p < 0.01);
}

TEST_CASE("seed mixing gives distinct streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 9) == mix_seed(5, 9));
}
