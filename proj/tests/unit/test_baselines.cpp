#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

using namespace semcom;
using namespace semcom::baselines;

namespace {

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution b(0.5);
  BitVector v(n);
  for (auto& x : v) x = b(rng) ? 1 : 0;
  return v;
}

// Kronecker power of F = [[1,0],[1,1]], built entry by entry: G[i][j] = 1 iff
// every set bit of j is also set in i.
std::vector<BitVector> generator_matrix(std::size_t n) {
  std::vector<BitVector> g(n, BitVector(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = ((i & j) == j) ? 1 : 0;
  return g;
}

BitVector multiply(const BitVector& u, const std::vector<BitVector>& g) {
  BitVector x(g.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i])
      for (std::size_t j = 0; j < x.size(); ++j) x[j] ^= g[i][j];
  return x;
}

std::vector<double> bpsk_llr(const BitVector& x, double snr_db, std::mt19937_64& rng) {
  const double sigma2 = std::pow(10.0, -snr_db / 10.0) / 2.0;  // real-valued noise per dimension
  std::normal_distribution<double> n(0.0, std::sqrt(sigma2));
  std::vector<double> llr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = (x[i] ? -1.0 : 1.0) + n(rng);
    llr[i] = 2.0 * y / sigma2;
  }
  return llr;
}

// Exhaustive maximum-likelihood decoding over all 2^k codewords.
BitVector ml_decode(const std::vector<double>& llr, const PolarConfig& cfg) {
  double best = -INFINITY;
  BitVector best_info;
  for (std::size_t m = 0; m < (std::size_t{1} << cfg.k); ++m) {
    BitVector info(cfg.k);
    for (std::size_t b = 0; b < cfg.k; ++b) info[b] = (m >> b) & 1u;
    const BitVector x = polar_encode(info, cfg);
    double corr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) corr += (x[i] ? -1.0 : 1.0) * llr[i];
    if (corr > best) {
      best = corr;
      best_info = info;
    }
  }
  return best_info;
}

double entropy_bits(const std::map<ctc::Token, std::uint64_t>& f) {
  double total = 0;
  for (const auto& [t, n] : f) total += double(n);
  double h = 0;
  for (const auto& [t, n] : f) {
    const double p = double(n) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

TEST_CASE("huffman two-token code") {
  const auto book = HuffmanCodebook::build({{0, 2}, {1, 1}});
  CHECK(book.codeword(0).size() == 1u);
  CHECK(book.codeword(1).size() == 1u);
  CHECK(book.encode(ctc::encode_text("aab")).size() == 3u);
}

TEST_CASE("huffman single token and errors") {
  const auto book = HuffmanCodebook::build({{5, 10}});
  CHECK(book.codeword(5).size() == 1u);
  const auto d = book.decode(book.encode({5, 5, 5}));
  CHECK(d.ok);
  CHECK(d.tokens == ctc::TextSequence{5, 5, 5});
  CHECK_FALSE(book.decode(BitVector{1}).ok);
  CHECK_THROWS_AS(HuffmanCodebook::build({}), InvalidArgument);
  CHECK_THROWS_AS(HuffmanCodebook::build({{1, 0}}), InvalidArgument);
}

TEST_CASE("huffman is prefix-free and round-trips") {
  const auto book = HuffmanCodebook::build(default_english_frequencies());
  CHECK(book.size() == 28u);
  for (ctc::Token a = 0; a < 28; ++a)
    for (ctc::Token b = 0; b < 28; ++b) {
      if (a == b) continue;
      const auto& ca = book.codeword(a);
      const auto& cb = book.codeword(b);
      if (ca.size() <= cb.size()) CHECK_FALSE(std::equal(ca.begin(), ca.end(), cb.begin()));
    }
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> tok(0, 27);
  for (int k = 0; k < 200; ++k) {
    ctc::TextSequence t(static_cast<std::size_t>(k));
    for (auto& x : t) x = tok(rng);
    const auto d = book.decode(book.encode(t));
    CHECK(d.ok);
    CHECK(d.tokens == t);
  }
}

TEST_CASE("huffman expected length is within one bit of entropy") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> tok(0, 27);
  std::map<ctc::Token, std::uint64_t> f;
  for (int i = 0; i < 1000; ++i) ++f[tok(rng) % 9 == 0 ? 27 : tok(rng) / 2];
  const auto book = HuffmanCodebook::build(f);
  double total = 0, bits = 0;
  for (const auto& [t, n] : f) {
    total += double(n);
    bits += double(n) * double(book.codeword(t).size());
  }
  const double h = entropy_bits(f);
  CHECK(bits / total >= h - 1e-12);
  CHECK(bits / total <= h + 1.0);
}

TEST_CASE("huffman canonical serialization") {
  const auto book = HuffmanCodebook::build(default_english_frequencies());
  const auto again = HuffmanCodebook::parse(book.to_string());
  for (ctc::Token t = 0; t < 28; ++t) CHECK(again.codeword(t) == book.codeword(t));
  CHECK(HuffmanCodebook::from_lengths(book.lengths()).to_string() == book.to_string());
  CHECK_THROWS_AS(HuffmanCodebook::parse("0:1 1:1 2:1"), InvalidArgument);
  CHECK_THROWS_AS(HuffmanCodebook::parse("garbage"), InvalidArgument);
}

TEST_CASE("binary32 serialization") {
  const auto word = [](double v) {
    const BitVector b = float_serialize(std::vector<double>{v});
    std::uint32_t w = 0;
    for (Bit x : b) w = (w << 1) | x;
    return w;
  };
  CHECK(word(1.0) == 0x3F800000u);
  CHECK(word(-0.0) == 0x80000000u);
  CHECK(word(-2.5) == 0xC0200000u);
  CHECK_THROWS_AS(float_deserialize(BitVector(31, 0)), InvalidArgument);
  CHECK_THROWS_AS(float_serialize(std::vector<double>{NAN}), InvalidArgument);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> bits;
  std::vector<double> values;
  while (values.size() < 10000) {
    const float f = std::bit_cast<float>(bits(rng));
    if (std::isfinite(f)) values.push_back(f);
  }
  const auto back = float_deserialize(float_serialize(values));
  REQUIRE(back.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    CHECK(std::memcmp(&back[i], &values[i], sizeof(double)) == 0);
}

TEST_CASE("polar transform") {
  CHECK(polar_transform(BitVector{0, 0}) == BitVector{0, 0});
  CHECK(polar_transform(BitVector{1, 0}) == BitVector{1, 0});
  CHECK(polar_transform(BitVector{0, 1}) == BitVector{1, 1});
  CHECK(polar_transform(BitVector{1, 1}) == BitVector{0, 1});
  std::mt19937_64 rng(4);
  const auto g = generator_matrix(8);
  for (int k = 0; k < 256; ++k) {
    BitVector u(8);
    for (std::size_t i = 0; i < 8; ++i) u[i] = (k >> i) & 1;
    CHECK(polar_transform(u) == multiply(u, g));
  }
  for (std::size_t n : {2u, 4u, 16u, 32u, 64u})
    for (int k = 0; k < 20; ++k) {
      const BitVector u = random_bits(n, rng);
      CHECK(polar_transform(polar_transform(u)) == u);
    }
  CHECK_THROWS_AS(polar_transform(BitVector(6, 0)), InvalidArgument);
}

TEST_CASE("polar construction") {
  const auto z = bhattacharyya(4, 2.0);
  const double z0 = std::exp(-std::pow(10.0, 0.2));
  const double minus = 2 * z0 - z0 * z0, plus = z0 * z0;
  CHECK(z[0] == doctest::Approx(2 * minus - minus * minus));
  CHECK(z[1] == doctest::Approx(2 * plus - plus * plus));
  CHECK(z[2] == doctest::Approx(minus * minus));
  CHECK(z[3] == doctest::Approx(plus * plus));

  const auto cfg = make_polar_config(512, 256, 4);
  CHECK(std::count(cfg.frozen.begin(), cfg.frozen.end(), true) == 256);
  CHECK(cfg.frozen[0]);      // the worst channel
  CHECK_FALSE(cfg.frozen[511]);  // the best channel
  CHECK(cfg.info_indices().size() == 256u);

  const auto zero = polar_encode(BitVector(256, 0), cfg);
  CHECK(std::count(zero.begin(), zero.end(), 1) == 0);
  CHECK_THROWS_AS(polar_encode(BitVector(255, 0), cfg), InvalidArgument);
  CHECK_THROWS_AS(make_polar_config(500, 250, 4), InvalidArgument);
}

TEST_CASE("noiseless polar round trip") {
  const auto cfg = make_polar_config(512, 256, 4);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const BitVector info = random_bits(256, rng);
    const BitVector x = polar_encode(info, cfg);
    std::vector<double> llr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) llr[i] = x[i] ? -1e6 : 1e6;
    CHECK(polar_scl_decode(llr, cfg) == info);
    CHECK(polar_sc_decode(llr, cfg) == info);
  }
}

TEST_CASE("list decoding with a full list is maximum likelihood") {
  const auto cfg = make_polar_config(8, 4, 16);
  std::mt19937_64 rng(6);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const BitVector info = random_bits(4, rng);
    const auto llr = bpsk_llr(polar_encode(info, cfg), 1.0, rng);
    mismatches += polar_scl_decode(llr, cfg) != ml_decode(llr, cfg);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("list size one equals successive cancellation") {
  auto cfg = make_polar_config(64, 32, 1);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const auto llr = bpsk_llr(polar_encode(random_bits(32, rng), cfg), 0.0, rng);
    CHECK(polar_scl_decode(llr, cfg) == polar_sc_decode(llr, cfg));
  }
}

TEST_CASE("larger lists do not raise the block error rate") {
  auto l1 = make_polar_config(8, 4, 1);
  auto l4 = make_polar_config(8, 4, 4);
  std::mt19937_64 rng(8);
  int err1 = 0, err4 = 0;
  for (int k = 0; k < 100000; ++k) {
    const BitVector info = random_bits(4, rng);
    const auto llr = bpsk_llr(polar_encode(info, l1), 3.0, rng);
    err1 += polar_scl_decode(llr, l1) != info;
    err4 += polar_scl_decode(llr, l4) != info;
  }
  INFO("list1 " << err1 << " list4 " << err4);
  CHECK(err4 <= err1);
  CHECK(err1 > 0);
}

TEST_CASE("64-QAM Gray mapping") {
  const auto x = qam64_map(BitVector{0, 0, 0, 0, 0, 0});
  CHECK(x[0].real() == doctest::Approx(-7 / std::sqrt(42.0)));
  CHECK(x[0].imag() == doctest::Approx(-7 / std::sqrt(42.0)));
  const auto corner = qam64_map(BitVector{1, 0, 0, 0, 0, 1})[0];
  CHECK(corner.real() == doctest::Approx(7 / std::sqrt(42.0)));
  CHECK(corner.imag() == doctest::Approx(-5 / std::sqrt(42.0)));

  BitVector all;
  for (unsigned s = 0; s < 64; ++s)
    for (int b = 5; b >= 0; --b) all.push_back((s >> b) & 1u);
  const auto pts = qam64_map(all);
  double energy = 0;
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : pts) {
    energy += std::norm(p);
    distinct.emplace(p.real(), p.imag());
  }
  CHECK(energy / 64.0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distinct.size() == 64u);

  for (unsigned level = 0; level + 1 < 8; ++level)
    CHECK(std::popcount(qam64_axis_label(level) ^ qam64_axis_label(level + 1)) == 1);
  // neighbours in the plane differ in exactly one of the six bits
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b) {
      const double d = std::abs(pts[a] - pts[b]) * std::sqrt(42.0);
      if (std::abs(d - 2.0) < 1e-9) CHECK(std::popcount(a ^ b) == 1);
    }
  CHECK_THROWS_AS(qam64_map(BitVector(5, 0)), InvalidArgument);
}

TEST_CASE("64-QAM LLR signs at high SNR") {
  std::mt19937_64 rng(9);
  const BitVector bits = random_bits(100002, rng);
  channel::ChannelConfig ch;
  ch.snr_db = 30;
  channel::Rng crng(10);
  const auto x = qam64_map(bits);
  const auto state = channel::draw_state(x.size(), ch, crng);
  const auto y = channel::equalize(channel::apply_channel(x, state), state);
  const auto llr = qam64_llr(y, state);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) agree += (llr[i] < 0) == (bits[i] == 1);
  CHECK(double(agree) / double(bits.size()) >= 0.999);

  // noiseless symbol: every LLR points the right way with magnitude scaled by 1/sigma2
  const auto l = qam64_llr(qam64_map(BitVector{0, 1, 1, 1, 0, 0}), {1, 0}, 0.5);
  const BitVector expect{0, 1, 1, 1, 0, 0};
  for (std::size_t i = 0; i < 6; ++i) CHECK((l[i] < 0) == (expect[i] == 1));
}

TEST_CASE("text transceiver") {
  const auto book = HuffmanCodebook::build(default_english_frequencies());
  const auto polar = make_polar_config(512, 256, 4);
  channel::ChannelConfig ch;
  ch.snr_db = 200;
  const std::string sentence = "he concluded that school had nothing to offer him";
  channel::Rng rng(11);
  const auto r = run_text_transceiver(sentence, book, polar, ch, rng);
  CHECK(r.text == sentence);
  CHECK_FALSE(r.decode_error);
  CHECK(r.symbols >= 30u);
  CHECK(r.symbols <= 120u);

  ch.kind = channel::ChannelKind::rician;
  ch.snr_db = 0;
  channel::Rng a(12), b(12);
  const auto ra = run_text_transceiver(sentence, book, polar, ch, a);
  const auto rb = run_text_transceiver(sentence, book, polar, ch, b);
  CHECK(ra.text == rb.text);
  CHECK(ra.decode_error == rb.decode_error);
}

TEST_CASE("feature transceiver") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nn::Tensor p({25, 29});
  for (std::size_t r = 0; r < 25; ++r) {
    double s = 0;
    for (std::size_t k = 0; k < 29; ++k) s += (p.at(r, k) = u(gen));
    for (std::size_t k = 0; k < 29; ++k) p.at(r, k) /= s;
  }
  const auto polar = make_polar_config(512, 256, 4);
  channel::ChannelConfig ch;
  ch.snr_db = 200;
  channel::Rng rng(14);
  const auto r = run_feature_transceiver(p, polar, ch, rng);
  CHECK(r.symbols >= 4176u);
  CHECK(r.symbols <= 9396u);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(r.features[i] == static_cast<double>(static_cast<float>(p[i])));
  CHECK(r.text == ctc::decode_text(ctc::greedy_decode(p)));
}
