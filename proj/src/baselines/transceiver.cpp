#include <algorithm>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

namespace semcom::baselines {

PhyResult run_phy(std::span<const Bit> bits, const PolarConfig& polar,
                  const channel::ChannelConfig& ch, channel::Rng& rng) {
  polar.validate();
  PhyResult r;
  if (bits.empty()) return r;
  const std::size_t blocks = (bits.size() + polar.k - 1) / polar.k;

  BitVector coded;
  coded.reserve(blocks * polar.n + 6);
  BitVector info(polar.k);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::fill(info.begin(), info.end(), Bit{0});
    const std::size_t start = b * polar.k;
    const std::size_t len = std::min(polar.k, bits.size() - start);
    std::copy_n(bits.begin() + static_cast<std::ptrdiff_t>(start), len, info.begin());
    const BitVector cw = polar_encode(info, polar);
    coded.insert(coded.end(), cw.begin(), cw.end());
  }
  const std::size_t coded_bits = coded.size();
  coded.resize((coded_bits + 5) / 6 * 6, 0);

  const channel::SymbolVector x = qam64_map(coded);
  r.symbols = x.size();
  const channel::ChannelState state = channel::draw_state(x.size(), ch, rng);
  const channel::SymbolVector y = channel::equalize(channel::apply_channel(x, state), state);
  const std::vector<double> llr = qam64_llr(y, state);

  r.bits.reserve(blocks * polar.k);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::span<const double> block(llr.data() + b * polar.n, polar.n);
    const BitVector decoded = polar_scl_decode(block, polar);
    r.bits.insert(r.bits.end(), decoded.begin(), decoded.end());
  }
  r.bits.resize(bits.size());
  return r;
}

TextResult run_text_transceiver(std::string_view text, const HuffmanCodebook& book,
                                const PolarConfig& polar, const channel::ChannelConfig& ch,
                                channel::Rng& rng) {
  const BitVector bits = book.encode(ctc::encode_text(ctc::normalize_transcript(text)));
  const PhyResult phy = run_phy(bits, polar, ch, rng);
  const auto decoded = book.decode(phy.bits);
  return {ctc::decode_text(decoded.tokens), phy.symbols, !decoded.ok};
}

FeatureResult run_feature_transceiver(const nn::Tensor& features, const PolarConfig& polar,
                                      const channel::ChannelConfig& ch, channel::Rng& rng) {
  if (features.rank() != 2 || features.dim(1) != static_cast<std::size_t>(ctc::kAlphabetSize))
    throw InvalidArgument("feature transceiver expects [L,29] features");
  const BitVector bits = float_serialize(features.data());
  const PhyResult phy = run_phy(bits, polar, ch, rng);
  FeatureResult r;
  r.features = nn::Tensor(features.shape(), float_deserialize(phy.bits));
  r.text = ctc::decode_text(ctc::greedy_decode(r.features));
  r.symbols = phy.symbols;
  return r;
}

}  // namespace semcom::baselines
