#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/ctc.hpp"
#include "semcom/tensor.hpp"

namespace semcom::baselines {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

// ---- Huffman text coding ----------------------------------------------------

/// Canonical prefix code over CTC tokens. Codewords are assigned in order of
/// (length, token), so the (token, length) list is enough to rebuild it.
class HuffmanCodebook {
public:
  /// Builds an optimal code. Ties between equal weights go to the subtree
  /// holding the smallest token. A single token gets a 1-bit code.
  static HuffmanCodebook build(const std::map<ctc::Token, std::uint64_t>& frequencies);
  static HuffmanCodebook from_lengths(const std::vector<std::pair<ctc::Token, std::size_t>>& lengths);

  std::vector<std::pair<ctc::Token, std::size_t>> lengths() const;
  const BitVector& codeword(ctc::Token t) const;
  bool contains(ctc::Token t) const { return codes_.count(t) != 0; }
  std::size_t size() const { return codes_.size(); }

  BitVector encode(const ctc::TextSequence& text) const;

  struct Decoded {
    ctc::TextSequence tokens;
    bool ok = true;  // false if the stream ended mid-codeword or hit an unused pattern
  };
  Decoded decode(std::span<const Bit> bits) const;

  /// Serialized as "token:length" pairs separated by spaces.
  std::string to_string() const;
  static HuffmanCodebook parse(std::string_view text);

private:
  std::map<ctc::Token, BitVector> codes_;
  std::map<BitVector, ctc::Token> lookup_;
};

/// Character counts of `text` over the 28 non-blank tokens, each plus one so
/// that every token stays encodable.
std::map<ctc::Token, std::uint64_t> token_frequencies(std::string_view text);
/// Approximate English character frequencies (per 10^5 characters).
std::map<ctc::Token, std::uint64_t> default_english_frequencies();

// ---- IEEE 754 binary32 -------------------------------------------------------

/// Each value rounded to binary32, most significant bit first.
BitVector float_serialize(std::span<const double> values);
std::vector<double> float_deserialize(std::span<const Bit> bits);

// ---- Polar codes ---------------------------------------------------------------

struct PolarConfig {
  std::size_t n = 512;  // block length, power of two
  std::size_t k = 256;  // information bits
  std::size_t list_size = 4;
  double design_snr_db = 2.0;
  std::vector<bool> frozen;  // size n, exactly n - k entries set

  std::vector<std::size_t> info_indices() const;
  void validate() const;
};

/// Bhattacharyya parameters of the n synthetic channels for a binary-input
/// AWGN channel at the design SNR (Es/N0), in natural index order.
std::vector<double> bhattacharyya(std::size_t n, double design_snr_db);

/// Freezes the n - k least reliable indices.
PolarConfig make_polar_config(std::size_t n, std::size_t k, std::size_t list_size,
                              double design_snr_db = 2.0);

/// x = u F^{(x)log2 n} over GF(2), F = [[1,0],[1,1]].
BitVector polar_transform(std::span<const Bit> u);
BitVector polar_encode(std::span<const Bit> info, const PolarConfig& cfg);

/// Successive cancellation. LLRs are ln P(0)/P(1).
BitVector polar_sc_decode(std::span<const double> llr, const PolarConfig& cfg);
/// Successive cancellation list without CRC; returns the info bits of the
/// most likely surviving path.
BitVector polar_scl_decode(std::span<const double> llr, const PolarConfig& cfg);

// ---- 64-QAM --------------------------------------------------------------------

/// Gray code of amplitude level i (0..7 for -7..7) on one axis.
unsigned qam64_axis_label(unsigned level);
/// Six bits per symbol: the first three select I, the last three Q.
channel::SymbolVector qam64_map(std::span<const Bit> bits);
/// Max-log LLRs for equalized symbols, scaled by |h|^2 / sigma2 per symbol.
std::vector<double> qam64_llr(const channel::SymbolVector& y_eq, const channel::ChannelState& state);
std::vector<double> qam64_llr(const channel::SymbolVector& y_eq, channel::Symbol h, double sigma2);

// ---- Assembled transceivers ----------------------------------------------------

struct PhyResult {
  BitVector bits;           // same length as the input
  std::size_t symbols = 0;  // complex symbols on the air
};

/// Polar blocks, zero-padded, then 64-QAM through one channel realization.
PhyResult run_phy(std::span<const Bit> bits, const PolarConfig& polar,
                  const channel::ChannelConfig& ch, channel::Rng& rng);

struct TextResult {
  std::string text;
  std::size_t symbols = 0;
  bool decode_error = false;
};

/// Huffman -> polar -> 64-QAM -> channel -> ZF -> LLR -> SCL -> Huffman.
/// The receiver knows the payload bit count.
TextResult run_text_transceiver(std::string_view text, const HuffmanCodebook& book,
                                const PolarConfig& polar, const channel::ChannelConfig& ch,
                                channel::Rng& rng);

struct FeatureResult {
  nn::Tensor features;  // received [L,29]; may hold non-finite values after bit errors
  std::string text;     // greedy decoding of `features`
  std::size_t symbols = 0;
};

/// binary32 features through the same physical layer, then greedy decoding.
FeatureResult run_feature_transceiver(const nn::Tensor& features, const PolarConfig& polar,
                                      const channel::ChannelConfig& ch, channel::Rng& rng);

}  // namespace semcom::baselines
