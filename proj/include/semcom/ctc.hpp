#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/autograd.hpp"
#include "semcom/tensor.hpp"

namespace semcom::ctc {

// Token alphabet: a..z -> 0..25, apostrophe -> 26, space -> 27, blank -> 28.
inline constexpr int kAlphabetSize = 29;
inline constexpr int kApostrophe = 26;
inline constexpr int kSpace = 27;
inline constexpr int kBlank = 28;

using Token = int;
using TextSequence = std::vector<Token>;  // never contains kBlank
using Alignment = std::vector<Token>;     // one token per output step

char token_char(Token t);
/// Throws InvalidArgument for characters outside the 28 non-blank tokens.
Token char_token(char c);
TextSequence encode_text(std::string_view text);
std::string decode_text(const TextSequence& t);

/// Lowercases, drops characters outside the alphabet, maps whitespace to a
/// single space and trims: "Hello, World!" -> "hello world".
std::string normalize_transcript(std::string_view raw);

/// Merge consecutive duplicates, then delete blanks.
TextSequence collapse_alignment(const Alignment& a);

/// K plus one mandatory blank between each pair of equal adjacent tokens.
std::size_t min_alignment_length(const TextSequence& t);

/// Every length-L alignment that collapses to t. Exponential in L: test oracle only.
std::vector<Alignment> enumerate_alignments(const TextSequence& t, std::size_t length);

enum class CtcStatus { ok, infeasible };

struct CtcResult {
  double loss = 0.0;  // +infinity when infeasible
  CtcStatus status = CtcStatus::ok;
};

/// -ln sum over valid alignments of prod_l probs[l, a_l]; probs is [L, 29].
CtcResult ctc_loss(const nn::Tensor& probs, const TextSequence& t);

struct CtcGradient {
  double loss = 0.0;
  CtcStatus status = CtcStatus::ok;
  nn::Tensor grad;  // d loss / d logits, [L, 29]; zero when infeasible
};

/// Loss of softmax(logits) and its gradient with respect to the logits.
CtcGradient ctc_grad(const nn::Tensor& logits, const TextSequence& t);

/// Differentiable CTC loss on a tape; logits may be [L,29] or [1,L,29].
nn::Var ctc_loss(nn::Var logits, const TextSequence& t);

/// Per-step argmax (ties to the lowest index, NaN never wins), then collapse.
TextSequence greedy_decode(const nn::Tensor& probs);
Alignment best_path(const nn::Tensor& probs);

}  // namespace semcom::ctc
