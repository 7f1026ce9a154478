#include <algorithm>
#include <cctype>

#include "semcom/ctc.hpp"
#include "semcom/errors.hpp"

namespace semcom::ctc {

char token_char(Token t) {
  if (t >= 0 && t < 26) return static_cast<char>('a' + t);
  if (t == kApostrophe) return '\'';
  if (t == kSpace) return ' ';
  throw InvalidArgument("token " + std::to_string(t) + " has no character");
}

Token char_token(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c == '\'') return kApostrophe;
  if (c == ' ') return kSpace;
  throw InvalidArgument(std::string("character '") + c + "' is outside the token alphabet");
}

TextSequence encode_text(std::string_view text) {
  TextSequence out;
  out.reserve(text.size());
  for (char c : text) out.push_back(char_token(c));
  return out;
}

std::string decode_text(const TextSequence& t) {
  std::string out;
  out.reserve(t.size());
  for (Token tok : t) out.push_back(token_char(tok));
  return out;
}

std::string normalize_transcript(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    const char lc = static_cast<char>(std::tolower(c));
    if (!((lc >= 'a' && lc <= 'z') || lc == '\'')) continue;
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(lc);
  }
  return out;
}

TextSequence collapse_alignment(const Alignment& a) {
  TextSequence out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && a[i] == a[i - 1]) continue;
    if (a[i] != kBlank) out.push_back(a[i]);
  }
  return out;
}

std::size_t min_alignment_length(const TextSequence& t) {
  std::size_t n = t.size();
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) ++n;
  return n;
}

std::vector<Alignment> enumerate_alignments(const TextSequence& t, std::size_t length) {
  // Only tokens of t and the blank can occur in a valid alignment, so scanning
  // that reduced alphabet is still exhaustive.
  std::vector<Token> symbols{kBlank};
  for (Token tok : t)
    if (std::find(symbols.begin(), symbols.end(), tok) == symbols.end()) symbols.push_back(tok);
  std::sort(symbols.begin(), symbols.end());

  std::vector<Alignment> out;
  if (length == 0) {
    if (t.empty()) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> digits(length, 0);
  Alignment a(length);
  while (true) {
    for (std::size_t i = 0; i < length; ++i) a[i] = symbols[digits[i]];
    if (collapse_alignment(a) == t) out.push_back(a);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < symbols.size()) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

}  // namespace semcom::ctc
