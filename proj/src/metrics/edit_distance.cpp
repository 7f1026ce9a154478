#include <cctype>

#include "semcom/errors.hpp"
#include "semcom/metrics.hpp"

namespace semcom::metrics {

double EditOps::rate() const {
  if (reference_length == 0) throw UndefinedRateError("error rate with an empty reference");
  return static_cast<double>(distance()) / static_cast<double>(reference_length);
}

std::string normalize_for_scoring(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string out(text.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

EditOps char_ops(std::string_view ref, std::string_view hyp) {
  const std::string r = normalize_for_scoring(ref), h = normalize_for_scoring(hyp);
  return edit_ops<char>(r, h);
}

EditOps word_ops(std::string_view ref, std::string_view hyp) {
  const auto r = split_words(normalize_for_scoring(ref));
  const auto h = split_words(normalize_for_scoring(hyp));
  return edit_ops<std::string>(r, h);
}

double cer(std::string_view ref, std::string_view hyp) { return char_ops(ref, hyp).rate(); }

double wer(std::string_view ref, std::string_view hyp) { return word_ops(ref, hyp).rate(); }

}  // namespace semcom::metrics
