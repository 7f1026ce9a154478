#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

namespace semcom::baselines {
namespace {

struct Node {
  std::uint64_t weight;
  ctc::Token min_token;
  int left = -1, right = -1;
  ctc::Token token = -1;
};

constexpr std::size_t kMaxCodeLength = 63;

}  // namespace

HuffmanCodebook HuffmanCodebook::build(const std::map<ctc::Token, std::uint64_t>& frequencies) {
  std::vector<Node> nodes;
  for (const auto& [t, w] : frequencies) {
    if (w == 0) continue;
    if (t < 0 || t >= ctc::kBlank) throw InvalidArgument("huffman: token out of range");
    nodes.push_back({w, t, -1, -1, t});
  }
  if (nodes.empty()) throw InvalidArgument("huffman: no token has a positive count");
  if (nodes.size() == 1) return from_lengths({{nodes[0].token, 1}});

  using Entry = std::tuple<std::uint64_t, ctc::Token, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    heap.emplace(nodes[i].weight, nodes[i].min_token, i);
  while (heap.size() > 1) {
    const auto [wa, ta, a] = heap.top();
    heap.pop();
    const auto [wb, tb, b] = heap.top();
    heap.pop();
    nodes.push_back({wa + wb, std::min(ta, tb), a, b, -1});
    heap.emplace(wa + wb, std::min(ta, tb), static_cast<int>(nodes.size()) - 1);
  }

  std::vector<std::pair<ctc::Token, std::size_t>> lengths;
  std::vector<std::pair<int, std::size_t>> stack{{std::get<2>(heap.top()), 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes[id];
    if (n.left < 0) {
      lengths.emplace_back(n.token, depth);
    } else {
      stack.emplace_back(n.left, depth + 1);
      stack.emplace_back(n.right, depth + 1);
    }
  }
  return from_lengths(lengths);
}

HuffmanCodebook HuffmanCodebook::from_lengths(
    const std::vector<std::pair<ctc::Token, std::size_t>>& lengths) {
  if (lengths.empty()) throw InvalidArgument("huffman: empty codebook");
  auto sorted = lengths;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  double kraft = 0.0;
  for (const auto& [t, len] : sorted) {
    if (len == 0 || len > kMaxCodeLength) throw InvalidArgument("huffman: bad code length");
    if (t < 0 || t >= ctc::kBlank) throw InvalidArgument("huffman: token out of range");
    kraft += std::ldexp(1.0, -static_cast<int>(len));
  }
  if (kraft > 1.0 + 1e-12) throw InvalidArgument("huffman: lengths violate the Kraft inequality");

  HuffmanCodebook book;
  std::uint64_t code = 0;
  std::size_t prev = sorted.front().second;
  for (const auto& [t, len] : sorted) {
    code <<= (len - prev);
    prev = len;
    BitVector bits(len);
    for (std::size_t i = 0; i < len; ++i) bits[i] = static_cast<Bit>((code >> (len - 1 - i)) & 1u);
    if (!book.codes_.emplace(t, bits).second) throw InvalidArgument("huffman: duplicate token");
    book.lookup_.emplace(std::move(bits), t);
    ++code;
  }
  return book;
}

std::vector<std::pair<ctc::Token, std::size_t>> HuffmanCodebook::lengths() const {
  std::vector<std::pair<ctc::Token, std::size_t>> out;
  for (const auto& [t, bits] : codes_) out.emplace_back(t, bits.size());
  return out;
}

const BitVector& HuffmanCodebook::codeword(ctc::Token t) const {
  const auto it = codes_.find(t);
  if (it == codes_.end()) throw InvalidArgument("huffman: token not in codebook");
  return it->second;
}

BitVector HuffmanCodebook::encode(const ctc::TextSequence& text) const {
  BitVector out;
  for (ctc::Token t : text) {
    const BitVector& c = codeword(t);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

HuffmanCodebook::Decoded HuffmanCodebook::decode(std::span<const Bit> bits) const {
  std::size_t longest = 0;
  for (const auto& [t, c] : codes_) longest = std::max(longest, c.size());
  Decoded d;
  BitVector cur;
  for (Bit b : bits) {
    cur.push_back(b & 1u);
    if (const auto it = lookup_.find(cur); it != lookup_.end()) {
      d.tokens.push_back(it->second);
      cur.clear();
    } else if (cur.size() >= longest) {
      d.ok = false;
      return d;
    }
  }
  d.ok = cur.empty();
  return d;
}

std::string HuffmanCodebook::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, len] : lengths()) {
    if (!first) os << ' ';
    os << t << ':' << len;
    first = false;
  }
  return os.str();
}

HuffmanCodebook HuffmanCodebook::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<std::pair<ctc::Token, std::size_t>> lengths;
  std::string item;
  while (is >> item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("huffman: malformed entry '" + item + "'");
    try {
      lengths.emplace_back(std::stoi(item.substr(0, colon)), std::stoul(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw InvalidArgument("huffman: malformed entry '" + item + "'");
    }
  }
  return from_lengths(lengths);
}

std::map<ctc::Token, std::uint64_t> token_frequencies(std::string_view text) {
  std::map<ctc::Token, std::uint64_t> f;
  for (ctc::Token t = 0; t < ctc::kBlank; ++t) f[t] = 1;
  for (ctc::Token t : ctc::encode_text(ctc::normalize_transcript(text))) ++f[t];
  return f;
}

std::map<ctc::Token, std::uint64_t> default_english_frequencies() {
  static const std::pair<char, std::uint64_t> table[] = {
      {'e', 10200}, {'t', 7500}, {'a', 6700}, {'o', 6200}, {'i', 5700}, {'n', 5600},
      {'s', 5200},  {'h', 5000}, {'r', 4900}, {'d', 3500}, {'l', 3300}, {'c', 2300},
      {'u', 2300},  {'m', 2000}, {'w', 1900}, {'f', 1800}, {'g', 1600}, {'y', 1600},
      {'p', 1500},  {'b', 1200}, {'v', 800},  {'k', 600},  {'j', 120},  {'x', 120},
      {'q', 80},    {'z', 60},   {'\'', 200}, {' ', 18000}};
  std::map<ctc::Token, std::uint64_t> f;
  for (const auto& [c, n] : table) f[ctc::char_token(c)] = n;
  return f;
}

}  // namespace semcom::baselines
