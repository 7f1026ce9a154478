#include <bit>
#include <cmath>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

namespace semcom::baselines {

BitVector float_serialize(std::span<const double> values) {
  BitVector out;
  out.reserve(values.size() * 32);
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("float_serialize: non-finite value");
    const auto word = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int i = 31; i >= 0; --i) out.push_back(static_cast<Bit>((word >> i) & 1u));
  }
  return out;
}

std::vector<double> float_deserialize(std::span<const Bit> bits) {
  if (bits.size() % 32 != 0)
    throw InvalidArgument("float_deserialize: bit count is not a multiple of 32");
  std::vector<double> out(bits.size() / 32);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint32_t word = 0;
    for (std::size_t i = 0; i < 32; ++i) word = (word << 1) | (bits[32 * k + i] & 1u);
    out[k] = static_cast<double>(std::bit_cast<float>(word));
  }
  return out;
}

}  // namespace semcom::baselines
