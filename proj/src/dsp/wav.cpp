#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>

#include "semcom/dsp.hpp"

namespace semcom::dsp {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}
std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | p[1] << 8); }

void put32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put16(std::ostream& os, std::uint16_t v) {
  os.put(static_cast<char>(v & 0xff));
  os.put(static_cast<char>(v >> 8));
}

}  // namespace

SpeechSamples read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE")
    throw WavError(path.string() + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  SpeechSamples out;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    const std::uint32_t size = le32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw WavError(path.string() + ": truncated chunk " + id);
    if (id == "fmt ") {
      if (size < 16) throw WavError(path.string() + ": short fmt chunk");
      const std::uint16_t format = le16(&bytes[body]);
      const std::uint16_t channels = le16(&bytes[body + 2]);
      const std::uint32_t rate = le32(&bytes[body + 4]);
      const std::uint16_t bits = le16(&bytes[body + 14]);
      if (format != 1 || channels != 1 || bits != 16)
        throw WavError(path.string() + ": unsupported encoding (need PCM 16-bit mono)");
      out.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw WavError(path.string() + ": data chunk before fmt chunk");
      out.samples.resize(size / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<std::int16_t>(le16(&bytes[body + 2 * i])) / 32768.0;
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw WavError(path.string() + ": no data chunk");
}

void write_wav(const std::filesystem::path& path, const SpeechSamples& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw WavError("cannot write " + path.string());
  const auto n = static_cast<std::uint32_t>(m.samples.size());
  os.write("RIFF", 4);
  put32(os, 36 + 2 * n);
  os.write("WAVEfmt ", 8);
  put32(os, 16);
  put16(os, 1);
  put16(os, 1);
  put32(os, static_cast<std::uint32_t>(m.sample_rate));
  put32(os, static_cast<std::uint32_t>(m.sample_rate) * 2);
  put16(os, 2);
  put16(os, 16);
  os.write("data", 4);
  put32(os, 2 * n);
  for (double v : m.samples) {
    const long q = std::lround(std::clamp(v, -1.0, 1.0) * 32768.0);
    put16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
  }
}

}  // namespace semcom::dsp
