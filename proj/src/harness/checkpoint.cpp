#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "semcom/harness.hpp"

namespace semcom::harness {
namespace {

using Kind = CheckpointError::Kind;
constexpr std::size_t kMagicLen = 8;
constexpr std::size_t kVersionPrefix = 5;  // "DSCST"
constexpr char kMetaName[] = "meta";
constexpr std::uint32_t kMaxNameLen = 4096;
constexpr std::uint32_t kMaxRank = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_tensor(std::ostream& out, const std::string& name, const nn::Tensor& t) {
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) put_u32(out, static_cast<std::uint32_t>(d));
  for (double v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw CheckpointError(Kind::truncated, std::string("checkpoint truncated while reading ") + what);
  }
  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4, what);
    return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
           (std::uint32_t{b[3]} << 24);
  }

private:
  std::istream& in_;
};

nn::Tensor meta_tensor(const codec::ModelConfig& m, std::size_t bins) {
  std::vector<double> v{double(m.conv_layers),   double(m.conv_filters),   double(m.conv_kernel),
                        double(m.conv_stride.time), double(m.conv_stride.freq), double(m.gru_layers),
                        double(m.gru_units),     double(m.channel_hidden), double(m.decoder_hidden),
                        double(bins),            m.output_gain,
                        double(m.encoder_dense.size())};
  for (auto w : m.encoder_dense) v.push_back(double(w));
  const std::size_t n = v.size();
  return nn::Tensor({n}, std::move(v));
}

void parse_meta(const nn::Tensor& t, Checkpoint& ck) {
  const auto bad = [] { return CheckpointError(Kind::incompatible, "checkpoint meta tensor is malformed"); };
  if (t.rank() != 1 || t.size() < 12) throw bad();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(t[i] >= 0) || (i != 10 && t[i] != std::floor(t[i]))) throw bad();
  const auto at = [&](std::size_t i) { return static_cast<std::size_t>(t[i]); };
  codec::ModelConfig& m = ck.model;
  m.conv_layers = at(0);
  m.conv_filters = at(1);
  m.conv_kernel = at(2);
  m.conv_stride = {at(3), at(4)};
  m.gru_layers = at(5);
  m.gru_units = at(6);
  m.channel_hidden = at(7);
  m.decoder_hidden = at(8);
  ck.bins = at(9);
  m.output_gain = t[10];
  if (t.size() != 12 + at(11)) throw bad();
  m.encoder_dense.clear();
  for (std::size_t i = 0; i < at(11); ++i) m.encoder_dense.push_back(at(12 + i));
  try {
    m.validate();
  } catch (const InvalidArgument&) {
    throw bad();
  }
}

}  // namespace

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  require_compatible(ckpt, ckpt.model, ckpt.bins);
  out.write(kCheckpointMagic, kMagicLen);
  put_u32(out, static_cast<std::uint32_t>(ckpt.params.tensors().size() + 1));
  put_tensor(out, kMetaName, meta_tensor(ckpt.model, ckpt.bins));
  for (const auto& [name, t] : ckpt.params.tensors()) put_tensor(out, name, t);
  if (!out) throw CheckpointError(Kind::io, "failed writing checkpoint");
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError(Kind::io, "cannot open " + path.string() + " for writing");
  write_checkpoint(ckpt, out);
}

Checkpoint read_checkpoint(std::istream& in) {
  Reader r(in);
  char magic[kMagicLen];
  r.bytes(magic, kMagicLen, "magic");
  if (std::memcmp(magic, kCheckpointMagic, kVersionPrefix) != 0)
    throw CheckpointError(Kind::bad_magic, "not a checkpoint file (magic mismatch)");
  if (std::memcmp(magic, kCheckpointMagic, kMagicLen) != 0)
    throw CheckpointError(Kind::version_mismatch,
                          "unsupported checkpoint version " + std::string(magic + kVersionPrefix, 3));

  const std::uint32_t count = r.u32("tensor count");
  Checkpoint ck;
  bool have_meta = false;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t name_len = r.u32("name length");
    if (name_len == 0 || name_len > kMaxNameLen)
      throw CheckpointError(Kind::incompatible, "checkpoint tensor name length out of range");
    std::string name(name_len, '\0');
    r.bytes(name.data(), name_len, "tensor name");
    const std::uint32_t rank = r.u32("rank");
    if (rank == 0 || rank > kMaxRank)
      throw CheckpointError(Kind::incompatible, "checkpoint tensor '" + name + "' has bad rank");
    std::vector<std::size_t> shape(rank);
    std::size_t n = 1;
    for (auto& d : shape) {
      d = r.u32("dimensions");
      if (d == 0 || n > (std::size_t{1} << 32) / d)
        throw CheckpointError(Kind::incompatible, "checkpoint tensor '" + name + "' has bad shape");
      n *= d;
    }
    std::vector<double> data(n);
    for (auto& v : data) v = static_cast<double>(std::bit_cast<float>(r.u32("tensor data")));
    nn::Tensor t(std::move(shape), std::move(data));
    if (name == kMetaName) {
      parse_meta(t, ck);
      have_meta = true;
    } else {
      try {
        ck.params.add(name, std::move(t));
      } catch (const InvalidArgument& e) {
        throw CheckpointError(Kind::incompatible, std::string("checkpoint: ") + e.what());
      }
    }
  }
  if (!have_meta) throw CheckpointError(Kind::incompatible, "checkpoint has no meta tensor");
  require_compatible(ck, ck.model, ck.bins);
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::io, "cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

void require_compatible(const Checkpoint& ckpt, const codec::ModelConfig& model, std::size_t bins) {
  // The gain is stored at binary32 precision.
  codec::ModelConfig a = ckpt.model, b = model;
  a.output_gain = static_cast<float>(a.output_gain);
  b.output_gain = static_cast<float>(b.output_gain);
  if (!(a == b) || ckpt.bins != bins)
    throw CheckpointError(Kind::incompatible, "checkpoint was built for a different model configuration");
  const nn::ModelParams expect = codec::init_params(model, bins, 0);
  const auto& have = ckpt.params.tensors();
  if (have.size() != expect.tensors().size())
    throw CheckpointError(Kind::incompatible, "checkpoint tensor set does not match the model");
  for (const auto& [name, t] : expect.tensors()) {
    const auto it = have.find(name);
    if (it == have.end() || it->second.shape() != t.shape())
      throw CheckpointError(Kind::incompatible, "checkpoint tensor '" + name + "' missing or misshapen");
  }
}

}  // namespace semcom::harness
