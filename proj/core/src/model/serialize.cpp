#include "pavesat/model/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "pavesat/error.hpp"

namespace pavesat::model {
namespace {

constexpr char kMagic[4] = {'P', 'V', 'S', 'W'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "weights IO assumes a little-endian host");

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void floats(const std::vector<float>& v) { bytes(v.data(), v.size() * sizeof(float)); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(source_ + ": truncated weights file");
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return v;
  }
  std::uint32_t bounded(std::uint32_t limit, const char* what) {
    const std::uint32_t v = u32();
    if (v > limit) throw FormatError(source_ + ": implausible " + what + " " + std::to_string(v));
    return v;
  }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace

void save_network(const Network<float>& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  Writer w(out);
  const auto& cfg = net.config();
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(net.layers().size()));
  w.u32(static_cast<std::uint32_t>(cfg.input_channels));
  w.u32(static_cast<std::uint32_t>(cfg.input_height));
  w.u32(static_cast<std::uint32_t>(cfg.input_width));
  w.u32(static_cast<std::uint32_t>(cfg.num_classes));
  w.u32(cfg.mask_input ? 1u : 0u);
  for (const auto& L : net.layers()) {
    w.u32(static_cast<std::uint32_t>(L.name.size()));
    w.bytes(L.name.data(), L.name.size());
    w.u8(static_cast<std::uint8_t>(L.kind));
    w.u8(static_cast<std::uint8_t>((L.trainable ? 1 : 0) | (L.relu ? 2 : 0) | (L.pool ? 4 : 0)));
    w.u32(static_cast<std::uint32_t>(L.stride));
    w.u32(static_cast<std::uint32_t>(L.weights.shape.size()));
    for (int d : L.weights.shape) w.u32(static_cast<std::uint32_t>(d));
    w.floats(L.weights.values);
    w.u32(static_cast<std::uint32_t>(L.bias.size()));
    w.floats(L.bias.values);
  }
  if (!out) throw Error("write failed: " + path.string());
}

Network<float> load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Reader r(in, path.string());
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError(r.source() + ": not a weights file");
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw FormatError(r.source() + ": unsupported version " + std::to_string(version));
  const std::uint32_t layer_count = r.bounded(1024, "layer count");

  CompactNetConfig cfg;
  cfg.input_channels = static_cast<int>(r.bounded(4096, "channel count"));
  cfg.input_height = static_cast<int>(r.bounded(1 << 16, "height"));
  cfg.input_width = static_cast<int>(r.bounded(1 << 16, "width"));
  cfg.num_classes = static_cast<int>(r.bounded(4096, "class count"));
  cfg.mask_input = r.bounded(1, "input flags") != 0;

  struct Stored {
    std::string name;
    LayerKind kind;
    std::uint8_t flags;
    int stride;
    std::vector<int> shape;
    std::vector<float> weights, bias;
  };
  std::vector<Stored> stored;
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    Stored s;
    s.name.resize(r.bounded(256, "name length"));
    r.bytes(s.name.data(), s.name.size());
    const std::uint8_t kind = r.u8();
    if (kind < 1 || kind > 3) throw FormatError(r.source() + ": unknown layer kind in '" + s.name + "'");
    s.kind = static_cast<LayerKind>(kind);
    s.flags = r.u8();
    s.stride = static_cast<int>(r.bounded(64, "stride"));
    const std::uint32_t ndim = r.bounded(8, "rank");
    for (std::uint32_t d = 0; d < ndim; ++d) s.shape.push_back(static_cast<int>(r.bounded(1 << 20, "dimension")));
    const std::size_t count = ndim ? Tensor<float>::element_count(s.shape) : 0;
    if (count > (std::size_t{1} << 28)) throw FormatError(r.source() + ": layer '" + s.name + "' too large");
    s.weights.resize(count);
    r.bytes(s.weights.data(), count * sizeof(float));
    s.bias.resize(r.bounded(1 << 20, "bias count"));
    r.bytes(s.bias.data(), s.bias.size() * sizeof(float));
    stored.push_back(std::move(s));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError(r.source() + ": trailing bytes");

  // Rebuild the architecture, then overwrite the parameters.
  bool seen_gap = false;
  for (const auto& s : stored) {
    switch (s.kind) {
      case LayerKind::Conv:
        if (s.shape.size() != 4) throw FormatError(r.source() + ": conv layer '" + s.name + "' needs rank 4");
        cfg.conv_blocks.push_back({s.shape[0], s.stride, (s.flags & 4) != 0, (s.flags & 1) != 0});
        break;
      case LayerKind::GlobalAvgPool:
        seen_gap = true;
        break;
      case LayerKind::Dense:
        if (s.shape.size() != 2) throw FormatError(r.source() + ": dense layer '" + s.name + "' needs rank 2");
        if (s.name == "output") {
          cfg.output_trainable = (s.flags & 1) != 0;
        } else {
          cfg.hidden.push_back({s.shape[0], (s.flags & 1) != 0});
        }
        break;
    }
  }
  if (!seen_gap) throw FormatError(r.source() + ": missing pooling layer");

  Network<float> net(cfg, 0);
  auto& layers = net.layers();
  if (layers.size() != stored.size()) throw FormatError(r.source() + ": layer layout mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& L = layers[i];
    const auto& s = stored[i];
    if (L.kind != s.kind || L.name != s.name || L.weights.shape != (s.kind == LayerKind::GlobalAvgPool ? std::vector<int>{} : s.shape) ||
        L.bias.size() != s.bias.size()) {
      throw FormatError(r.source() + ": layer '" + s.name + "' has an inconsistent shape");
    }
    L.weights.values = s.weights;
    L.bias.values = s.bias;
  }
  return net;
}

}  // namespace pavesat::model
