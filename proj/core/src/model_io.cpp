#include "satact/model_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "satact/error.hpp"

namespace satact {
namespace {

constexpr std::array<char, 8> kMagic = {'S', 'A', 'T', 'N', 'E', 'T', '\0', '\1'};
constexpr std::uint32_t kMaxNameLength = 64;

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }

void write_name(std::ostream& out, std::string_view name) {
  write_le(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

template <typename UInt>
UInt read_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw TruncatedFileError("network file: unexpected end of data");
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= static_cast<UInt>(bytes[i]) << (8 * i);
  return value;
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

std::string read_name(std::istream& in) {
  const auto length = read_le<std::uint32_t>(in);
  if (length > kMaxNameLength) throw FormatError("network file: name field too long");
  std::string name(length, '\0');
  in.read(name.data(), length);
  if (in.gcount() != static_cast<std::streamsize>(length)) {
    throw TruncatedFileError("network file: unexpected end of data");
  }
  return name;
}

}  // namespace

void save_network(const Network& net, std::ostream& out) {
  const auto& cfg = net.config();
  out.write(kMagic.data(), kMagic.size());
  write_le(out, static_cast<std::uint32_t>(cfg.depth()));
  for (std::size_t w : cfg.widths) write_le(out, static_cast<std::uint64_t>(w));
  write_name(out, cfg.activation.name());
  write_f64(out, cfg.activation.leak());
  write_name(out, init_name(cfg.init.kind));
  write_f64(out, cfg.init.gain);
  write_le(out, cfg.seed);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    for (double v : net.weights()[l].data()) write_f64(out, v);
    for (double v : net.biases()[l].data()) write_f64(out, v);
  }
  if (!out) throw IoError("network file: write failed");
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  save_network(net, out);
}

Network load_network(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != static_cast<std::streamsize>(magic.size())) {
    throw TruncatedFileError("network file: missing header");
  }
  if (magic != kMagic) throw BadMagicError("network file: bad magic");

  NetworkConfig cfg;
  const auto layers = read_le<std::uint32_t>(in);
  if (layers == 0 || layers > 4096) throw FormatError("network file: implausible layer count");
  for (std::uint32_t i = 0; i <= layers; ++i) {
    const auto w = read_le<std::uint64_t>(in);
    if (w == 0 || w > (std::uint64_t{1} << 24)) throw FormatError("network file: implausible width");
    cfg.widths.push_back(static_cast<std::size_t>(w));
  }
  const std::string act_name = read_name(in);
  const double leak = read_f64(in);
  try {
    cfg.activation = parse_activation(act_name);
    cfg.activation = Activation(cfg.activation.kind(), leak);
    cfg.init.kind = parse_init_kind(read_name(in));
  } catch (const ParameterError& e) {
    throw FormatError(std::string("network file: ") + e.what());
  }
  cfg.init.gain = read_f64(in);
  cfg.seed = read_le<std::uint64_t>(in);

  std::vector<Matrix> weights;
  std::vector<Matrix> biases;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix w(cfg.widths[l + 1], cfg.widths[l]);
    for (double& v : w.data()) v = read_f64(in);
    Matrix b(cfg.widths[l + 1], 1);
    for (double& v : b.data()) v = read_f64(in);
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  try {
    return Network(std::move(cfg), std::move(weights), std::move(biases));
  } catch (const ParameterError& e) {
    throw FormatError(std::string("network file: ") + e.what());
  }
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return load_network(in);
}

}  // namespace satact
