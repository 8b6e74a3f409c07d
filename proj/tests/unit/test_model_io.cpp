#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "satact/error.hpp"
#include "satact/model_io.hpp"
#include "satact/network.hpp"

using satact::Activation;
using satact::ActivationKind;

namespace {

satact::Network sample_net() {
  satact::NetworkConfig c;
  c.widths = {3, 4, 2};
  c.activation = Activation(ActivationKind::PenalizedTanh, 0.5);
  c.init = {satact::InitKind::XavierGlorot, 1.5};
  c.seed = 1234;
  satact::Network n = satact::build(c);
  n.biases()[0](2, 0) = -0.125;
  return n;
}

std::string serialize(const satact::Network& n) {
  std::ostringstream out(std::ios::binary);
  satact::save_network(n, out);
  return out.str();
}

}  // namespace

TEST(ModelIo, RoundTripIsBitExact) {
  const satact::Network n = sample_net();
  std::istringstream in(serialize(n), std::ios::binary);
  const satact::Network back = satact::load_network(in);
  EXPECT_EQ(back.config().widths, n.config().widths);
  EXPECT_EQ(back.activation(), n.activation());
  EXPECT_EQ(back.config().init, n.config().init);
  EXPECT_EQ(back.config().seed, 1234u);
  EXPECT_EQ(back.weights(), n.weights());
  EXPECT_EQ(back.biases(), n.biases());
}

TEST(ModelIo, LayoutIsLittleEndianWithMagic) {
  const std::string bytes = serialize(sample_net());
  ASSERT_GE(bytes.size(), 16u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("SATNET\0\1", 8));
  // u32 L = 2, little-endian.
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x02\x00\x00\x00", 4));
  // First width n_0 = 3 as u64.
  EXPECT_EQ(bytes.substr(12, 8), std::string("\x03\0\0\0\0\0\0\0", 8));
  const std::size_t header = 8 + 4 + 3 * 8 + (4 + 14) + 8 + (4 + 6) + 8 + 8;
  EXPECT_EQ(bytes.size(), header + 8 * (3 * 4 + 4 + 4 * 2 + 2));
}

TEST(ModelIo, RejectsBadMagic) {
  std::string bytes = serialize(sample_net());
  bytes[0] = 'X';
  std::istringstream in(bytes, std::ios::binary);
  EXPECT_THROW(satact::load_network(in), satact::BadMagicError);
}

TEST(ModelIo, RejectsTruncationAtEveryPrefix) {
  const std::string bytes = serialize(sample_net());
  for (std::size_t cut = 0; cut < bytes.size(); cut += 7) {
    std::istringstream in(bytes.substr(0, cut), std::ios::binary);
    EXPECT_THROW(satact::load_network(in), satact::FormatError) << "cut at " << cut;
  }
}

TEST(ModelIo, RejectsUnknownActivationName) {
  std::string bytes = serialize(sample_net());
  const auto pos = bytes.find("penalized_tanh");
  ASSERT_NE(pos, std::string::npos);
  bytes.replace(pos, 14, "penalized_tanX");
  std::istringstream in(bytes, std::ios::binary);
  EXPECT_THROW(satact::load_network(in), satact::FormatError);
}

TEST(ModelIo, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "satact_model_io_test.bin";
  const satact::Network n = sample_net();
  satact::save_network(n, path);
  EXPECT_EQ(satact::load_network(path).weights(), n.weights());
  std::filesystem::remove(path);
  EXPECT_THROW(satact::load_network(path), satact::IoError);
}
