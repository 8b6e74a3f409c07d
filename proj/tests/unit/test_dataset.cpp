#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "satact/dataset.hpp"
#include "satact/error.hpp"
#include "satact/rng.hpp"

namespace fs = std::filesystem;

namespace {

using Bytes = std::vector<unsigned char>;

void put_be32(Bytes& b, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) b.push_back(static_cast<unsigned char>(v >> shift));
}

Bytes idx_images(std::uint32_t count, std::uint32_t rows, std::uint32_t cols, const Bytes& pixels) {
  Bytes b;
  put_be32(b, 0x00000803);
  put_be32(b, count);
  put_be32(b, rows);
  put_be32(b, cols);
  b.insert(b.end(), pixels.begin(), pixels.end());
  return b;
}

Bytes idx_labels(const Bytes& labels) {
  Bytes b;
  put_be32(b, 0x00000801);
  put_be32(b, static_cast<std::uint32_t>(labels.size()));
  b.insert(b.end(), labels.begin(), labels.end());
  return b;
}

class IdxFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("satact_idx_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const Bytes& bytes) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return p;
  }

  // Four 2x2 images; the third is all zeros.
  Bytes four_pixels() const {
    return {0, 255, 51, 102,  255, 255, 255, 255,  0, 0, 0, 0,  10, 20, 30, 40};
  }

  fs::path dir_;
};

double nearest_center_accuracy(const satact::Dataset& d, double offset) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    std::size_t best = 0;
    double best_dist = INFINITY;
    for (std::size_t k = 0; k < d.classes; ++k) {
      double dist = 0.0;
      for (std::size_t i = 0; i < d.dims(); ++i) {
        const double c = (i == k) ? offset : 0.0;
        dist += (d.inputs(i, j) - c) * (d.inputs(i, j) - c);
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    if (best == d.labels[j]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(d.size());
}

}  // namespace

TEST_F(IdxFixture, FourImagesParseToFourColumns) {
  const auto images = write("img", idx_images(4, 2, 2, four_pixels()));
  const auto labels = write("lbl", idx_labels({3, 0, 1, 3}));
  const satact::Dataset d = satact::load_idx(images, labels, satact::Split::Test);
  EXPECT_EQ(d.inputs.rows(), 4u);
  EXPECT_EQ(d.inputs.cols(), 4u);
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{3, 0, 1, 3}));
  EXPECT_EQ(d.classes, 4u);
  EXPECT_EQ(d.split, satact::Split::Test);
  EXPECT_EQ(d.inputs(0, 0), 0.0);
  EXPECT_EQ(d.inputs(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(d.inputs(2, 0), 0.2);
  EXPECT_DOUBLE_EQ(d.inputs(3, 3), 40.0 / 255.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(d.inputs(i, 2), 0.0);
  EXPECT_NO_THROW(d.validate());
}

TEST_F(IdxFixture, CountMismatch) {
  const auto images = write("img", idx_images(4, 2, 2, four_pixels()));
  const auto labels = write("lbl", idx_labels({0, 1, 2}));
  EXPECT_THROW(satact::load_idx(images, labels), satact::CountMismatchError);
}

TEST_F(IdxFixture, BadMagic) {
  Bytes img = idx_images(4, 2, 2, four_pixels());
  img[3] = 0x01;
  const auto images = write("img", img);
  const auto labels = write("lbl", idx_labels({0, 1, 2, 3}));
  EXPECT_THROW(satact::load_idx(images, labels), satact::BadMagicError);
  EXPECT_THROW(satact::load_idx(labels, labels), satact::BadMagicError);
}

TEST_F(IdxFixture, Truncated) {
  Bytes px = four_pixels();
  px.pop_back();
  const auto images = write("img", idx_images(4, 2, 2, px));
  const auto labels = write("lbl", idx_labels({0, 1, 2, 3}));
  EXPECT_THROW(satact::load_idx(images, labels), satact::TruncatedFileError);
  const auto stub = write("stub", Bytes{0, 0, 8});
  EXPECT_THROW(satact::load_idx(stub, labels), satact::TruncatedFileError);
  Bytes short_labels = idx_labels({0, 1, 2, 3});
  short_labels.pop_back();
  const auto good_images = write("img2", idx_images(4, 2, 2, four_pixels()));
  EXPECT_THROW(satact::load_idx(good_images, write("lbl2", short_labels)), satact::TruncatedFileError);
}

TEST_F(IdxFixture, MissingFile) {
  const auto labels = write("lbl", idx_labels({0}));
  EXPECT_THROW(satact::load_idx(dir_ / "nope", labels), satact::IoError);
}

TEST(Synth, ShapesLabelsAndDeterminism) {
  satact::Rng a(3), b(3);
  const auto da = satact::synth_classification(a, 4, 6, 10, 2.0);
  const auto db = satact::synth_classification(b, 4, 6, 10, 2.0);
  EXPECT_EQ(da.train.inputs, db.train.inputs);
  EXPECT_EQ(da.test.inputs, db.test.inputs);
  EXPECT_NE(da.train.inputs, da.test.inputs);
  EXPECT_EQ(da.train.inputs.rows(), 6u);
  EXPECT_EQ(da.train.size(), 40u);
  EXPECT_EQ(da.test.size(), 40u);
  EXPECT_EQ(da.train.split, satact::Split::Train);
  EXPECT_EQ(da.test.split, satact::Split::Test);
  for (std::size_t j = 0; j < 40; ++j) EXPECT_EQ(da.train.labels[j], j / 10);
}

TEST(Synth, ClassMeansSitAtScaledAxes) {
  satact::Rng rng(4);
  const double margin = 1.5;
  const auto d = satact::synth_classification(rng, 3, 5, 4000, margin).train;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 5; ++i) {
      double m = 0.0;
      for (std::size_t j = k * 4000; j < (k + 1) * 4000; ++j) m += d.inputs(i, j);
      m /= 4000.0;
      EXPECT_NEAR(m, i == k ? std::sqrt(2.0) * margin : 0.0, 0.07);
    }
  }
}

TEST(Synth, SeparableAndChanceLimits) {
  satact::Rng far(5);
  const auto easy = satact::synth_classification(far, 4, 8, 200, 50.0);
  EXPECT_EQ(nearest_center_accuracy(easy.test, std::sqrt(2.0) * 50.0), 1.0);

  satact::Rng none(6);
  const auto hard = satact::synth_classification(none, 4, 8, 2000, 0.0);
  EXPECT_NEAR(nearest_center_accuracy(hard.test, 0.0), 0.25, 0.01);
}

TEST(Synth, RejectsBadArguments) {
  satact::Rng rng(1);
  EXPECT_THROW(satact::synth_classification(rng, 1, 4, 5, 1.0), satact::ParameterError);
  EXPECT_THROW(satact::synth_classification(rng, 5, 4, 5, 1.0), satact::ParameterError);
  EXPECT_THROW(satact::synth_classification(rng, 2, 4, 0, 1.0), satact::ParameterError);
  EXPECT_THROW(satact::synth_classification(rng, 2, 4, 5, -1.0), satact::ParameterError);
}

TEST(DatasetType, SubsetAndValidate) {
  satact::Rng rng(7);
  const auto d = satact::synth_classification(rng, 2, 3, 3, 1.0).train;
  const auto s = d.subset({5, 0});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.labels, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.inputs(2, 0), d.inputs(2, 5));
  satact::Dataset bad = d;
  bad.labels.pop_back();
  EXPECT_THROW(bad.validate(), satact::DimensionError);
  bad = d;
  bad.labels[0] = 9;
  EXPECT_THROW(bad.validate(), satact::ParameterError);
}
