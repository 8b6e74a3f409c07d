#include "satact/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "satact/error.hpp"
#include "satact/rng.hpp"

namespace satact {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                   const std::string& what) {
  if (bytes.size() < offset + 4) throw TruncatedFileError(what + ": header truncated");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(const std::vector<unsigned char>& bytes, std::uint32_t expected,
                 const std::string& what) {
  const std::uint32_t magic = be32(bytes, 0, what);
  if (magic != expected) {
    throw BadMagicError(what + ": bad IDX magic " + std::to_string(magic) + ", expected " +
                        std::to_string(expected));
  }
}

Dataset make_split(Rng& rng, std::size_t classes, std::size_t dims, std::size_t per_class,
                   double margin, Split split) {
  Dataset d;
  d.classes = classes;
  d.split = split;
  d.inputs = Matrix(dims, classes * per_class);
  d.labels.reserve(classes * per_class);
  const double offset = std::sqrt(2.0) * margin;
  std::size_t col = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t s = 0; s < per_class; ++s, ++col) {
      for (std::size_t i = 0; i < dims; ++i) {
        d.inputs(i, col) = rng.normal() + (i == k ? offset : 0.0);
      }
      d.labels.push_back(k);
    }
  }
  return d;
}

}  // namespace

void Dataset::validate() const {
  if (labels.size() != inputs.cols()) {
    throw DimensionError("dataset: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(inputs.cols()) + " samples");
  }
  for (std::size_t label : labels) {
    if (label >= classes) {
      throw ParameterError("dataset: label " + std::to_string(label) + " >= class count " +
                           std::to_string(classes));
    }
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.classes = classes;
  out.split = split;
  out.inputs = Matrix(inputs.rows(), indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const std::size_t src = indices[j];
    for (std::size_t i = 0; i < inputs.rows(); ++i) out.inputs(i, j) = inputs(i, src);
    out.labels.push_back(labels[src]);
  }
  return out;
}

SplitDatasets synth_classification(Rng& rng, std::size_t classes, std::size_t dims,
                                   std::size_t per_class, double margin) {
  if (classes < 2) throw ParameterError("synth_classification: need at least 2 classes");
  if (dims < classes) throw ParameterError("synth_classification: dims must be >= classes");
  if (per_class == 0) throw ParameterError("synth_classification: per_class must be >= 1");
  if (!(margin >= 0.0)) throw ParameterError("synth_classification: margin must be >= 0");
  SplitDatasets out;
  out.train = make_split(rng, classes, dims, per_class, margin, Split::Train);
  out.test = make_split(rng, classes, dims, per_class, margin, Split::Test);
  return out;
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, Split split) {
  const auto images = read_all(images_path);
  const auto labels = read_all(labels_path);
  check_magic(images, kImageMagic, "image file");
  check_magic(labels, kLabelMagic, "label file");

  const std::uint32_t n_images = be32(images, 4, "image file");
  const std::uint32_t rows = be32(images, 8, "image file");
  const std::uint32_t cols = be32(images, 12, "image file");
  const std::uint32_t n_labels = be32(labels, 4, "label file");
  if (n_images != n_labels) {
    throw CountMismatchError("IDX: " + std::to_string(n_images) + " images but " +
                             std::to_string(n_labels) + " labels");
  }
  const std::size_t pixels = std::size_t{rows} * cols;
  if (images.size() < 16 + pixels * n_images) {
    throw TruncatedFileError("image file: expected " + std::to_string(pixels * n_images) +
                             " pixel bytes, found " + std::to_string(images.size() - 16));
  }
  if (labels.size() < 8 + std::size_t{n_labels}) {
    throw TruncatedFileError("label file: expected " + std::to_string(n_labels) +
                             " labels, found " + std::to_string(labels.size() - 8));
  }

  Dataset d;
  d.split = split;
  d.inputs = Matrix(pixels, n_images);
  d.labels.reserve(n_labels);
  for (std::size_t j = 0; j < n_images; ++j) {
    const std::size_t base = 16 + j * pixels;
    for (std::size_t i = 0; i < pixels; ++i) d.inputs(i, j) = images[base + i] / 255.0;
    d.labels.push_back(labels[8 + j]);
  }
  const auto top = std::max_element(d.labels.begin(), d.labels.end());
  d.classes = top == d.labels.end() ? 0 : *top + 1;
  return d;
}

}  // namespace satact
