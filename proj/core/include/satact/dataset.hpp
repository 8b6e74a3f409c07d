#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "satact/tensor.hpp"

namespace satact {

class Rng;

enum class Split { Train, Test };

// Samples are columns of `inputs` (dims x N); labels[j] belongs to column j.
struct Dataset {
  Matrix inputs;
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
  Split split = Split::Train;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dims() const noexcept { return inputs.rows(); }
  // Throws DimensionError / ParameterError if labels and inputs disagree.
  void validate() const;
  // Columns `indices` as a new dataset (same split and class count).
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct SplitDatasets {
  Dataset train;
  Dataset test;
};

// Isotropic unit-variance Gaussian clusters. Class k is centred at
// sqrt(2) * margin * e_k, so any two centres are 2 * margin apart. The train
// split is drawn first (class-major order, per_class samples per class), then
// the test split of the same size from the continuing stream.
// Requires classes >= 2, dims >= classes, per_class >= 1, margin >= 0.
SplitDatasets synth_classification(Rng& rng, std::size_t classes, std::size_t dims,
                                   std::size_t per_class, double margin);

// Reads an IDX3 image file (magic 0x00000803) and an IDX1 label file (magic
// 0x00000801), both big-endian. Pixels are scaled to [0, 1] and each image is
// flattened row-major into one column. Throws BadMagicError,
// TruncatedFileError or CountMismatchError; IoError if a file cannot be opened.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path, Split split = Split::Train);

}  // namespace satact
