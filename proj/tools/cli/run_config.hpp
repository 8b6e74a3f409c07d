#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satact/activations.hpp"
#include "satact/error.hpp"
#include "satact/init.hpp"
#include "satact/train.hpp"

namespace satact::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class DatasetKind { Synthetic, Idx };

// Every knob a subcommand reads. Defaults are the desk-scale protocol; see
// README for the key reference.
struct RunConfig {
  std::uint64_t seed = 42;

  Activation activation{ActivationKind::Tanh};
  // Overrides the leak of `activation` when set, whatever the key order.
  std::optional<double> leak;
  std::vector<Activation> activations{
      Activation(ActivationKind::Sigmoid),       Activation(ActivationKind::ScaledSigmoid),
      Activation(ActivationKind::Tanh),          Activation(ActivationKind::PenalizedTanh),
      Activation(ActivationKind::Relu),          Activation(ActivationKind::LeakyRelu)};
  std::vector<std::size_t> widths{16, 32, 32, 32, 32, 32, 32, 32, 4};
  InitScheme init{};

  // plot
  double x_min = -4.0;
  double x_max = 4.0;
  std::size_t steps = 161;

  // varprop
  double input_var = 1.0;
  std::size_t batch = 100;
  std::size_t trials = 100;
  double varprop_tolerance = 0.05;

  // gradcheck
  std::vector<std::size_t> gradcheck_widths{3, 5, 5, 5, 3};
  std::size_t gradcheck_batch = 4;
  double gradcheck_h = 1e-5;
  double gradcheck_tolerance = 1e-6;
  double corrupt_derivative = 0.0;

  // train / compare
  DatasetKind dataset = DatasetKind::Synthetic;
  std::size_t classes = 4;
  std::size_t dims = 16;
  std::size_t per_class = 250;
  double margin = 2.0;
  std::string idx_train_images;
  std::string idx_train_labels;
  std::string idx_test_images;
  std::string idx_test_labels;
  TrainConfig train{};
  std::string reference_activation = "tanh";
  double target_loss = -1.0;  // < 0: derive from the reference arm
  bool save_model = false;

  // Applies one `key = value` assignment. Throws ConfigError for unknown keys
  // or unparsable values.
  void set(std::string_view key, std::string_view value);

  // `activation` with `leak` applied. Throws ConfigError for a bad leak.
  Activation resolved_activation() const;

  // Seeds derived from `seed`: the network uses seed itself.
  std::uint64_t shuffle_seed() const noexcept;
  std::uint64_t data_seed() const noexcept;
  std::uint64_t varprop_seed() const noexcept;
};

// Keys accepted by RunConfig::set, in documentation order.
const std::vector<std::string>& config_keys();

// Parses flat `key = value` lines; `#` starts a comment. Repeated keys are an
// error. Throws ConfigError (syntax) or IoError (unreadable file).
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace satact::cli
