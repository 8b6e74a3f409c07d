#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "satact/dataset.hpp"
#include "satact/network.hpp"

namespace satact {

struct LrSchedule {
  enum class Kind { Constant, Step };
  Kind kind = Kind::Constant;
  double factor = 0.1;     // Step: multiply the rate by this ...
  std::size_t every = 10;  // ... after every `every` epochs

  // Rate for 1-based `epoch`.
  double rate(double base, std::size_t epoch) const noexcept;
};

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  LrSchedule schedule{};
  std::uint64_t seed = 0;  // mini-batch shuffle stream
  std::size_t eval_every = 1;

  // Throws ParameterError. A learning rate of exactly 0 is accepted so that a
  // frozen baseline can be recorded.
  void validate() const;
};

struct TrainRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  bool operator==(const TrainRecord&) const = default;
};

enum class TrainStatus { Completed, Diverged };

std::string_view status_name(TrainStatus status) noexcept;

struct TrainResult {
  std::vector<TrainRecord> records;
  TrainStatus status = TrainStatus::Completed;
  // 1-based epoch in which a non-finite loss appeared; 0 when Completed.
  std::size_t diverged_epoch = 0;
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Mean loss and accuracy over the whole dataset, in fixed-size chunks.
Evaluation evaluate(const Network& net, const Dataset& data);

// Plain SGD. Each epoch reshuffles the training indices with a stream seeded
// by cfg.seed, then records full-pass train loss/accuracy and test accuracy
// every eval_every epochs and at the last epoch. A non-finite loss stops
// training with status Diverged; records up to that point are kept.
TrainResult train(Network& net, const TrainConfig& cfg, const Dataset& train_data,
                  const Dataset& test_data);

// First recorded epoch whose train loss is <= target.
std::optional<std::size_t> epochs_to_target(std::span<const TrainRecord> records, double target);

struct ArmResult {
  Activation activation;
  TrainResult result;
};

// Trains one copy of `base` per activation. All arms share the seed, init
// scheme and schedule, so their initial weights are identical.
std::vector<ArmResult> compare_activations(const NetworkConfig& base, const TrainConfig& cfg,
                                           std::span<const Activation> activations,
                                           const Dataset& train_data, const Dataset& test_data);

// Header: epoch,train_loss,train_acc,test_acc
void write_records_csv(std::ostream& out, std::span<const TrainRecord> records);

}  // namespace satact
