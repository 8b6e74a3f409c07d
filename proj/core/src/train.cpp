#include "satact/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "satact/error.hpp"
#include "satact/format.hpp"
#include "satact/rng.hpp"

namespace satact {
namespace {

constexpr std::size_t kEvalChunk = 1024;

}  // namespace

double LrSchedule::rate(double base, std::size_t epoch) const noexcept {
  if (kind == Kind::Constant || every == 0 || epoch == 0) return base;
  const auto steps = static_cast<double>((epoch - 1) / every);
  return base * std::pow(factor, steps);
}

void TrainConfig::validate() const {
  if (epochs == 0) throw ParameterError("train: epochs must be >= 1");
  if (batch_size == 0) throw ParameterError("train: batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("train: learning_rate must be a finite non-negative number");
  }
  if (eval_every == 0) throw ParameterError("train: eval_every must be >= 1");
  if (schedule.kind == LrSchedule::Kind::Step && (schedule.every == 0 || !(schedule.factor > 0.0))) {
    throw ParameterError("train: step schedule needs every >= 1 and factor > 0");
  }
}

std::string_view status_name(TrainStatus status) noexcept {
  return status == TrainStatus::Completed ? "completed" : "diverged";
}

Evaluation evaluate(const Network& net, const Dataset& data) {
  Evaluation ev;
  if (data.size() == 0) return ev;
  double loss_sum = 0.0;
  double hits = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += kEvalChunk) {
    const std::size_t stop = std::min(data.size(), start + kEvalChunk);
    idx.resize(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    const Dataset chunk = data.subset(idx);
    const ForwardTape tape = forward(net, chunk.inputs);
    const auto n = static_cast<double>(chunk.size());
    loss_sum += softmax_cross_entropy(tape.logits(), chunk.labels).loss * n;
    hits += accuracy(tape.logits(), chunk.labels) * n;
  }
  const auto total = static_cast<double>(data.size());
  ev.loss = loss_sum / total;
  ev.accuracy = hits / total;
  return ev;
}

TrainResult train(Network& net, const TrainConfig& cfg, const Dataset& train_data,
                  const Dataset& test_data) {
  cfg.validate();
  train_data.validate();
  test_data.validate();
  if (train_data.dims() != net.config().widths.front() ||
      test_data.dims() != net.config().widths.front()) {
    throw DimensionError("train: data dimension does not match network input width");
  }
  if (train_data.classes > net.config().widths.back()) {
    throw DimensionError("train: more classes than network outputs");
  }

  TrainResult result;
  Rng shuffle_rng(cfg.seed);
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> batch_idx;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double lr = cfg.schedule.rate(cfg.learning_rate, epoch);
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                       order.begin() + static_cast<std::ptrdiff_t>(stop));
      const Dataset batch = train_data.subset(batch_idx);
      const ForwardTape tape = forward(net, batch.inputs);
      const LossResult loss = softmax_cross_entropy(tape.logits(), batch.labels);
      if (!std::isfinite(loss.loss)) {
        result.status = TrainStatus::Diverged;
        result.diverged_epoch = epoch;
        return result;
      }
      sgd_step(net, backward(net, tape, loss.dlogits), lr);
    }

    if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
      const Evaluation tr = evaluate(net, train_data);
      if (!std::isfinite(tr.loss)) {
        result.status = TrainStatus::Diverged;
        result.diverged_epoch = epoch;
        return result;
      }
      const Evaluation te = evaluate(net, test_data);
      result.records.push_back({epoch, tr.loss, tr.accuracy, te.accuracy});
    }
  }
  return result;
}

std::optional<std::size_t> epochs_to_target(std::span<const TrainRecord> records, double target) {
  for (const auto& r : records) {
    if (r.train_loss <= target) return r.epoch;
  }
  return std::nullopt;
}

std::vector<ArmResult> compare_activations(const NetworkConfig& base, const TrainConfig& cfg,
                                           std::span<const Activation> activations,
                                           const Dataset& train_data, const Dataset& test_data) {
  if (activations.size() < 2) {
    throw ParameterError("compare_activations: need at least two activations");
  }
  std::vector<ArmResult> arms;
  arms.reserve(activations.size());
  for (const Activation& act : activations) {
    NetworkConfig arm_cfg = base;
    arm_cfg.activation = act;
    Network net = build(arm_cfg);
    arms.push_back({act, train(net, cfg, train_data, test_data)});
  }
  return arms;
}

void write_records_csv(std::ostream& out, std::span<const TrainRecord> records) {
  out << "epoch,train_loss,train_acc,test_acc\n";
  for (const auto& r : records) {
    out << r.epoch << ',' << format_real(r.train_loss) << ',' << format_real(r.train_acc) << ','
        << format_real(r.test_acc) << '\n';
  }
}

}  // namespace satact
