#include "satact/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "satact/error.hpp"
#include "satact/rng.hpp"

namespace satact {

void NetworkConfig::validate() const {
  if (widths.size() < 2) {
    throw ParameterError("network: need at least an input and an output width");
  }
  for (std::size_t w : widths) {
    if (w == 0) throw ParameterError("network: widths must be >= 1");
  }
  init.validate();
}

Network::Network(NetworkConfig config, std::vector<Matrix> weights, std::vector<Matrix> biases)
    : config_(std::move(config)), weights_(std::move(weights)), biases_(std::move(biases)) {
  config_.validate();
  const std::size_t layers = config_.depth();
  if (weights_.size() != layers || biases_.size() != layers) {
    throw DimensionError("network: expected " + std::to_string(layers) +
                         " weight and bias matrices");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const auto n_in = config_.widths[l];
    const auto n_out = config_.widths[l + 1];
    if (weights_[l].rows() != n_out || weights_[l].cols() != n_in) {
      throw DimensionError("network: W^(" + std::to_string(l) + ") is " +
                           weights_[l].shape_string() + ", expected " + std::to_string(n_out) +
                           "x" + std::to_string(n_in));
    }
    if (biases_[l].rows() != n_out || biases_[l].cols() != 1) {
      throw DimensionError("network: b^(" + std::to_string(l) + ") is " +
                           biases_[l].shape_string() + ", expected " + std::to_string(n_out) +
                           "x1");
    }
  }
}

std::size_t Network::parameter_count() const noexcept {
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) total += weights_[l].size() + biases_[l].size();
  return total;
}

Network Network::with_activation(const Activation& act) const {
  NetworkConfig cfg = config_;
  cfg.activation = act;
  return Network(std::move(cfg), weights_, biases_);
}

Network build(const NetworkConfig& config) {
  config.validate();
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;
  for (std::size_t l = 0; l < config.depth(); ++l) {
    Rng rng(layer_seed(config.seed, l));
    weights.push_back(init_weights(config.init, rng, config.widths[l + 1], config.widths[l]));
    biases.push_back(init_bias(config.widths[l + 1]));
  }
  return Network(config, std::move(weights), std::move(biases));
}

ForwardTape forward(const Network& net, const Matrix& batch) {
  const auto& widths = net.config().widths;
  if (batch.rows() != widths.front()) {
    throw DimensionError("forward: batch has " + std::to_string(batch.rows()) +
                         " rows, network input width is " + std::to_string(widths.front()));
  }
  const std::size_t layers = net.depth();
  ForwardTape tape;
  tape.pre.resize(layers + 1);
  tape.post.reserve(layers + 1);
  tape.post.push_back(batch);
  for (std::size_t l = 1; l <= layers; ++l) {
    tape.pre[l] = add_column_bias(matmul(net.weights()[l - 1], tape.post[l - 1]), net.biases()[l - 1]);
    if (l == layers) {
      tape.post.push_back(tape.pre[l]);
    } else {
      Matrix y = tape.pre[l];
      for (double& v : y.data()) v = apply(net.activation(), v);
      tape.post.push_back(std::move(y));
    }
  }
  return tape;
}

Gradients backward(const Network& net, const ForwardTape& tape, const Matrix& dlogits,
                   const BackwardHooks& hooks) {
  const std::size_t layers = net.depth();
  if (tape.post.size() != layers + 1 || tape.pre.size() != layers + 1) {
    throw DimensionError("backward: tape depth does not match network");
  }
  const Matrix& logits = tape.logits();
  if (dlogits.rows() != logits.rows() || dlogits.cols() != logits.cols()) {
    throw DimensionError("backward: dlogits " + dlogits.shape_string() + " vs logits " +
                         logits.shape_string());
  }
  for (std::size_t l = 1; l <= layers; ++l) {
    if (tape.pre[l].rows() != net.config().widths[l]) {
      throw DimensionError("backward: tape layer " + std::to_string(l) +
                           " width does not match network");
    }
  }

  Gradients g;
  g.d_weights.resize(layers);
  g.d_biases.resize(layers);
  g.d_outputs.resize(layers + 1);
  g.d_outputs[layers] = dlogits;

  for (std::size_t l = layers; l >= 1; --l) {
    // d cost / d x^(l)
    Matrix dx = g.d_outputs[l];
    if (l != layers) {
      const auto pre = tape.pre[l].data();
      auto d = dx.data();
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] *= derivative(net.activation(), pre[i]) + hooks.derivative_offset;
      }
    }
    g.d_weights[l - 1] = matmul_a_bt(dx, tape.post[l - 1]);
    g.d_biases[l - 1] = row_sums(dx);
    g.d_outputs[l - 1] = matmul_at_b(net.weights()[l - 1], dx);
  }
  return g;
}

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels) {
  if (labels.size() != logits.cols()) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(logits.cols()) + " columns");
  }
  const std::size_t classes = logits.rows();
  const std::size_t batch = logits.cols();
  for (std::size_t label : labels) {
    if (label >= classes) {
      throw ParameterError("softmax_cross_entropy: label " + std::to_string(label) +
                           " out of range for " + std::to_string(classes) + " classes");
    }
  }

  LossResult out;
  out.dlogits = Matrix(classes, batch);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  double total = 0.0;
  for (std::size_t j = 0; j < batch; ++j) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < classes; ++i) peak = std::max(peak, logits(i, j));
    double denom = 0.0;
    for (std::size_t i = 0; i < classes; ++i) denom += std::exp(logits(i, j) - peak);
    const double log_denom = std::log(denom);
    total += log_denom - (logits(labels[j], j) - peak);
    for (std::size_t i = 0; i < classes; ++i) {
      const double p = std::exp(logits(i, j) - peak - log_denom);
      out.dlogits(i, j) = (p - (i == labels[j] ? 1.0 : 0.0)) * inv_batch;
    }
  }
  out.loss = total * inv_batch;
  return out;
}

double accuracy(const Matrix& logits, std::span<const std::size_t> labels) {
  if (labels.size() != logits.cols()) {
    throw DimensionError("accuracy: label count does not match batch");
  }
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t j = 0; j < logits.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.rows(); ++i) {
      if (logits(i, j) > logits(best, j)) best = i;
    }
    if (best == labels[j]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

namespace {

// Independent extended-precision forward pass for the finite-difference side
// of gradient_check. Parameters are flattened layer by layer, W^(l) row-major
// followed by b^(l), matching the order gradient_check walks them.
class ExtendedLossProbe {
 public:
  ExtendedLossProbe(const Network& net, const Matrix& batch, std::span<const std::size_t> labels)
      : net_(net), labels_(labels), widths_(net.config().widths), batch_cols_(batch.cols()) {
    for (std::size_t l = 0; l < net.depth(); ++l) {
      offsets_.push_back(params_.size());
      for (double v : net.weights()[l].data()) params_.push_back(v);
      for (double v : net.biases()[l].data()) params_.push_back(v);
    }
    for (double v : batch.data()) input_.push_back(v);
  }

  std::size_t size() const noexcept { return params_.size(); }
  long double value(std::size_t i) const noexcept { return params_[i]; }

  long double loss_with(std::size_t index, long double value) {
    const long double saved = params_[index];
    params_[index] = value;
    const long double out = loss();
    params_[index] = saved;
    return out;
  }

 private:
  long double loss() const {
    const std::size_t layers = widths_.size() - 1;
    std::vector<long double> y = input_;
    std::vector<long double> x;
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t n_in = widths_[l];
      const std::size_t n_out = widths_[l + 1];
      const long double* w = params_.data() + offsets_[l];
      const long double* b = w + n_out * n_in;
      x.assign(n_out * batch_cols_, 0.0L);
      for (std::size_t i = 0; i < n_out; ++i) {
        for (std::size_t j = 0; j < batch_cols_; ++j) {
          long double acc = b[i];
          for (std::size_t k = 0; k < n_in; ++k) acc += w[i * n_in + k] * y[k * batch_cols_ + j];
          x[i * batch_cols_ + j] = l + 1 == layers ? acc : apply_extended(net_.activation(), acc);
        }
      }
      y.swap(x);
    }
    const std::size_t classes = widths_.back();
    long double total = 0.0L;
    for (std::size_t j = 0; j < batch_cols_; ++j) {
      long double peak = y[j];
      for (std::size_t i = 1; i < classes; ++i) peak = std::max(peak, y[i * batch_cols_ + j]);
      long double denom = 0.0L;
      for (std::size_t i = 0; i < classes; ++i) denom += std::exp(y[i * batch_cols_ + j] - peak);
      total += std::log(denom) - (y[labels_[j] * batch_cols_ + j] - peak);
    }
    return total / static_cast<long double>(batch_cols_);
  }

  const Network& net_;
  std::span<const std::size_t> labels_;
  std::vector<std::size_t> widths_;
  std::size_t batch_cols_;
  std::vector<std::size_t> offsets_;
  std::vector<long double> params_;
  std::vector<long double> input_;
};

}  // namespace

GradientCheckResult gradient_check(const Network& net, const Matrix& batch,
                                   std::span<const std::size_t> labels, double h,
                                   const BackwardHooks& hooks, std::size_t max_parameters) {
  if (!(h > 0.0)) throw ParameterError("gradient_check: h must be > 0");

  const ForwardTape tape = forward(net, batch);
  const LossResult loss = softmax_cross_entropy(tape.logits(), labels);
  const Gradients grads = backward(net, tape, loss.dlogits, hooks);

  GradientCheckResult result;
  result.min_kink_distance = std::numeric_limits<double>::infinity();
  for (std::size_t l = 1; l + 1 < tape.pre.size(); ++l) {
    for (double v : tape.pre[l].data()) {
      result.min_kink_distance = std::min(result.min_kink_distance, std::abs(v));
    }
  }

  std::vector<double> analytic;
  analytic.reserve(net.parameter_count());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    for (double v : grads.d_weights[l].data()) analytic.push_back(v);
    for (double v : grads.d_biases[l].data()) analytic.push_back(v);
  }

  ExtendedLossProbe probe(net, batch, labels);
  const std::size_t total = probe.size();
  const std::size_t stride =
      (max_parameters == 0 || total <= max_parameters) ? 1 : (total + max_parameters - 1) / max_parameters;
  const long double step = h;
  for (std::size_t i = 0; i < total; i += stride) {
    const long double x = probe.value(i);
    const long double up = probe.loss_with(i, x + step);
    const long double down = probe.loss_with(i, x - step);
    const auto numeric = static_cast<double>((up - down) / (2.0L * step));
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
    const double rel = std::abs(a - numeric) / denom;
    if (rel > result.max_relative_error || result.parameters_checked == 0) {
      result.max_relative_error = rel;
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
    ++result.parameters_checked;
  }
  return result;
}

Matrix sample_kink_free_batch(const Network& net, Rng& rng, std::size_t batch,
                              double min_distance, std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Matrix candidate = sample_normal(rng, 0.0, 1.0, net.config().widths.front(), batch);
    const ForwardTape tape = forward(net, candidate);
    bool clear = true;
    for (std::size_t l = 1; clear && l + 1 < tape.pre.size(); ++l) {
      for (double v : tape.pre[l].data()) {
        if (std::abs(v) < min_distance) {
          clear = false;
          break;
        }
      }
    }
    if (clear) return candidate;
  }
  throw ParameterError("sample_kink_free_batch: no batch cleared the kink margin after " +
                       std::to_string(max_attempts) + " attempts");
}

void sgd_step(Network& net, const Gradients& grads, double learning_rate) {
  for (std::size_t l = 0; l < net.depth(); ++l) {
    auto w = net.weights()[l].data();
    const auto dw = grads.d_weights[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * dw[i];
    auto b = net.biases()[l].data();
    const auto db = grads.d_biases[l].data();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= learning_rate * db[i];
  }
}

}  // namespace satact
