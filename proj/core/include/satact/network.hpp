#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "satact/activations.hpp"
#include "satact/init.hpp"
#include "satact/tensor.hpp"

namespace satact {

class Rng;

// Fully connected net with widths n_0..n_L. The activation is applied at
// layers 1..L-1; layer L is affine and produces logits.
struct NetworkConfig {
  std::vector<std::size_t> widths;
  Activation activation{ActivationKind::Tanh};
  InitScheme init{};
  std::uint64_t seed = 0;

  std::size_t depth() const noexcept { return widths.empty() ? 0 : widths.size() - 1; }
  // Throws ParameterError unless L >= 1 and all widths >= 1.
  void validate() const;
};

class Network {
 public:
  // Takes ownership of explicit parameters; weights[l] must be
  // widths[l+1] x widths[l] and biases[l] widths[l+1] x 1.
  Network(NetworkConfig config, std::vector<Matrix> weights, std::vector<Matrix> biases);

  const NetworkConfig& config() const noexcept { return config_; }
  std::size_t depth() const noexcept { return config_.depth(); }
  const Activation& activation() const noexcept { return config_.activation; }

  const std::vector<Matrix>& weights() const noexcept { return weights_; }
  const std::vector<Matrix>& biases() const noexcept { return biases_; }
  // Mutable access for optimizers; shapes must be preserved.
  std::vector<Matrix>& weights() noexcept { return weights_; }
  std::vector<Matrix>& biases() noexcept { return biases_; }

  std::size_t parameter_count() const noexcept;

  // Replaces the activation without touching the parameters.
  Network with_activation(const Activation& act) const;

 private:
  NetworkConfig config_;
  std::vector<Matrix> weights_;
  std::vector<Matrix> biases_;
};

// Layer l weights are drawn from Rng(layer_seed(config.seed, l)), so the
// activation choice never perturbs the weight stream.
Network build(const NetworkConfig& config);

// Everything the backward pass needs from one forward pass over a batch
// (units x batch columns).
struct ForwardTape {
  // pre[l] = x^(l) for l = 1..L; pre[0] is left empty.
  std::vector<Matrix> pre;
  // post[l] = y^(l) for l = 0..L; post[0] is the input, post[L] the logits.
  std::vector<Matrix> post;

  const Matrix& logits() const { return post.back(); }
};

ForwardTape forward(const Network& net, const Matrix& batch);

struct Gradients {
  std::vector<Matrix> d_weights;  // d cost / d W^(l), l = 0..L-1
  std::vector<Matrix> d_biases;   // d cost / d b^(l), l = 0..L-1
  std::vector<Matrix> d_outputs;  // d cost / d y^(l), l = 0..L
};

// Negative-control hook: adds a constant to every f'(x) used by the backward
// pass. Leave at zero outside tests.
struct BackwardHooks {
  double derivative_offset = 0.0;
};

Gradients backward(const Network& net, const ForwardTape& tape, const Matrix& dlogits,
                   const BackwardHooks& hooks = {});

struct LossResult {
  double loss = 0.0;  // mean cross-entropy over the batch
  Matrix dlogits;     // d loss / d logits
};

// Max-subtracted log-softmax cross-entropy. labels[j] is the class of column j.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels);

// Fraction of columns whose arg-max logit equals the label.
double accuracy(const Matrix& logits, std::span<const std::size_t> labels);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
  // Smallest |x^(l)| over hidden pre-activations; kinked activations need this
  // comfortably above h for the comparison to be meaningful.
  double min_kink_distance = 0.0;
  // The parameter that produced max_relative_error.
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares backward() against central differences of the cross-entropy loss.
// The difference quotients come from a separate forward pass evaluated in
// long double, so rounding in the loss does not swamp small gradients (on
// hosts where long double is wider than double). Relative error per parameter
// is |a - n| / max(|a|, |n|, 1e-12). When the net has more than
// max_parameters parameters an evenly strided subset is checked.
GradientCheckResult gradient_check(const Network& net, const Matrix& batch,
                                   std::span<const std::size_t> labels, double h,
                                   const BackwardHooks& hooks = {},
                                   std::size_t max_parameters = 10000);

// Standard-normal batch (n_0 x batch) whose hidden pre-activations all sit at
// least min_distance from 0, the kink of Relu, LeakyRelu and PenalizedTanh.
// Redraws from `rng` up to max_attempts times, then throws ParameterError.
Matrix sample_kink_free_batch(const Network& net, Rng& rng, std::size_t batch,
                              double min_distance, std::size_t max_attempts = 1000);

// In-place plain SGD step.
void sgd_step(Network& net, const Gradients& grads, double learning_rate);

}  // namespace satact
