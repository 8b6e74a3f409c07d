#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "satact/activations.hpp"
#include "satact/init.hpp"
#include "satact/tensor.hpp"

namespace satact {

class Rng;

// A depth-L network whose activation is exactly f(x) = alpha * x + beta at
// every layer 1..L, with i.i.d. zero-mean weights of variance sigma_sq[l] in
// W^(l) and zero biases.
struct LinearNetSpec {
  std::vector<std::size_t> widths;  // n_0..n_L
  double alpha = 1.0;
  double beta = 0.0;
  std::vector<double> sigma_sq;     // sigma_0^2..sigma_{L-1}^2
  double grad_top_var = 1.0;        // d_L
  double input_var = 1.0;           // c_0

  std::size_t depth() const noexcept { return widths.empty() ? 0 : widths.size() - 1; }
  // Throws ParameterError on inconsistent lengths or non-positive variances.
  void validate() const;
};

enum class ProfileSource { Analytic, Empirical };

// Per-layer scalar variances, indexed by layer: act_var[l] = c_l and
// grad_var[l] = d_l for l = 0..L.
struct VarianceProfile {
  ProfileSource source = ProfileSource::Analytic;
  std::vector<double> act_var;
  std::vector<double> grad_var;

  // Empirical only: coefficient of variation of the per-unit variances inside
  // each layer (0 when every unit agrees).
  std::vector<double> act_unit_spread;
  std::vector<double> grad_unit_spread;
  // Empirical only, when covariance tracking is on: max |off-diagonal| of the
  // layer's sample covariance divided by the mean of its diagonal.
  std::vector<double> act_offdiag_ratio;
  std::vector<double> grad_offdiag_ratio;
};

// c_l = alpha^2 n_{l-1} sigma_{l-1}^2 (c_{l-1} + beta^2), c_0 = input_var.
std::vector<double> forward_variance(const LinearNetSpec& spec);

// d_{l-1} = alpha^2 n_l sigma_{l-1}^2 d_l, d_L = grad_top_var. Indexed by layer.
std::vector<double> backward_variance(const LinearNetSpec& spec);

VarianceProfile analytic_profile(const LinearNetSpec& spec);

// The linear-regime prediction for a real activation and init scheme:
// (alpha, beta) from linear_regime(act), sigma^2 from the scheme, d_L = 1.
LinearNetSpec linearized_spec(std::span<const std::size_t> widths, const Activation& act,
                              const InitScheme& scheme, double input_var);

// E[W y y^T W^T] = (C n sigma^2 + sigma^2 |E y|^2) I_m, for W m x n.
Matrix lemma1_analytic(double C, std::size_t n, std::size_t m, double sigma_sq,
                       std::span<const double> mean_y);

// Sample mean of (W y)(W y)^T over `trials` independent Gaussian draws of
// W (i.i.d. N(0, sigma_sq)) and y (independent N(mean_y_i, C)).
Matrix lemma1_empirical(Rng& rng, double C, std::size_t n, std::size_t m, double sigma_sq,
                        std::span<const double> mean_y, std::size_t trials);

struct MonteCarloOptions {
  std::size_t batch = 100;    // inputs pushed through each sampled network
  std::size_t trials = 100;   // independently sampled networks
  bool track_covariance = false;
};

// Monte Carlo over random linear networks drawn exactly per `spec`.
//
// Each trial t draws its weights, a batch of inputs y^(0) ~ N(beta, c_0) and
// top gradients ~ N(0, d_L) from Rng(mix_seed(s, t)), where s is one draw
// from `rng`. Inputs carry mean beta so that E[y^(l)] = beta at every layer,
// including l = 0, as the recursion assumes. Per-unit variances are pooled
// over all batch * trials samples, then averaged over the layer's units.
VarianceProfile empirical_linear_profile(Rng& rng, const LinearNetSpec& spec,
                                         const MonteCarloOptions& options);

// The same estimator for a real (nonlinear) activation applied at every layer
// 1..L, weights drawn per `scheme`, inputs N(beta, input_var) with beta from
// linear_regime(act), and unit-variance synthetic top gradients.
// Requires widths.size() >= 2 and batch * trials >= 100.
VarianceProfile empirical_profile(Rng& rng, std::span<const std::size_t> widths,
                                  const Activation& act, const InitScheme& scheme,
                                  double input_var, const MonteCarloOptions& options);

// CSV with header
//   layer,analytic_act_var,empirical_act_var,analytic_grad_var,empirical_grad_var
void write_profile_csv(std::ostream& out, const VarianceProfile& analytic,
                       const VarianceProfile& empirical);

}  // namespace satact
