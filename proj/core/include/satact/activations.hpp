#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace satact {

enum class ActivationKind { Sigmoid, ScaledSigmoid, Tanh, PenalizedTanh, Relu, LeakyRelu };

inline constexpr double kDefaultLeak = 0.25;

inline constexpr std::array<ActivationKind, 6> kAllActivationKinds = {
    ActivationKind::Sigmoid,       ActivationKind::ScaledSigmoid, ActivationKind::Tanh,
    ActivationKind::PenalizedTanh, ActivationKind::Relu,          ActivationKind::LeakyRelu};

// An activation function together with its negative-side leak a.
//
// The leak only matters for PenalizedTanh (a * tanh(x) for x <= 0) and
// LeakyRelu (a * x for x <= 0). It must lie in (0, 1]; a = 1 is accepted as the
// degenerate case where both reduce to their un-leaked parent.
class Activation {
 public:
  explicit Activation(ActivationKind kind, double leak = kDefaultLeak);

  ActivationKind kind() const noexcept { return kind_; }
  double leak() const noexcept { return leak_; }
  bool has_leak() const noexcept {
    return kind_ == ActivationKind::PenalizedTanh || kind_ == ActivationKind::LeakyRelu;
  }
  // Functions with a derivative jump at 0.
  bool is_kinked() const noexcept;

  // Stable lowercase identifier, e.g. "penalized_tanh".
  std::string_view name() const noexcept;
  // name(), plus ":<leak>" when the leak differs from the default.
  std::string label() const;

  bool operator==(const Activation&) const = default;

 private:
  ActivationKind kind_;
  double leak_;
};

std::string_view activation_name(ActivationKind kind) noexcept;
// Accepts "name" or "name:leak". Throws ParameterError for unknown names.
Activation parse_activation(std::string_view spec);

// Origin coefficients of f(x) ~ alpha * x + beta.
struct LinearRegime {
  double alpha;
  double beta;
  bool operator==(const LinearRegime&) const = default;
};

double apply(const Activation& act, double x) noexcept;

// apply() evaluated in extended precision; used by finite-difference oracles.
long double apply_extended(const Activation& act, long double x) noexcept;

// Exact derivative. At x = 0 the kinked kinds return the right-hand derivative
// (1 for Relu, LeakyRelu and PenalizedTanh).
double derivative(const Activation& act, double x) noexcept;

// (f'(0+), f(0)) in closed form.
LinearRegime linear_regime(const Activation& act) noexcept;

// Maclaurin coefficients c_0..c_order estimated by central finite differences.
// Kinked kinds are expanded on their x > 0 branch (right-hand limits). Only
// order <= 3 is supported; larger orders throw UnsupportedOrderError.
std::vector<double> taylor_coefficients(const Activation& act, std::size_t order);

}  // namespace satact
