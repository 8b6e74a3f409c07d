#include "satact/activations.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "satact/error.hpp"

namespace satact {
namespace {

// Branch on sign so exp never sees a large positive argument.
double stable_sigmoid(double x) noexcept {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_slope(double x) noexcept {
  const double s = stable_sigmoid(x);
  return s * (1.0 - s);
}

double tanh_slope(double x) noexcept {
  const double t = std::tanh(x);
  return 1.0 - t * t;
}

// The x > 0 branch of each function, extended to all of R.
double positive_branch(ActivationKind kind, double x) noexcept {
  switch (kind) {
    case ActivationKind::PenalizedTanh:
      return std::tanh(x);
    case ActivationKind::Relu:
    case ActivationKind::LeakyRelu:
      return x;
    default:
      return 0.0;
  }
}

}  // namespace

Activation::Activation(ActivationKind kind, double leak) : kind_(kind), leak_(leak) {
  if (has_leak() && !(leak > 0.0 && leak <= 1.0)) {
    throw ParameterError("activation " + std::string(activation_name(kind)) +
                         ": leak must lie in (0, 1], got " + std::to_string(leak));
  }
  if (!has_leak()) leak_ = kDefaultLeak;
}

bool Activation::is_kinked() const noexcept {
  switch (kind_) {
    case ActivationKind::Relu:
      return true;
    case ActivationKind::PenalizedTanh:
    case ActivationKind::LeakyRelu:
      return leak_ != 1.0;
    default:
      return false;
  }
}

std::string_view Activation::name() const noexcept { return activation_name(kind_); }

std::string Activation::label() const {
  std::string out(name());
  if (has_leak() && leak_ != kDefaultLeak) {
    std::ostringstream os;
    os << ':' << leak_;
    out += os.str();
  }
  return out;
}

std::string_view activation_name(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::Sigmoid:
      return "sigmoid";
    case ActivationKind::ScaledSigmoid:
      return "scaled_sigmoid";
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::PenalizedTanh:
      return "penalized_tanh";
    case ActivationKind::Relu:
      return "relu";
    case ActivationKind::LeakyRelu:
      return "leaky_relu";
  }
  return "unknown";
}

Activation parse_activation(std::string_view spec) {
  std::string_view name = spec;
  double leak = kDefaultLeak;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    name = spec.substr(0, colon);
    const auto text = spec.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), leak);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParameterError("activation '" + std::string(spec) + "': leak is not a number");
    }
  }
  for (const ActivationKind kind : kAllActivationKinds) {
    if (activation_name(kind) == name) {
      const Activation act(kind, leak);
      if (!act.has_leak() && leak != kDefaultLeak) {
        throw ParameterError("activation '" + std::string(name) + "' takes no leak parameter");
      }
      return act;
    }
  }
  throw ParameterError("unknown activation '" + std::string(name) + "'");
}

double apply(const Activation& act, double x) noexcept {
  switch (act.kind()) {
    case ActivationKind::Sigmoid:
      return stable_sigmoid(x);
    case ActivationKind::ScaledSigmoid:
      return 4.0 * stable_sigmoid(x) - 2.0;
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::PenalizedTanh:
      return x > 0.0 ? std::tanh(x) : act.leak() * std::tanh(x);
    case ActivationKind::Relu:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::LeakyRelu:
      return x > 0.0 ? x : act.leak() * x;
  }
  return 0.0;
}

long double apply_extended(const Activation& act, long double x) noexcept {
  auto sigmoid = [](long double v) {
    if (v >= 0.0L) return 1.0L / (1.0L + std::exp(-v));
    const long double e = std::exp(v);
    return e / (1.0L + e);
  };
  const long double a = act.leak();
  switch (act.kind()) {
    case ActivationKind::Sigmoid:
      return sigmoid(x);
    case ActivationKind::ScaledSigmoid:
      return 4.0L * sigmoid(x) - 2.0L;
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::PenalizedTanh:
      return x > 0.0L ? std::tanh(x) : a * std::tanh(x);
    case ActivationKind::Relu:
      return x > 0.0L ? x : 0.0L;
    case ActivationKind::LeakyRelu:
      return x > 0.0L ? x : a * x;
  }
  return 0.0L;
}

double derivative(const Activation& act, double x) noexcept {
  switch (act.kind()) {
    case ActivationKind::Sigmoid:
      return sigmoid_slope(x);
    case ActivationKind::ScaledSigmoid:
      return 4.0 * sigmoid_slope(x);
    case ActivationKind::Tanh:
      return tanh_slope(x);
    case ActivationKind::PenalizedTanh:
      return x >= 0.0 ? tanh_slope(x) : act.leak() * tanh_slope(x);
    case ActivationKind::Relu:
      return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::LeakyRelu:
      return x >= 0.0 ? 1.0 : act.leak();
  }
  return 0.0;
}

LinearRegime linear_regime(const Activation& act) noexcept {
  switch (act.kind()) {
    case ActivationKind::Sigmoid:
      return {0.25, 0.5};
    case ActivationKind::ScaledSigmoid:
    case ActivationKind::Tanh:
    case ActivationKind::PenalizedTanh:
    case ActivationKind::Relu:
    case ActivationKind::LeakyRelu:
      return {1.0, 0.0};
  }
  return {0.0, 0.0};
}

std::vector<double> taylor_coefficients(const Activation& act, std::size_t order) {
  if (order > 3) {
    throw UnsupportedOrderError("taylor_coefficients: order " + std::to_string(order) +
                                " not supported (max 3)");
  }
  const bool kinked = act.is_kinked();
  auto f = [&](double x) { return kinked ? positive_branch(act.kind(), x) : apply(act, x); };

  // h balances O(h^2) truncation against O(eps / h^3) rounding in the
  // third-order stencil; both stay below 1e-8 for these functions.
  constexpr double h = 1e-2;
  const double f0 = f(0.0);
  const double fp1 = f(h);
  const double fm1 = f(-h);
  const double fp2 = f(2.0 * h);
  const double fm2 = f(-2.0 * h);

  std::vector<double> c{f0};
  if (order >= 1) c.push_back((fp1 - fm1) / (2.0 * h));
  if (order >= 2) c.push_back((fp1 - 2.0 * f0 + fm1) / (h * h) / 2.0);
  if (order >= 3) c.push_back((fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h) / 6.0);
  return c;
}

}  // namespace satact
