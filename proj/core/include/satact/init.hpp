#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "satact/tensor.hpp"

namespace satact {

class Rng;

enum class InitKind {
  FanIn,         // variance gain^2 / n_in
  XavierGlorot,  // variance 2 gain^2 / (n_in + n_out)
  ScaledFanIn,   // variance 16 gain^2 / n_in; compensates a slope of 1/4
};

struct InitScheme {
  InitKind kind = InitKind::FanIn;
  double gain = 1.0;

  // Throws ParameterError unless gain > 0 and finite.
  void validate() const;
  bool operator==(const InitScheme&) const = default;
};

std::string_view init_name(InitKind kind) noexcept;
// "fan_in", "xavier", "scaled_fan_in".
InitKind parse_init_kind(std::string_view name);

// sigma^2 the scheme assigns to an n_out x n_in weight matrix.
double weight_variance(const InitScheme& scheme, std::size_t n_out, std::size_t n_in);

// Zero-mean Gaussian n_out x n_in weights with weight_variance() variance.
Matrix init_weights(const InitScheme& scheme, Rng& rng, std::size_t n_out, std::size_t n_in);

// n_out x 1 zeros.
Matrix init_bias(std::size_t n_out);

// Seed of layer l's weight stream: master seed + l.
constexpr std::uint64_t layer_seed(std::uint64_t master, std::size_t layer) noexcept {
  return master + static_cast<std::uint64_t>(layer);
}

}  // namespace satact
