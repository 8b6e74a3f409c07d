#include "satact/init.hpp"

#include <cmath>
#include <string>

#include "satact/error.hpp"
#include "satact/rng.hpp"

namespace satact {

void InitScheme::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw ParameterError("init scheme: gain must be positive, got " + std::to_string(gain));
  }
}

std::string_view init_name(InitKind kind) noexcept {
  switch (kind) {
    case InitKind::FanIn:
      return "fan_in";
    case InitKind::XavierGlorot:
      return "xavier";
    case InitKind::ScaledFanIn:
      return "scaled_fan_in";
  }
  return "unknown";
}

InitKind parse_init_kind(std::string_view name) {
  for (const InitKind kind : {InitKind::FanIn, InitKind::XavierGlorot, InitKind::ScaledFanIn}) {
    if (init_name(kind) == name) return kind;
  }
  throw ParameterError("unknown init scheme '" + std::string(name) + "'");
}

double weight_variance(const InitScheme& scheme, std::size_t n_out, std::size_t n_in) {
  scheme.validate();
  if (n_out == 0 || n_in == 0) {
    throw ParameterError("init: layer dimensions must be >= 1, got " + std::to_string(n_out) +
                         "x" + std::to_string(n_in));
  }
  const double g2 = scheme.gain * scheme.gain;
  const auto in = static_cast<double>(n_in);
  const auto out = static_cast<double>(n_out);
  switch (scheme.kind) {
    case InitKind::FanIn:
      return g2 / in;
    case InitKind::XavierGlorot:
      return 2.0 * g2 / (in + out);
    case InitKind::ScaledFanIn:
      return 16.0 * g2 / in;
  }
  return g2 / in;
}

Matrix init_weights(const InitScheme& scheme, Rng& rng, std::size_t n_out, std::size_t n_in) {
  const double var = weight_variance(scheme, n_out, n_in);
  return sample_normal(rng, 0.0, std::sqrt(var), n_out, n_in);
}

Matrix init_bias(std::size_t n_out) {
  if (n_out == 0) throw ParameterError("init_bias: n_out must be >= 1");
  return Matrix(n_out, 1, 0.0);
}

}  // namespace satact
