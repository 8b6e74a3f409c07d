#include "satact/varprop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "satact/error.hpp"
#include "satact/format.hpp"
#include "satact/rng.hpp"

namespace satact {
namespace {

// Pooled per-unit moments for one layer, merged batch by batch (Chan et al.)
// in a fixed order so aggregates are reproducible.
class LayerMoments {
 public:
  LayerMoments(std::size_t units, bool track_covariance)
      : mean_(units, 0.0), m2_(units, 0.0), track_(track_covariance) {
    if (track_) {
      sum_.assign(units, 0.0);
      cross_.assign(units * units, 0.0);
    }
  }

  // Adds every column of `samples` (units x batch) as one observation.
  void add(const Matrix& samples) {
    const auto nb = static_cast<double>(samples.cols());
    for (std::size_t i = 0; i < samples.rows(); ++i) {
      double batch_mean = 0.0;
      for (double v : samples.row(i)) batch_mean += v;
      batch_mean /= nb;
      double batch_m2 = 0.0;
      for (double v : samples.row(i)) batch_m2 += (v - batch_mean) * (v - batch_mean);
      const double total = count_ + nb;
      const double delta = batch_mean - mean_[i];
      mean_[i] += delta * nb / total;
      m2_[i] += batch_m2 + delta * delta * count_ * nb / total;
    }
    if (track_) {
      const std::size_t n = samples.rows();
      for (std::size_t i = 0; i < n; ++i) {
        for (double v : samples.row(i)) sum_[i] += v;
      }
      const Matrix outer = matmul_a_bt(samples, samples);
      for (std::size_t k = 0; k < n * n; ++k) cross_[k] += outer.data()[k];
    }
    count_ += nb;
  }

  std::vector<double> unit_variances() const {
    std::vector<double> out(m2_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m2_[i] / (count_ - 1.0);
    return out;
  }

  double offdiag_ratio() const {
    const std::size_t n = mean_.size();
    if (!track_ || n < 2) return 0.0;
    auto cov = [&](std::size_t i, std::size_t j) {
      return (cross_[i * n + j] - sum_[i] * sum_[j] / count_) / (count_ - 1.0);
    };
    double diag = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += cov(i, i);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) worst = std::max(worst, std::abs(cov(i, j)));
      }
    }
    diag /= static_cast<double>(n);
    return diag > 0.0 ? worst / diag : 0.0;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> m2_;
  double count_ = 0.0;
  bool track_;
  std::vector<double> sum_;
  std::vector<double> cross_;
};

struct LayerSummary {
  double mean = 0.0;
  double spread = 0.0;
};

LayerSummary summarize(const std::vector<double>& unit_vars) {
  LayerSummary s;
  for (double v : unit_vars) s.mean += v;
  s.mean /= static_cast<double>(unit_vars.size());
  double sq = 0.0;
  for (double v : unit_vars) sq += (v - s.mean) * (v - s.mean);
  const double sd = unit_vars.size() > 1 ? std::sqrt(sq / static_cast<double>(unit_vars.size() - 1)) : 0.0;
  s.spread = s.mean > 0.0 ? sd / s.mean : 0.0;
  return s;
}

struct SimulationSetup {
  std::vector<std::size_t> widths;
  std::vector<double> weight_std;  // per layer
  double input_mean = 0.0;
  double input_var = 1.0;
  double grad_top_var = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> df;
};

VarianceProfile simulate(Rng& rng, const SimulationSetup& setup, const MonteCarloOptions& options) {
  if (options.batch == 0 || options.trials == 0) {
    throw ParameterError("Monte Carlo: batch and trials must be >= 1");
  }
  if (options.batch * options.trials < 2) {
    throw ParameterError("Monte Carlo: need at least 2 samples per unit");
  }
  const std::size_t layers = setup.widths.size() - 1;
  std::vector<LayerMoments> act;
  std::vector<LayerMoments> grad;
  for (std::size_t w : setup.widths) {
    act.emplace_back(w, options.track_covariance);
    grad.emplace_back(w, options.track_covariance);
  }

  const std::uint64_t base = rng.next();
  const double input_std = std::sqrt(setup.input_var);
  const double grad_std = std::sqrt(setup.grad_top_var);

  for (std::size_t t = 0; t < options.trials; ++t) {
    Rng trial(mix_seed(base, t));
    std::vector<Matrix> weights;
    weights.reserve(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      weights.push_back(sample_normal(trial, 0.0, setup.weight_std[l], setup.widths[l + 1], setup.widths[l]));
    }
    Matrix y = sample_normal(trial, setup.input_mean, input_std, setup.widths[0], options.batch);
    act[0].add(y);

    std::vector<Matrix> pre(layers + 1);
    for (std::size_t l = 1; l <= layers; ++l) {
      pre[l] = matmul(weights[l - 1], y);
      y = pre[l];
      for (double& v : y.data()) v = setup.f(v);
      act[l].add(y);
    }

    Matrix dy = sample_normal(trial, 0.0, grad_std, setup.widths[layers], options.batch);
    grad[layers].add(dy);
    for (std::size_t l = layers; l >= 1; --l) {
      const auto x = pre[l].data();
      auto d = dy.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= setup.df(x[i]);
      dy = matmul_at_b(weights[l - 1], dy);
      grad[l - 1].add(dy);
    }
  }

  VarianceProfile profile;
  profile.source = ProfileSource::Empirical;
  for (std::size_t l = 0; l <= layers; ++l) {
    const LayerSummary a = summarize(act[l].unit_variances());
    const LayerSummary g = summarize(grad[l].unit_variances());
    profile.act_var.push_back(a.mean);
    profile.act_unit_spread.push_back(a.spread);
    profile.grad_var.push_back(g.mean);
    profile.grad_unit_spread.push_back(g.spread);
    if (options.track_covariance) {
      profile.act_offdiag_ratio.push_back(act[l].offdiag_ratio());
      profile.grad_offdiag_ratio.push_back(grad[l].offdiag_ratio());
    }
  }
  return profile;
}

}  // namespace

void LinearNetSpec::validate() const {
  if (widths.size() < 2) throw ParameterError("LinearNetSpec: need at least two widths");
  for (std::size_t w : widths) {
    if (w == 0) throw ParameterError("LinearNetSpec: widths must be >= 1");
  }
  if (sigma_sq.size() != widths.size() - 1) {
    throw ParameterError("LinearNetSpec: expected " + std::to_string(widths.size() - 1) +
                         " weight variances, got " + std::to_string(sigma_sq.size()));
  }
  for (double s : sigma_sq) {
    if (!(s > 0.0)) throw ParameterError("LinearNetSpec: weight variances must be > 0");
  }
  if (!(grad_top_var > 0.0)) throw ParameterError("LinearNetSpec: grad_top_var must be > 0");
  if (!(input_var > 0.0)) throw ParameterError("LinearNetSpec: input_var must be > 0");
}

std::vector<double> forward_variance(const LinearNetSpec& spec) {
  spec.validate();
  std::vector<double> c{spec.input_var};
  const double a2 = spec.alpha * spec.alpha;
  const double b2 = spec.beta * spec.beta;
  for (std::size_t l = 1; l <= spec.depth(); ++l) {
    const auto fan_in = static_cast<double>(spec.widths[l - 1]);
    c.push_back(a2 * fan_in * spec.sigma_sq[l - 1] * (c.back() + b2));
  }
  return c;
}

std::vector<double> backward_variance(const LinearNetSpec& spec) {
  spec.validate();
  const std::size_t layers = spec.depth();
  std::vector<double> d(layers + 1);
  d[layers] = spec.grad_top_var;
  const double a2 = spec.alpha * spec.alpha;
  for (std::size_t l = layers; l >= 1; --l) {
    const auto fan_out = static_cast<double>(spec.widths[l]);
    d[l - 1] = a2 * fan_out * spec.sigma_sq[l - 1] * d[l];
  }
  return d;
}

VarianceProfile analytic_profile(const LinearNetSpec& spec) {
  VarianceProfile p;
  p.source = ProfileSource::Analytic;
  p.act_var = forward_variance(spec);
  p.grad_var = backward_variance(spec);
  return p;
}

LinearNetSpec linearized_spec(std::span<const std::size_t> widths, const Activation& act,
                              const InitScheme& scheme, double input_var) {
  if (widths.size() < 2) throw ParameterError("variance profile: need at least two widths");
  LinearNetSpec spec;
  spec.widths.assign(widths.begin(), widths.end());
  const LinearRegime lr = linear_regime(act);
  spec.alpha = lr.alpha;
  spec.beta = lr.beta;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    spec.sigma_sq.push_back(weight_variance(scheme, widths[l + 1], widths[l]));
  }
  spec.grad_top_var = 1.0;
  spec.input_var = input_var;
  spec.validate();
  return spec;
}

Matrix lemma1_analytic(double C, std::size_t n, std::size_t m, double sigma_sq,
                       std::span<const double> mean_y) {
  if (mean_y.size() != n) {
    throw ParameterError("lemma1: mean vector has length " + std::to_string(mean_y.size()) +
                         ", expected " + std::to_string(n));
  }
  if (!(C >= 0.0) || !(sigma_sq > 0.0) || m == 0) {
    throw ParameterError("lemma1: need C >= 0, sigma_sq > 0, m >= 1");
  }
  double norm_sq = 0.0;
  for (double v : mean_y) norm_sq += v * v;
  const double diag = C * static_cast<double>(n) * sigma_sq + sigma_sq * norm_sq;
  return diag * Matrix::identity(m);
}

Matrix lemma1_empirical(Rng& rng, double C, std::size_t n, std::size_t m, double sigma_sq,
                        std::span<const double> mean_y, std::size_t trials) {
  if (mean_y.size() != n) {
    throw ParameterError("lemma1: mean vector has length " + std::to_string(mean_y.size()) +
                         ", expected " + std::to_string(n));
  }
  if (trials == 0) throw ParameterError("lemma1_empirical: trials must be >= 1");
  if (!(C >= 0.0) || !(sigma_sq > 0.0) || m == 0) {
    throw ParameterError("lemma1: need C >= 0, sigma_sq > 0, m >= 1");
  }
  const double w_std = std::sqrt(sigma_sq);
  const double y_std = std::sqrt(C);
  Matrix acc(m, m);
  std::vector<double> y(n);
  std::vector<double> wy(m);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t j = 0; j < n; ++j) y[j] = mean_y[j] + y_std * rng.normal();
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += w_std * rng.normal() * y[j];
      wy[i] = s;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) acc(i, j) += wy[i] * wy[j];
  }
  return (1.0 / static_cast<double>(trials)) * acc;
}

VarianceProfile empirical_linear_profile(Rng& rng, const LinearNetSpec& spec,
                                         const MonteCarloOptions& options) {
  spec.validate();
  SimulationSetup setup;
  setup.widths = spec.widths;
  for (double s : spec.sigma_sq) setup.weight_std.push_back(std::sqrt(s));
  setup.input_mean = spec.beta;
  setup.input_var = spec.input_var;
  setup.grad_top_var = spec.grad_top_var;
  const double alpha = spec.alpha;
  const double beta = spec.beta;
  setup.f = [alpha, beta](double x) { return alpha * x + beta; };
  setup.df = [alpha](double) { return alpha; };
  return simulate(rng, setup, options);
}

VarianceProfile empirical_profile(Rng& rng, std::span<const std::size_t> widths,
                                  const Activation& act, const InitScheme& scheme,
                                  double input_var, const MonteCarloOptions& options) {
  if (widths.size() < 2) throw ParameterError("empirical_profile: need at least two widths");
  if (options.batch * options.trials < 100) {
    throw ParameterError("empirical_profile: batch * trials must be >= 100");
  }
  if (!(input_var > 0.0)) throw ParameterError("empirical_profile: input_var must be > 0");
  SimulationSetup setup;
  setup.widths.assign(widths.begin(), widths.end());
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    setup.weight_std.push_back(std::sqrt(weight_variance(scheme, widths[l + 1], widths[l])));
  }
  setup.input_mean = linear_regime(act).beta;
  setup.input_var = input_var;
  setup.grad_top_var = 1.0;
  setup.f = [act](double x) { return apply(act, x); };
  setup.df = [act](double x) { return derivative(act, x); };
  return simulate(rng, setup, options);
}

void write_profile_csv(std::ostream& out, const VarianceProfile& analytic,
                       const VarianceProfile& empirical) {
  if (analytic.act_var.size() != empirical.act_var.size() ||
      analytic.grad_var.size() != empirical.grad_var.size()) {
    throw DimensionError("write_profile_csv: profiles have different depths");
  }
  out << "layer,analytic_act_var,empirical_act_var,analytic_grad_var,empirical_grad_var\n";
  for (std::size_t l = 0; l < analytic.act_var.size(); ++l) {
    out << l << ',' << format_real(analytic.act_var[l]) << ','
        << format_real(empirical.act_var[l]) << ',' << format_real(analytic.grad_var[l]) << ','
        << format_real(empirical.grad_var[l]) << '\n';
  }
}

}  // namespace satact
