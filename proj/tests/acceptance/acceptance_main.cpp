// Acceptance suite: one PASS/FAIL line per criterion, each at its pinned
// tolerance and runtime budget. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/run_config.hpp"
#include "satact/activations.hpp"
#include "satact/dataset.hpp"
#include "satact/format.hpp"
#include "satact/network.hpp"
#include "satact/rng.hpp"
#include "satact/train.hpp"
#include "satact/varprop.hpp"

namespace fs = std::filesystem;
using namespace satact;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome taylor() {
  const std::vector<double> sig{0.5, 0.25, 0.0, -1.0 / 48.0};
  const std::vector<double> th{0.0, 1.0, 0.0, -1.0 / 3.0};
  const auto s = taylor_coefficients(Activation(ActivationKind::Sigmoid), 3);
  const auto t = taylor_coefficients(Activation(ActivationKind::Tanh), 3);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    worst = std::max({worst, std::abs(s[i] - sig[i]), std::abs(t[i] - th[i])});
  }
  return {worst <= 1e-4, "max |coefficient error| " + fmt(worst) + " (limit 1e-4)"};
}

Outcome regimes() {
  const LinearRegime one{1.0, 0.0};
  const bool ok = linear_regime(Activation(ActivationKind::Tanh)) == one &&
                  linear_regime(Activation(ActivationKind::Relu)) == one &&
                  linear_regime(Activation(ActivationKind::ScaledSigmoid)) == one &&
                  linear_regime(Activation(ActivationKind::Sigmoid)) == LinearRegime{0.25, 0.5};
  return {ok, ok ? "tanh, relu, scaled_sigmoid (1, 0); sigmoid (0.25, 0.5); exact" : "mismatch"};
}

Outcome recursion_monte_carlo() {
  Rng draw(20240601);
  const int specs = 8;
  double worst = 0.0;
  std::string worst_where;
  for (int s = 0; s < specs; ++s) {
    LinearNetSpec spec;
    const std::size_t depth = 1 + draw.below(6);
    for (std::size_t l = 0; l <= depth; ++l) spec.widths.push_back(16 + draw.below(113));
    switch (s % 3) {
      case 0:
        spec.alpha = 1.0;
        spec.beta = 0.0;
        break;
      case 1:
        spec.alpha = 0.25;
        spec.beta = 0.5;
        break;
      default:
        spec.alpha = 0.5 + draw.uniform();
        spec.beta = draw.uniform() - 0.5;
        break;
    }
    for (std::size_t l = 0; l < depth; ++l) {
      const double gain = 0.7 + 0.6 * draw.uniform();
      spec.sigma_sq.push_back(gain / (spec.alpha * spec.alpha * static_cast<double>(spec.widths[l])));
    }
    spec.input_var = 0.5 + draw.uniform();
    spec.grad_top_var = 0.5 + draw.uniform();

    const VarianceProfile ana = analytic_profile(spec);
    Rng mc(mix_seed(77, static_cast<std::uint64_t>(s)));
    const VarianceProfile emp = empirical_linear_profile(mc, spec, {100, 100, false});
    for (std::size_t l = 0; l <= depth; ++l) {
      const double ea = rel_err(emp.act_var[l], ana.act_var[l]);
      const double eg = rel_err(emp.grad_var[l], ana.grad_var[l]);
      if (std::max(ea, eg) > worst) {
        worst = std::max(ea, eg);
        worst_where = "spec " + std::to_string(s) + " layer " + std::to_string(l);
      }
    }
  }
  return {worst <= 0.05, std::to_string(specs) + " specs, 10^4 samples/layer, max relative error " +
                             fmt(worst) + " at " + worst_where + " (limit 0.05)"};
}

Outcome lemma1() {
  Rng draw(99);
  const int sets = 12;
  double worst_diag = 0.0;
  double worst_off = 0.0;
  for (int s = 0; s < sets; ++s) {
    const double C = 0.2 + 1.8 * draw.uniform();
    const std::size_t n = 2 + draw.below(7);
    const std::size_t m = 2 + draw.below(5);
    const double sigma_sq = 0.1 + 0.9 * draw.uniform();
    std::vector<double> mean(n);
    const double scale = (s % 3 == 0) ? 0.0 : draw.uniform() * 1.5;
    for (double& v : mean) v = scale * draw.normal();
    const Matrix ana = lemma1_analytic(C, n, m, sigma_sq, mean);
    Rng mc(mix_seed(5150, static_cast<std::uint64_t>(s)));
    const Matrix emp = lemma1_empirical(mc, C, n, m, sigma_sq, mean, 100000);
    const double diag = ana(0, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double e = std::abs(emp(i, j) - ana(i, j)) / diag;
        if (i == j) {
          worst_diag = std::max(worst_diag, e);
        } else {
          worst_off = std::max(worst_off, e);
        }
      }
    }
  }
  return {worst_diag <= 0.03 && worst_off <= 0.03,
          std::to_string(sets) + " parameter sets at 10^5 trials, diagonal " + fmt(worst_diag) +
              ", off-diagonal " + fmt(worst_off) + " of diagonal (limit 0.03)"};
}

Outcome gradients() {
  double worst = 0.0;
  std::string worst_name;
  for (std::size_t a = 0; a < kAllActivationKinds.size(); ++a) {
    NetworkConfig cfg;
    cfg.widths = {3, 5, 5, 5, 3};
    cfg.activation = Activation(kAllActivationKinds[a]);
    cfg.seed = 42;
    const Network net = build(cfg);
    Rng rng(mix_seed(42, 100 + a));
    const Matrix batch = sample_kink_free_batch(net, rng, 4, 1e-3);
    const std::vector<std::size_t> labels{0, 1, 2, 0};
    const auto r = gradient_check(net, batch, labels, 1e-5);
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      worst_name = std::string(net.activation().name());
    }
  }
  return {worst < 1e-6, "six activations on 4-layer nets, worst " + fmt(worst) + " (" + worst_name +
                            "), limit 1e-6"};
}

Outcome vanishing() {
  const std::vector<std::size_t> widths(21, 64);
  // Inputs sit in the near-linear regime the slope argument is about.
  const double input_var = 0.1;
  const MonteCarloOptions opts{100, 100, false};
  Rng r1(mix_seed(6, 1)), r2(mix_seed(6, 2)), r3(mix_seed(6, 3));
  const auto sig = empirical_profile(r1, widths, Activation(ActivationKind::Sigmoid), {}, input_var, opts);
  const auto th = empirical_profile(r2, widths, Activation(ActivationKind::Tanh), {}, input_var, opts);
  const auto sc = empirical_profile(r3, widths, Activation(ActivationKind::ScaledSigmoid), {}, input_var, opts);
  const double sig_ratio = sig.grad_var[1] / sig.grad_var[20];
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto* p : {&th, &sc}) {
    for (std::size_t l = 0; l <= 20; ++l) {
      const double r = p->grad_var[l] / p->grad_var[20];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  const bool ok = sig_ratio < 1e-12 && lo >= 0.1 && hi <= 10.0;
  return {ok, "sigmoid d_1/d_20 = " + fmt(sig_ratio) + " (limit 1e-12); tanh and scaled_sigmoid d_l/d_20 in [" +
                  fmt(lo) + ", " + fmt(hi) + "] (limit [0.1, 10])"};
}

Outcome training_trends() {
  const cli::RunConfig cfg;
  Rng data_rng(cfg.data_seed());
  const SplitDatasets data = synth_classification(data_rng, cfg.classes, cfg.dims, cfg.per_class, cfg.margin);
  NetworkConfig base;
  base.widths = cfg.widths;
  base.init = cfg.init;
  base.seed = cfg.seed;
  TrainConfig tc = cfg.train;
  tc.seed = cfg.shuffle_seed();
  const std::vector<Activation> acts{
      Activation(ActivationKind::Sigmoid), Activation(ActivationKind::ScaledSigmoid),
      Activation(ActivationKind::Tanh), Activation(ActivationKind::PenalizedTanh, 0.25),
      Activation(ActivationKind::LeakyRelu, 0.25)};
  const auto arms = compare_activations(base, tc, acts, data.train, data.test);
  auto final_acc = [](const ArmResult& a) {
    return a.result.records.empty() ? 0.0 : a.result.records.back().test_acc;
  };
  const ArmResult& sig = arms[0];
  const ArmResult& scaled = arms[1];
  const ArmResult& tanh = arms[2];
  const ArmResult& pt = arms[3];
  const ArmResult& leaky = arms[4];

  const bool a = (sig.result.status == TrainStatus::Diverged || final_acc(sig) <= 0.35) &&
                 tanh.result.status == TrainStatus::Completed && final_acc(scaled) >= 0.80 &&
                 final_acc(tanh) >= 0.80;

  bool b = false;
  std::string b_detail = "tanh did not complete";
  if (tanh.result.status == TrainStatus::Completed && !tanh.result.records.empty()) {
    const double target = tanh.result.records.back().train_loss;
    const auto tanh_epochs = epochs_to_target(tanh.result.records, target);
    const auto pt_epochs = epochs_to_target(pt.result.records, target);
    b = tanh_epochs && pt_epochs && 2 * *pt_epochs <= *tanh_epochs;
    b_detail = "target loss " + fmt(target) + ": tanh " + std::to_string(tanh_epochs.value_or(0)) +
               " epochs, penalized_tanh " +
               (pt_epochs ? std::to_string(*pt_epochs) + " epochs" : std::string("never")) +
               " (penalized_tanh final loss " +
               fmt(pt.result.records.empty() ? NAN : pt.result.records.back().train_loss) + ")";
  }

  const double gap = std::abs(final_acc(pt) - final_acc(leaky));
  const bool c = gap <= 0.03;

  std::ostringstream d;
  d << "(a) " << (a ? "ok" : "FAIL") << " sigmoid " << fmt(final_acc(sig)) << " ["
    << status_name(sig.result.status) << "], scaled " << fmt(final_acc(scaled)) << ", tanh "
    << fmt(final_acc(tanh)) << "; (b) " << (b ? "ok" : "FAIL") << ' ' << b_detail << "; (c) "
    << (c ? "ok" : "FAIL") << " penalized_tanh " << fmt(final_acc(pt)) << " vs leaky_relu "
    << fmt(final_acc(leaky)) << " gap " << fmt(gap) << " (limit 0.03)";
  return {a && b && c, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "satact_acceptance_determinism";
  fs::remove_all(root);
  std::size_t files = 0;
  std::vector<std::string> mismatched;
  for (const char* cmd : {"plot", "varprop", "gradcheck", "train", "compare"}) {
    for (const char* leg : {"a", "b"}) {
      std::ostringstream out, err;
      const int code = cli::run({cmd, "--out", (root / cmd / leg).string()}, out, err);
      if (code != 0) {
        fs::remove_all(root);
        return {false, std::string(cmd) + " exited " + std::to_string(code) + ": " + err.str()};
      }
    }
    for (const auto& entry : fs::directory_iterator(root / cmd / "a")) {
      ++files;
      const fs::path twin = root / cmd / "b" / entry.path().filename();
      if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
        mismatched.push_back(std::string(cmd) + "/" + entry.path().filename().string());
      }
    }
  }
  fs::remove_all(root);
  std::string detail = "5 commands, " + std::to_string(files) + " artifacts compared byte for byte";
  for (const auto& m : mismatched) detail += "; differs: " + m;
  return {mismatched.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Taylor coefficients", 1.0, taylor},
      {2, "linear-regime conditions", 1.0, regimes},
      {3, "variance recursion vs Monte Carlo", 30.0, recursion_monte_carlo},
      {4, "second-moment lemma oracle", 60.0, lemma1},
      {5, "gradient exactness", 10.0, gradients},
      {6, "sigmoid vanishing gradients", 60.0, vanishing},
      {7, "training trends at desk scale", 300.0, training_trends},
      {8, "CLI determinism", 600.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << "  " << c.title << "  ["
              << fmt(secs) << " s of " << fmt(c.budget_seconds) << " s" << (in_time ? "" : ", OVER BUDGET")
              << "]  " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << " of " << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
