#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "satact/dataset.hpp"
#include "satact/format.hpp"
#include "satact/model_io.hpp"
#include "satact/network.hpp"
#include "satact/rng.hpp"
#include "satact/train.hpp"
#include "satact/varprop.hpp"

namespace satact::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kKinkMargin = 1e-3;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

// Labels like "penalized_tanh:0.5" become file-name safe "penalized_tanh_0.5".
std::string file_label(const Activation& act) {
  std::string s = act.label();
  for (char& c : s) {
    if (c == ':') c = '_';
  }
  return s;
}

json activation_json(const Activation& act) {
  json j;
  j["name"] = act.name();
  if (act.has_leak()) {
    j["leak"] = act.leak();
  } else {
    j["leak"] = nullptr;
  }
  j["label"] = act.label();
  return j;
}

double relative_error(double estimate, double reference) {
  const double denom = std::max(std::abs(reference), 1e-300);
  return std::abs(estimate - reference) / denom;
}

SplitDatasets load_data(const RunConfig& cfg) {
  if (cfg.dataset == DatasetKind::Synthetic) {
    Rng rng(cfg.data_seed());
    return synth_classification(rng, cfg.classes, cfg.dims, cfg.per_class, cfg.margin);
  }
  if (cfg.idx_train_images.empty() || cfg.idx_train_labels.empty() ||
      cfg.idx_test_images.empty() || cfg.idx_test_labels.empty()) {
    throw ConfigError("dataset = idx needs idx_train_images, idx_train_labels, "
                      "idx_test_images and idx_test_labels");
  }
  SplitDatasets out;
  out.train = load_idx(cfg.idx_train_images, cfg.idx_train_labels, Split::Train);
  out.test = load_idx(cfg.idx_test_images, cfg.idx_test_labels, Split::Test);
  out.test.classes = out.train.classes = std::max(out.train.classes, out.test.classes);
  return out;
}

NetworkConfig network_config(const RunConfig& cfg, const SplitDatasets& data) {
  NetworkConfig net;
  net.widths = cfg.widths;
  net.activation = cfg.resolved_activation();
  net.init = cfg.init;
  net.seed = cfg.seed;
  if (net.widths.front() != data.train.dims()) {
    throw ConfigError("widths: input width " + std::to_string(net.widths.front()) +
                      " does not match data dimension " + std::to_string(data.train.dims()));
  }
  if (net.widths.back() < data.train.classes) {
    throw ConfigError("widths: output width " + std::to_string(net.widths.back()) + " is below " +
                      std::to_string(data.train.classes) + " classes");
  }
  return net;
}

json final_metrics(const TrainResult& r) {
  json j;
  if (r.records.empty()) {
    j["epoch"] = nullptr;
    j["train_loss"] = nullptr;
    j["train_acc"] = nullptr;
    j["test_acc"] = nullptr;
  } else {
    const auto& last = r.records.back();
    j["epoch"] = last.epoch;
    j["train_loss"] = last.train_loss;
    j["train_acc"] = last.train_acc;
    j["test_acc"] = last.test_acc;
  }
  return j;
}

json optional_epoch(std::optional<std::size_t> e) { return e ? json(*e) : json(nullptr); }

std::string records_csv(const TrainResult& r) {
  std::ostringstream os;
  write_records_csv(os, r.records);
  return os.str();
}

}  // namespace

int cmd_plot(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (!(cfg.x_min < cfg.x_max)) throw ConfigError("plot: x_min must be < x_max");
  if (cfg.steps < 2) throw ConfigError("plot: steps must be >= 2");
  ensure_dir(out_dir);

  std::ostringstream os;
  os << 'x';
  for (const auto& act : cfg.activations) os << ',' << act.label() << ",d_" << act.label();
  os << '\n';
  const double span = cfg.x_max - cfg.x_min;
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    const double x = i + 1 == cfg.steps
                         ? cfg.x_max
                         : cfg.x_min + span * static_cast<double>(i) / static_cast<double>(cfg.steps - 1);
    os << format_real(x);
    for (const auto& act : cfg.activations) {
      os << ',' << format_real(apply(act, x)) << ',' << format_real(derivative(act, x));
    }
    os << '\n';
  }
  const fs::path path = out_dir / "activations.csv";
  write_file(path, os.str());
  log << "plot: wrote " << cfg.steps << " rows x " << cfg.activations.size()
      << " activations to " << path.string() << '\n';
  return kExitOk;
}

int cmd_varprop(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const Activation act = cfg.resolved_activation();
  const LinearNetSpec spec = linearized_spec(cfg.widths, act, cfg.init, cfg.input_var);
  const VarianceProfile analytic = analytic_profile(spec);

  Rng rng(cfg.varprop_seed());
  MonteCarloOptions mc;
  mc.batch = cfg.batch;
  mc.trials = cfg.trials;
  const VarianceProfile empirical =
      empirical_profile(rng, cfg.widths, act, cfg.init, cfg.input_var, mc);

  std::ostringstream csv;
  write_profile_csv(csv, analytic, empirical);
  write_file(out_dir / "varprop.csv", csv.str());

  json report;
  report["activation"] = activation_json(act);
  report["init"] = {{"scheme", init_name(cfg.init.kind)}, {"gain", cfg.init.gain}};
  report["widths"] = cfg.widths;
  report["alpha"] = spec.alpha;
  report["beta"] = spec.beta;
  report["input_var"] = cfg.input_var;
  report["batch"] = cfg.batch;
  report["trials"] = cfg.trials;
  report["tolerance"] = cfg.varprop_tolerance;
  json layers = json::array();
  bool all_within = true;
  for (std::size_t l = 0; l < analytic.act_var.size(); ++l) {
    const double act_err = relative_error(empirical.act_var[l], analytic.act_var[l]);
    const double grad_err = relative_error(empirical.grad_var[l], analytic.grad_var[l]);
    const bool act_ok = act_err <= cfg.varprop_tolerance;
    const bool grad_ok = grad_err <= cfg.varprop_tolerance;
    all_within = all_within && act_ok && grad_ok;
    layers.push_back({{"layer", l},
                      {"analytic_act_var", analytic.act_var[l]},
                      {"empirical_act_var", empirical.act_var[l]},
                      {"act_relative_error", act_err},
                      {"act_within_tolerance", act_ok},
                      {"act_unit_spread", empirical.act_unit_spread[l]},
                      {"analytic_grad_var", analytic.grad_var[l]},
                      {"empirical_grad_var", empirical.grad_var[l]},
                      {"grad_relative_error", grad_err},
                      {"grad_within_tolerance", grad_ok},
                      {"grad_unit_spread", empirical.grad_unit_spread[l]}});
  }
  report["layers"] = layers;
  report["all_within_tolerance"] = all_within;
  write_json(out_dir / "varprop.json", report);

  log << "varprop: " << act.label() << ", " << cfg.widths.size() - 1 << " layers, "
      << (all_within ? "linear-regime prediction holds" : "departs from linear-regime prediction")
      << " at tolerance " << cfg.varprop_tolerance << '\n';
  return kExitOk;
}

int cmd_gradcheck(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  if (cfg.gradcheck_batch == 0) throw ConfigError("gradcheck_batch must be >= 1");
  BackwardHooks hooks;
  hooks.derivative_offset = cfg.corrupt_derivative;

  json report;
  report["widths"] = cfg.gradcheck_widths;
  report["batch"] = cfg.gradcheck_batch;
  report["h"] = cfg.gradcheck_h;
  report["tolerance"] = cfg.gradcheck_tolerance;
  report["corrupt_derivative"] = cfg.corrupt_derivative;
  json results = json::array();
  bool all_passed = true;

  for (std::size_t a = 0; a < cfg.activations.size(); ++a) {
    const Activation& act = cfg.activations[a];
    NetworkConfig net_cfg;
    net_cfg.widths = cfg.gradcheck_widths;
    net_cfg.activation = act;
    net_cfg.init = cfg.init;
    net_cfg.seed = cfg.seed;
    const Network net = build(net_cfg);
    Rng rng(mix_seed(cfg.seed, 100 + a));
    const Matrix batch = sample_kink_free_batch(net, rng, cfg.gradcheck_batch, kKinkMargin);
    std::vector<std::size_t> labels(cfg.gradcheck_batch);
    for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = j % cfg.gradcheck_widths.back();

    const GradientCheckResult r = gradient_check(net, batch, labels, cfg.gradcheck_h, hooks);
    const bool passed = r.max_relative_error < cfg.gradcheck_tolerance;
    all_passed = all_passed && passed;
    results.push_back({{"activation", activation_json(act)},
                       {"max_relative_error", r.max_relative_error},
                       {"parameters_checked", r.parameters_checked},
                       {"min_kink_distance", r.min_kink_distance},
                       {"worst_analytic", r.worst_analytic},
                       {"worst_numeric", r.worst_numeric},
                       {"passed", passed}});
    log << "gradcheck: " << act.label() << " max relative error "
        << format_real(r.max_relative_error) << (passed ? " ok" : " FAILED") << '\n';
  }
  report["results"] = results;
  report["all_passed"] = all_passed;
  write_json(out_dir / "gradcheck.json", report);
  return all_passed ? kExitOk : kExitCheck;
}

int cmd_train(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const SplitDatasets data = load_data(cfg);
  Network net = build(network_config(cfg, data));
  TrainConfig tc = cfg.train;
  tc.seed = cfg.shuffle_seed();
  const TrainResult result = train(net, tc, data.train, data.test);

  write_file(out_dir / "train.csv", records_csv(result));
  json summary;
  summary["activation"] = activation_json(net.activation());
  summary["status"] = status_name(result.status);
  summary["diverged_epoch"] = result.diverged_epoch ? json(result.diverged_epoch) : json(nullptr);
  summary["final"] = final_metrics(result);
  if (cfg.target_loss >= 0.0) {
    summary["target_loss"] = cfg.target_loss;
    summary["epochs_to_target"] = optional_epoch(epochs_to_target(result.records, cfg.target_loss));
  } else {
    summary["target_loss"] = nullptr;
    summary["epochs_to_target"] = nullptr;
  }
  write_json(out_dir / "summary.json", summary);
  if (cfg.save_model) save_network(net, out_dir / "model.bin");

  log << "train: " << net.activation().label() << ' ' << status_name(result.status);
  if (!result.records.empty()) {
    log << ", final test accuracy " << format_real(result.records.back().test_acc);
  }
  log << '\n';
  return result.status == TrainStatus::Diverged ? kExitDiverged : kExitOk;
}

int cmd_compare(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const SplitDatasets data = load_data(cfg);
  const NetworkConfig base = network_config(cfg, data);
  TrainConfig tc = cfg.train;
  tc.seed = cfg.shuffle_seed();
  const auto arms = compare_activations(base, tc, cfg.activations, data.train, data.test);

  std::optional<double> target;
  if (cfg.target_loss >= 0.0) {
    target = cfg.target_loss;
  } else {
    for (const auto& arm : arms) {
      if (arm.activation.label() == cfg.reference_activation &&
          arm.result.status == TrainStatus::Completed && !arm.result.records.empty()) {
        target = arm.result.records.back().train_loss;
      }
    }
  }

  std::ostringstream table;
  table << "activation,status,final_train_loss,final_train_acc,final_test_acc,epochs_to_target\n";
  json summary;
  summary["reference_activation"] = cfg.reference_activation;
  summary["target_loss"] = target ? json(*target) : json(nullptr);
  json arm_docs = json::array();
  for (const auto& arm : arms) {
    write_file(out_dir / ("compare_" + file_label(arm.activation) + ".csv"), records_csv(arm.result));
    const std::optional<std::size_t> reach =
        target ? epochs_to_target(arm.result.records, *target) : std::nullopt;
    json doc;
    doc["activation"] = activation_json(arm.activation);
    doc["status"] = status_name(arm.result.status);
    doc["diverged_epoch"] = arm.result.diverged_epoch ? json(arm.result.diverged_epoch) : json(nullptr);
    doc["final"] = final_metrics(arm.result);
    doc["epochs_to_target"] = optional_epoch(reach);
    arm_docs.push_back(doc);

    table << arm.activation.label() << ',' << status_name(arm.result.status);
    if (arm.result.records.empty()) {
      table << ",,,";
    } else {
      const auto& last = arm.result.records.back();
      table << ',' << format_real(last.train_loss) << ',' << format_real(last.train_acc) << ','
            << format_real(last.test_acc);
    }
    table << ',' << (reach ? std::to_string(*reach) : std::string()) << '\n';
    log << "compare: " << arm.activation.label() << ' ' << status_name(arm.result.status);
    if (!arm.result.records.empty()) {
      log << ", final test accuracy " << format_real(arm.result.records.back().test_acc);
    }
    log << '\n';
  }
  summary["arms"] = arm_docs;
  write_file(out_dir / "compare_summary.csv", table.str());
  write_json(out_dir / "compare_summary.json", summary);
  return kExitOk;
}

}  // namespace satact::cli
