#include "cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "satact/rng.hpp"

namespace satact::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(want) +
                    ", got '" + std::string(value) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value, std::string_view want) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, want);
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  return parse_number<double>(key, value, "a real number");
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  return parse_number<std::uint64_t>(key, value, "a non-negative integer");
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  return static_cast<std::size_t>(parse_u64(key, value));
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    const auto item = trim(value.substr(start, end - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_widths(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  for (auto item : split_list(value)) {
    const std::size_t w = parse_count(key, item);
    if (w == 0) bad_value(key, value, "a comma-separated list of positive widths");
    out.push_back(w);
  }
  if (out.size() < 2) bad_value(key, value, "at least two widths");
  return out;
}

Activation parse_act(std::string_view key, std::string_view value) {
  try {
    return parse_activation(value);
  } catch (const ParameterError& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"seed", [](RunConfig& c, auto k, auto v) { c.seed = parse_u64(k, v); }},
      {"activation", [](RunConfig& c, auto k, auto v) { c.activation = parse_act(k, v); }},
      {"leak", [](RunConfig& c, auto k, auto v) { c.leak = parse_real(k, v); }},
      {"activations",
       [](RunConfig& c, auto k, auto v) {
         std::vector<Activation> acts;
         for (auto item : split_list(v)) acts.push_back(parse_act(k, item));
         if (acts.empty()) bad_value(k, v, "a non-empty activation list");
         c.activations = std::move(acts);
       }},
      {"widths", [](RunConfig& c, auto k, auto v) { c.widths = parse_widths(k, v); }},
      {"init",
       [](RunConfig& c, auto k, auto v) {
         try {
           c.init.kind = parse_init_kind(v);
         } catch (const ParameterError&) {
           bad_value(k, v, "one of fan_in, xavier, scaled_fan_in");
         }
       }},
      {"gain",
       [](RunConfig& c, auto k, auto v) {
         c.init.gain = parse_real(k, v);
         if (!(c.init.gain > 0.0)) bad_value(k, v, "a positive gain");
       }},
      {"x_min", [](RunConfig& c, auto k, auto v) { c.x_min = parse_real(k, v); }},
      {"x_max", [](RunConfig& c, auto k, auto v) { c.x_max = parse_real(k, v); }},
      {"steps", [](RunConfig& c, auto k, auto v) { c.steps = parse_count(k, v); }},
      {"input_var", [](RunConfig& c, auto k, auto v) { c.input_var = parse_real(k, v); }},
      {"batch", [](RunConfig& c, auto k, auto v) { c.batch = parse_count(k, v); }},
      {"trials", [](RunConfig& c, auto k, auto v) { c.trials = parse_count(k, v); }},
      {"varprop_tolerance",
       [](RunConfig& c, auto k, auto v) { c.varprop_tolerance = parse_real(k, v); }},
      {"gradcheck_widths",
       [](RunConfig& c, auto k, auto v) { c.gradcheck_widths = parse_widths(k, v); }},
      {"gradcheck_batch",
       [](RunConfig& c, auto k, auto v) { c.gradcheck_batch = parse_count(k, v); }},
      {"gradcheck_h", [](RunConfig& c, auto k, auto v) { c.gradcheck_h = parse_real(k, v); }},
      {"gradcheck_tolerance",
       [](RunConfig& c, auto k, auto v) { c.gradcheck_tolerance = parse_real(k, v); }},
      {"corrupt_derivative",
       [](RunConfig& c, auto k, auto v) { c.corrupt_derivative = parse_real(k, v); }},
      {"dataset",
       [](RunConfig& c, auto k, auto v) {
         if (v == "synth") {
           c.dataset = DatasetKind::Synthetic;
         } else if (v == "idx") {
           c.dataset = DatasetKind::Idx;
         } else {
           bad_value(k, v, "synth or idx");
         }
       }},
      {"classes", [](RunConfig& c, auto k, auto v) { c.classes = parse_count(k, v); }},
      {"dims", [](RunConfig& c, auto k, auto v) { c.dims = parse_count(k, v); }},
      {"per_class", [](RunConfig& c, auto k, auto v) { c.per_class = parse_count(k, v); }},
      {"margin", [](RunConfig& c, auto k, auto v) { c.margin = parse_real(k, v); }},
      {"idx_train_images", [](RunConfig& c, auto, auto v) { c.idx_train_images = v; }},
      {"idx_train_labels", [](RunConfig& c, auto, auto v) { c.idx_train_labels = v; }},
      {"idx_test_images", [](RunConfig& c, auto, auto v) { c.idx_test_images = v; }},
      {"idx_test_labels", [](RunConfig& c, auto, auto v) { c.idx_test_labels = v; }},
      {"epochs", [](RunConfig& c, auto k, auto v) { c.train.epochs = parse_count(k, v); }},
      {"batch_size", [](RunConfig& c, auto k, auto v) { c.train.batch_size = parse_count(k, v); }},
      {"learning_rate",
       [](RunConfig& c, auto k, auto v) { c.train.learning_rate = parse_real(k, v); }},
      {"lr_schedule",
       [](RunConfig& c, auto k, auto v) {
         if (v == "constant") {
           c.train.schedule.kind = LrSchedule::Kind::Constant;
         } else if (v == "step") {
           c.train.schedule.kind = LrSchedule::Kind::Step;
         } else {
           bad_value(k, v, "constant or step");
         }
       }},
      {"lr_step_factor",
       [](RunConfig& c, auto k, auto v) { c.train.schedule.factor = parse_real(k, v); }},
      {"lr_step_every",
       [](RunConfig& c, auto k, auto v) { c.train.schedule.every = parse_count(k, v); }},
      {"eval_every", [](RunConfig& c, auto k, auto v) { c.train.eval_every = parse_count(k, v); }},
      {"reference_activation",
       [](RunConfig& c, auto k, auto v) {
         c.reference_activation = parse_act(k, v).label();
       }},
      {"target_loss", [](RunConfig& c, auto k, auto v) { c.target_loss = parse_real(k, v); }},
      {"save_model", [](RunConfig& c, auto k, auto v) { c.save_model = parse_bool(k, v); }},
  };
  return table;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      setter(*this, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

Activation RunConfig::resolved_activation() const {
  if (!leak || !activation.has_leak()) return activation;
  try {
    return Activation(activation.kind(), *leak);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config key 'leak': ") + e.what());
  }
}

std::uint64_t RunConfig::shuffle_seed() const noexcept { return mix_seed(seed, 1); }
std::uint64_t RunConfig::data_seed() const noexcept { return mix_seed(seed, 2); }
std::uint64_t RunConfig::varprop_seed() const noexcept { return mix_seed(seed, 3); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : setters()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = std::string(origin) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + ": duplicate key '" + std::string(key) + "'");
    }
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path.string());
}

}  // namespace satact::cli
