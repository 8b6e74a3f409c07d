#include "cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"

namespace satact::cli {
namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
};

void add_common(CLI::App& sub, CommonOptions& opts) {
  sub.add_option("--config", opts.config_path, "key = value configuration file");
  sub.add_option("--seed", opts.seed, "master seed (overrides the config file)");
  sub.add_option("--out", opts.out_dir, "output directory (default: $SATACT_OUT_DIR or ./satact_out)");
  sub.add_option("--set", opts.sets, "override one config key, KEY=VALUE (repeatable)");
}

RunConfig resolve(const CommonOptions& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) apply_config_file(cfg, opts.config_path);
  for (const auto& kv : opts.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    cfg.set(std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
  }
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

std::filesystem::path output_dir(const CommonOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "satact_out";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"satact: activation-function variance propagation and training toolkit", "satact"};
  app.require_subcommand(1);

  using Command = int (*)(const RunConfig&, const std::filesystem::path&, std::ostream&);
  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"plot", "tabulate activation values and derivatives", &cmd_plot},
      {"varprop", "analytic vs Monte Carlo variance profile", &cmd_varprop},
      {"gradcheck", "backprop vs central finite differences, every activation", &cmd_gradcheck},
      {"train", "train one network", &cmd_train},
      {"compare", "train one network per activation with shared initial weights", &cmd_compare},
  };

  CommonOptions opts;
  Command chosen = nullptr;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(*sub, opts);
    sub->callback([&chosen, cmd = e.command] { chosen = cmd; });
  }

  std::vector<std::string> argv_storage{"satact"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "satact: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const RunConfig cfg = resolve(opts);
    return chosen(cfg, output_dir(opts), out);
  } catch (const ConfigError& e) {
    err << "satact: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "satact: invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "satact: dimension error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "satact: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "satact: malformed input: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "satact: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace satact::cli
