#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::string out_dir = ".";
  bool json = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment configuration file")->required();
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--workers", args.workers, "cap worker threads (outputs unaffected)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_flag("--json", args.json, "also write JSON mirrors of the CSV outputs");
}

int run_experiment(const CommonArgs& args, const std::string& expected_kind) {
  lrf::cli::Config cfg;
  try {
    cfg = lrf::cli::Config::parse_file(args.config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }

  const std::string kind = cfg.get_string("experiment", "");
  if (!expected_kind.empty() && kind != expected_kind) {
    std::fprintf(stderr, "error: config declares experiment '%s' but subcommand is '%s'\n",
                 kind.c_str(), expected_kind.c_str());
    return kExitValidation;
  }

  lrf::cli::RunOptions opt;
  opt.out_dir = args.out_dir;
  if (args.seed_set) opt.seed_override = args.seed;
  opt.workers = args.workers;
  opt.json_mirror = args.json;

  try {
    const lrf::cli::RunManifest manifest = lrf::cli::run(cfg, opt);
    for (const auto& [path, sum] : manifest.outputs)
      std::printf("wrote %s (fnv1a64 %016llx)\n", path.c_str(),
                  static_cast<unsigned long long>(sum));
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error in experiment '%s': %s\n", kind.c_str(), e.what());
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrf: weighted Hermite functionals of long-range dependent Gaussian fields"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {
      "hermite-coeffs", "field-validate", "msd-ratio",          "l12",
      "kernel-check",   "limit-sample",   "convergence-study", "theorem1-demo"};

  std::vector<CommonArgs> args(kinds.size() + 1);
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(kinds[i], "run a " + kinds[i] + " experiment");
    add_common(cmd, args[i]);
  }
  CLI::App* val = app.add_subcommand("validate", "check a config without running it");
  add_common(val, args.back());

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (app.got_subcommand(kinds[i])) return run_experiment(args[i], kinds[i]);

  if (app.got_subcommand("validate")) {
    try {
      const auto cfg = lrf::cli::Config::parse_file(args.back().config_path);
      const auto violations = lrf::cli::validate(cfg);
      if (violations.empty()) {
        std::printf("ok\n");
        return kExitOk;
      }
      for (const auto& v : violations)
        std::fprintf(stderr, "violation: %s\n", v.precondition.c_str());
      return kExitValidation;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kExitValidation;
    }
  }
  return kExitRuntime;
}
