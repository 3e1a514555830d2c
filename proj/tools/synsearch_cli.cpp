// Command-line front end: synergy maps, single trials, batch comparisons and
// the built-in consistency checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "synsearch/error.hpp"
#include "synsearch/harness.hpp"
#include "synsearch/selftest.hpp"
#include "synsearch/synergy_map.hpp"

namespace {

using namespace synsearch;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> mode;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed_base;
};

TrialConfig resolve(const Flags& flags) {
  TrialConfig config = flags.config.empty() ? config_from_json(nlohmann::json::object())
                                            : load_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.mode) {
    try {
      config.mode = parse_plan_mode(*flags.mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_config, e.what());
    }
  }
  return config;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path + " for writing");
  write(out);
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path);
}

int run_map(const Flags& flags) {
  const TrialConfig config = resolve(flags);
  const GridDomain grid = make_grid(config.grid);
  const auto field = make_prior(grid, config.prior);
  const auto model = make_model(grid, config.model);
  auto map = compute_synergy_map(field, model, grid.nearest_cell(config.map_r1),
                                 config.planner.allow_colocation);
  map.metadata["prior"] = config_to_json(config)["prior"];
  if (flags.out.empty() || flags.out == "-") {
    // No sidecar without a file destination.
    write_map_csv(map, std::cout);
    return kOk;
  }
  export_map(map, flags.out);
  const auto e = map_extrema(map);
  const Coord at = grid.center(e.min_R_cell);
  std::fprintf(stderr, "min R = %.6g at (%.4g, %.4g); max I = %.6g; max I_cond = %.6g\n", e.min_R,
               at.x, at.y, e.max_I, e.max_I_cond);
  return kOk;
}

int run_trial_cmd(const Flags& flags) {
  const TrialConfig config = resolve(flags);
  const auto record = run_trial(config);
  with_output(flags.out, [&](std::ostream& out) { write_trial_log(record, config, out); });
  return kOk;
}

int run_batch_cmd(const Flags& flags) {
  const TrialConfig config = resolve(flags);
  const std::size_t n = flags.trials.value_or(config.batch_trials);
  if (n < 1) throw Error(ErrorCode::invalid_config, "--trials must be at least 1");
  const auto summary = run_batch(config, n, flags.seed_base.value_or(config.seed));
  with_output(flags.out, [&](std::ostream& out) { write_batch_csv(summary, out); });
  return kOk;
}

int run_selftest_cmd() {
  bool ok = true;
  for (const auto& check : run_selftest()) {
    std::printf("[%s] %s (worst %.3g, tolerance %.3g)\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.worst, check.tolerance);
    ok = ok && check.passed;
  }
  return ok ? kOk : kRuntimeError;
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config:
    case ErrorCode::invalid_extent:
    case ErrorCode::too_few_cells:
    case ErrorCode::off_grid:
    case ErrorCode::non_positive_variance:
    case ErrorCode::invalid_parameter:
    case ErrorCode::exclusion_violated:
    case ErrorCode::probability_overflow:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-searcher infotaxis: synergy maps and search trials"};
  app.require_subcommand(1);
  Flags flags;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON config file");
    cmd->add_option("--seed", flags.seed, "RNG seed (overrides config)");
    cmd->add_option("--out", flags.out, "Output path (default: stdout)");
    cmd->add_option("--mode", flags.mode, "coordinated | independent (overrides config)");
  };
  auto* map = app.add_subcommand("map", "Sweep searcher 2 and write R, I, I_cond as CSV");
  auto* trial = app.add_subcommand("trial", "Run one search trial and write a JSON-lines log");
  auto* batch = app.add_subcommand("batch", "Compare coordinated and independent planning");
  auto* selftest = app.add_subcommand("selftest", "Run the built-in consistency checks");
  add_common(map);
  add_common(trial);
  add_common(batch);
  batch->add_option("--trials", flags.trials, "Number of paired trials");
  batch->add_option("--seed-base", flags.seed_base, "Trial i uses seed-base + i");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*map) return run_map(flags);
    if (*trial) return run_trial_cmd(flags);
    if (*batch) return run_batch_cmd(flags);
    if (*selftest) return run_selftest_cmd();
  } catch (const Error& e) {
    std::cerr << "synsearch: " << e.what() << '\n';
    return is_config_error(e.code()) ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "synsearch: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
