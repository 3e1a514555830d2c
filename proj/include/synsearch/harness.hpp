#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synsearch/field.hpp"
#include "synsearch/planner.hpp"
#include "synsearch/source_models.hpp"

namespace synsearch {

struct GridSpec {
  double min = -0.5;
  double max = 0.5;
  std::size_t cells_per_axis = 51;
};

struct PriorSpec {
  enum class Kind { uniform, gaussian } kind = Kind::gaussian;
  Coord center{0.0, 0.0};
  double variance = 0.02;
};

struct ModelSpec {
  enum class Kind { poisson, angular } kind = Kind::angular;
  double lambda0 = 1.0;
  double sigma2 = 1.1;
  /// Detection amplitude B; defaults to 0.5 for Poisson and 0.002 for angular.
  std::optional<double> amplitude;
  double epsilon = 1e-12;

  double effective_amplitude() const;
};

/// Everything that defines one experiment. Positions are snapped to cell
/// centers when the config is parsed.
struct TrialConfig {
  GridSpec grid;
  PriorSpec prior;
  ModelSpec model;
  /// Fixed true source position; empty means "draw from the prior".
  std::optional<Coord> source;
  std::vector<Coord> searchers{{-0.2, 0.0}, {0.2, 0.0}};
  PlanMode mode = PlanMode::coordinated;
  PlannerOptions planner;
  std::size_t max_steps = 200;
  std::uint64_t seed = 1;
  /// Searcher 1 position for synergy maps.
  Coord map_r1{-0.2, 0.0};
  std::size_t batch_trials = 100;
};

/// Parses and validates (throws invalid-config with a readable message).
TrialConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const TrialConfig& config);
TrialConfig load_config(const std::filesystem::path& path);
/// FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const TrialConfig& config);

GridDomain make_grid(const GridSpec& spec);
ProbabilityField make_prior(const GridDomain& grid, const PriorSpec& spec);
SourceModel make_model(const GridDomain& grid, const ModelSpec& spec);

struct StepLog {
  std::size_t step = 0;
  std::vector<Cell> positions;
  Measurement measurement;
  double entropy = 0.0;
  std::vector<Cell> next_positions;
  std::vector<Step> moves;
  double delta_s = 0.0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  Cell true_source = 0;
  double initial_entropy = 0.0;
  std::vector<StepLog> steps;
  /// Step index at which a searcher stood on the source; empty if exhausted.
  std::optional<std::size_t> found_at;
};

/// Measure, update, plan, move until a searcher stands on the source or
/// max_steps moves have been made. After every unsuccessful step the cells
/// under the searchers are ruled out of the posterior.
TrialRecord run_trial(const TrialConfig& config);

/// JSON lines: a header object, one object per step, then the outcome.
void write_trial_log(const TrialRecord& record, const TrialConfig& config, std::ostream& out);

struct ModeSummary {
  PlanMode mode = PlanMode::coordinated;
  std::size_t trials = 0;
  std::size_t found = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double median_steps = 0.0;
  double stddev_steps = 0.0;
};

struct BatchSummary {
  ModeSummary coordinated;
  ModeSummary independent;
  /// Paired (same seed) differences coordinated - independent over trials
  /// where both modes found the source.
  std::size_t paired = 0;
  double mean_difference = 0.0;
  double median_difference = 0.0;
  double ci95_half_width = 0.0;
};

/// Runs trial i of both modes with seed seed_base + i.
BatchSummary run_batch(const TrialConfig& config, std::size_t n_trials, std::uint64_t seed_base);

void write_batch_csv(const BatchSummary& summary, std::ostream& out);

}  // namespace synsearch
