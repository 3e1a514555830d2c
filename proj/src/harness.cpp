#include "synsearch/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "synsearch/error.hpp"
#include "synsearch/parallel.hpp"
#include "synsearch/version.hpp"
#include "text_format.hpp"

namespace synsearch {

using nlohmann::json;

double ModelSpec::effective_amplitude() const {
  if (amplitude) return *amplitude;
  return kind == Kind::poisson ? 0.5 : 0.002;
}

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::invalid_config, what);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

Coord parse_coord(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    config_error(what + " must be a [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json coord_json(Coord c) { return json::array({c.x, c.y}); }

Coord snap(const GridDomain& grid, Coord c, const std::string& what) {
  try {
    return grid.center(grid.nearest_cell(c));
  } catch (const Error&) {
    config_error(what + " lies outside the grid");
  }
}

std::size_t any_on(std::span<const Cell> positions, Cell target) {
  return std::count(positions.begin(), positions.end(), target);
}

}  // namespace

GridDomain make_grid(const GridSpec& spec) {
  return GridDomain::make(spec.min, spec.max, spec.cells_per_axis);
}

ProbabilityField make_prior(const GridDomain& grid, const PriorSpec& spec) {
  if (spec.kind == PriorSpec::Kind::uniform) return uniform_prior(grid);
  return gaussian_prior(grid, spec.center, spec.variance);
}

SourceModel make_model(const GridDomain& grid, const ModelSpec& spec) {
  const auto kernel = DetectionKernel::make(spec.effective_amplitude());
  if (spec.kind == ModelSpec::Kind::poisson) {
    return SourceModel::poisson(grid, PoissonSource::make(spec.lambda0, kernel, spec.epsilon));
  }
  return SourceModel::angular(AngularSource::make(grid, spec.sigma2, kernel));
}

TrialConfig config_from_json(const json& j) {
  if (!j.is_object()) config_error("config root must be an object");
  TrialConfig c;

  const json grid = j.value("grid", json::object());
  c.grid.min = get_or(grid, "min", c.grid.min);
  c.grid.max = get_or(grid, "max", c.grid.max);
  c.grid.cells_per_axis = get_or(grid, "cells_per_axis", c.grid.cells_per_axis);
  GridDomain domain = [&] {
    try {
      return make_grid(c.grid);
    } catch (const Error& e) {
      config_error(std::string("grid: ") + e.what());
    }
  }();

  const json prior = j.value("prior", json::object());
  const auto prior_type = get_or<std::string>(prior, "type", "gaussian");
  if (prior_type == "uniform") {
    c.prior.kind = PriorSpec::Kind::uniform;
  } else if (prior_type == "gaussian") {
    c.prior.kind = PriorSpec::Kind::gaussian;
    if (prior.contains("center")) c.prior.center = parse_coord(prior["center"], "prior.center");
    c.prior.variance = get_or(prior, "variance", c.prior.variance);
    if (!(c.prior.variance > 0.0)) config_error("prior.variance must be positive");
    if (!domain.contains(c.prior.center)) config_error("prior.center lies outside the grid");
  } else {
    config_error("prior.type must be 'uniform' or 'gaussian'");
  }

  const json model = j.value("model", json::object());
  const auto model_type = get_or<std::string>(model, "type", "angular");
  if (model_type == "poisson") {
    c.model.kind = ModelSpec::Kind::poisson;
  } else if (model_type != "angular") {
    config_error("model.type must be 'poisson' or 'angular'");
  }
  c.model.lambda0 = get_or(model, "lambda0", c.model.lambda0);
  c.model.sigma2 = get_or(model, "sigma2", c.model.sigma2);
  c.model.epsilon = get_or(model, "epsilon", c.model.epsilon);
  if (model.contains("amplitude")) c.model.amplitude = get_or(model, "amplitude", 0.0);

  if (j.contains("source")) {
    const json& src = j["source"];
    const auto type = get_or<std::string>(src, "type", "fixed");
    if (type == "fixed") {
      if (!src.contains("position")) config_error("source.position is required for a fixed source");
      c.source = snap(domain, parse_coord(src["position"], "source.position"), "source.position");
    } else if (type == "prior") {
      c.source.reset();
    } else {
      config_error("source.type must be 'fixed' or 'prior'");
    }
  }

  if (j.contains("searchers")) {
    const json& s = j["searchers"];
    if (!s.is_array() || s.empty() || s.size() > 2) config_error("searchers must list 1 or 2 positions");
    c.searchers.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string what = "searchers[" + std::to_string(i) + "]";
      c.searchers.push_back(snap(domain, parse_coord(s[i], what), what));
    }
  } else {
    for (auto& p : c.searchers) p = snap(domain, p, "default searcher");
  }

  try {
    c.mode = parse_plan_mode(get_or<std::string>(j, "mode", "coordinated"));
    const json planner = j.value("planner", json::object());
    c.planner.neighborhood = parse_neighborhood(get_or<std::string>(planner, "moves", "von_neumann"));
    c.planner.allow_colocation = get_or(planner, "allow_colocation", true);
  } catch (const Error& e) {
    config_error(e.what());
  }

  c.max_steps = get_or(j, "max_steps", c.max_steps);
  if (c.max_steps < 1) config_error("max_steps must be at least 1");
  c.seed = get_or(j, "seed", c.seed);

  const json map = j.value("map", json::object());
  c.map_r1 = snap(domain, map.contains("r1") ? parse_coord(map["r1"], "map.r1") : c.map_r1, "map.r1");
  const json batch = j.value("batch", json::object());
  c.batch_trials = get_or(batch, "trials", c.batch_trials);
  if (c.batch_trials < 1) config_error("batch.trials must be at least 1");

  // Model invariants (exclusion bound, two-particle table validity on small grids).
  try {
    make_model(domain, c.model);
  } catch (const Error& e) {
    config_error(std::string("model: ") + e.what());
  }
  return c;
}

json config_to_json(const TrialConfig& c) {
  json j;
  j["grid"] = {{"min", c.grid.min}, {"max", c.grid.max}, {"cells_per_axis", c.grid.cells_per_axis}};
  if (c.prior.kind == PriorSpec::Kind::uniform) {
    j["prior"] = {{"type", "uniform"}};
  } else {
    j["prior"] = {{"type", "gaussian"}, {"center", coord_json(c.prior.center)},
                  {"variance", c.prior.variance}};
  }
  if (c.model.kind == ModelSpec::Kind::poisson) {
    j["model"] = {{"type", "poisson"}, {"lambda0", c.model.lambda0},
                  {"amplitude", c.model.effective_amplitude()}, {"epsilon", c.model.epsilon}};
  } else {
    j["model"] = {{"type", "angular"}, {"sigma2", c.model.sigma2},
                  {"amplitude", c.model.effective_amplitude()}};
  }
  j["source"] = c.source ? json{{"type", "fixed"}, {"position", coord_json(*c.source)}}
                         : json{{"type", "prior"}};
  j["searchers"] = json::array();
  for (Coord p : c.searchers) j["searchers"].push_back(coord_json(p));
  j["mode"] = std::string(to_string(c.mode));
  j["planner"] = {{"moves", std::string(to_string(c.planner.neighborhood))},
                  {"allow_colocation", c.planner.allow_colocation}};
  j["max_steps"] = c.max_steps;
  j["seed"] = c.seed;
  j["map"] = {{"r1", coord_json(c.map_r1)}};
  j["batch"] = {{"trials", c.batch_trials}};
  return j;
}

TrialConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t config_hash(const TrialConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_to_json(config).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

TrialRecord run_trial(const TrialConfig& config) {
  const GridDomain grid = make_grid(config.grid);
  const SourceModel model = make_model(grid, config.model);
  ProbabilityField field = make_prior(grid, config.prior);

  TrialRecord record;
  record.seed = config.seed;
  record.config_hash = config_hash(config);
  record.initial_entropy = entropy(field);

  Rng rng(config.seed);
  if (config.source) {
    record.true_source = grid.nearest_cell(*config.source);
  } else {
    const double u = uniform01(rng);
    double cdf = 0.0;
    record.true_source = grid.size() - 1;
    for (Cell c = 0; c < grid.size(); ++c) {
      cdf += field[c];
      if (u < cdf) {
        record.true_source = c;
        break;
      }
    }
  }

  std::vector<Cell> positions;
  for (Coord p : config.searchers) positions.push_back(grid.nearest_cell(p));
  if (any_on(positions, record.true_source)) {
    record.found_at = 0;
    return record;
  }

  for (std::size_t step = 1; step <= config.max_steps; ++step) {
    StepLog log;
    log.step = step;
    log.positions = positions;
    log.measurement = sample_measurement(model, record.true_source, positions, rng);
    field = bayes_update(field, log.measurement, model);
    field = exclude_cells(field, positions);
    log.entropy = entropy(field);

    const MoveScore choice = choose_move(field, model, positions, config.mode, config.planner);
    log.next_positions = choice.move.cells;
    log.moves = choice.move.steps;
    log.delta_s = choice.delta_s;
    positions = choice.move.cells;
    record.steps.push_back(std::move(log));

    if (any_on(positions, record.true_source)) {
      record.found_at = step;
      break;
    }
  }
  return record;
}

void write_trial_log(const TrialRecord& record, const TrialConfig& config, std::ostream& out) {
  const GridDomain grid = make_grid(config.grid);
  const auto cells_json = [&](const std::vector<Cell>& cells) {
    json a = json::array();
    for (Cell c : cells) a.push_back(coord_json(grid.center(c)));
    return a;
  };
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(record.config_hash));

  out << json{{"type", "header"},
              {"version", kVersion},
              {"seed", record.seed},
              {"config_hash", hash},
              {"config", config_to_json(config)},
              {"true_source", coord_json(grid.center(record.true_source))},
              {"initial_entropy", record.initial_entropy}}
             .dump()
      << '\n';
  for (const auto& s : record.steps) {
    json counts = json::array();
    for (const auto& r : s.measurement.readings) counts.push_back(r.count);
    json moves = json::array();
    for (Step m : s.moves) moves.push_back(std::string(to_string(m)));
    out << json{{"type", "step"},
                {"step", s.step},
                {"positions", cells_json(s.positions)},
                {"counts", counts},
                {"entropy", s.entropy},
                {"moves", moves},
                {"next_positions", cells_json(s.next_positions)},
                {"delta_s", s.delta_s}}
               .dump()
        << '\n';
  }
  json outcome{{"type", "outcome"}, {"steps_taken", record.steps.size()}};
  if (record.found_at) {
    outcome["outcome"] = "found";
    outcome["found_at"] = *record.found_at;
  } else {
    outcome["outcome"] = "exhausted";
  }
  out << outcome.dump() << '\n';
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

ModeSummary summarize(PlanMode mode, const std::vector<std::optional<std::size_t>>& found) {
  ModeSummary s;
  s.mode = mode;
  s.trials = found.size();
  std::vector<double> steps;
  for (const auto& f : found) {
    if (f) steps.push_back(static_cast<double>(*f));
  }
  s.found = steps.size();
  s.success_rate = static_cast<double>(s.found) / static_cast<double>(s.trials);
  s.mean_steps = mean(steps);
  s.median_steps = median(steps);
  s.stddev_steps = stddev(steps);
  return s;
}

}  // namespace

BatchSummary run_batch(const TrialConfig& config, std::size_t n_trials, std::uint64_t seed_base) {
  if (n_trials < 1) throw Error(ErrorCode::invalid_config, "n_trials must be at least 1");
  std::vector<std::optional<std::size_t>> coordinated(n_trials);
  std::vector<std::optional<std::size_t>> independent(n_trials);
  // Index 2i is trial i in coordinated mode, 2i + 1 the same seed independent.
  parallel_for(2 * n_trials, [&](std::size_t k) {
    TrialConfig c = config;
    c.seed = seed_base + k / 2;
    c.mode = k % 2 ? PlanMode::independent : PlanMode::coordinated;
    auto& slot = k % 2 ? independent[k / 2] : coordinated[k / 2];
    slot = run_trial(c).found_at;
  });

  BatchSummary b;
  b.coordinated = summarize(PlanMode::coordinated, coordinated);
  b.independent = summarize(PlanMode::independent, independent);
  std::vector<double> diffs;
  for (std::size_t i = 0; i < n_trials; ++i) {
    if (coordinated[i] && independent[i]) {
      diffs.push_back(static_cast<double>(*coordinated[i]) - static_cast<double>(*independent[i]));
    }
  }
  b.paired = diffs.size();
  b.mean_difference = mean(diffs);
  b.median_difference = median(diffs);
  b.ci95_half_width =
      diffs.empty() ? std::nan("") : 1.96 * stddev(diffs) / std::sqrt(static_cast<double>(diffs.size()));
  return b;
}

void write_batch_csv(const BatchSummary& summary, std::ostream& out) {
  using detail::format_g17;
  out << "row,trials,found,success_rate,mean_steps,median_steps,spread\n";
  for (const auto* m : {&summary.coordinated, &summary.independent}) {
    out << to_string(m->mode) << ',' << m->trials << ',' << m->found << ','
        << format_g17(m->success_rate) << ',' << format_g17(m->mean_steps) << ','
        << format_g17(m->median_steps) << ',' << format_g17(m->stddev_steps) << '\n';
  }
  out << "paired_difference," << summary.paired << ',' << summary.paired << ",,"
      << format_g17(summary.mean_difference) << ',' << format_g17(summary.median_difference) << ','
      << format_g17(summary.ci95_half_width) << '\n';
}

}  // namespace synsearch
