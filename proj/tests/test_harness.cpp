#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "synsearch/error.hpp"
#include "synsearch/harness.hpp"

using namespace synsearch;
using nlohmann::json;

namespace {

ErrorCode config_code(const json& j) {
  try {
    config_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io_failure;
}

TrialConfig small_poisson() {
  return config_from_json(json::parse(R"({
    "grid": {"min": -0.5, "max": 0.5, "cells_per_axis": 9},
    "prior": {"type": "gaussian", "center": [0, 0], "variance": 0.05},
    "model": {"type": "poisson", "lambda0": 1.0, "amplitude": 0.5},
    "searchers": [[-0.25, 0], [0.25, 0]],
    "max_steps": 60,
    "seed": 5
  })"));
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  const auto c = config_from_json(json::object());
  CHECK(c.grid.cells_per_axis == 51);
  CHECK(c.model.kind == ModelSpec::Kind::angular);
  CHECK(c.model.effective_amplitude() == 0.002);
  CHECK(c.prior.variance == 0.02);
  CHECK(c.mode == PlanMode::coordinated);

  const auto once = config_to_json(c);
  const auto twice = config_to_json(config_from_json(once));
  CHECK(once == twice);
  CHECK(config_hash(c) == config_hash(config_from_json(once)));

  auto p = small_poisson();
  CHECK(p.model.effective_amplitude() == 0.5);
  CHECK(config_to_json(config_from_json(config_to_json(p))) == config_to_json(p));
  p.seed = 6;
  CHECK(config_hash(p) != config_hash(small_poisson()));
}

TEST_CASE("positions snap to cell centers") {
  const auto c = config_from_json(json::parse(R"({
    "grid": {"cells_per_axis": 11},
    "searchers": [[-0.21, 0.01]]
  })"));
  REQUIRE(c.searchers.size() == 1);
  CHECK(c.searchers[0].x == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(c.searchers[0].y == 0.0);
}

TEST_CASE("config validation") {
  CHECK(config_code(json::parse(R"({"grid": {"cells_per_axis": 1}})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"grid": {"min": 1, "max": 0}})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"searchers": [[2, 0]]})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"searchers": []})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"model": {"type": "other"}})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"model": {"type": "poisson", "amplitude": 0.8}})")) ==
        ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"grid": {"cells_per_axis": 11}, "model": {"type": "angular", "amplitude": 0.5}})")) ==
        ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"prior": {"variance": -1}})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"mode": "greedy"})")) == ErrorCode::invalid_config);
  CHECK(config_code(json::parse(R"({"source": {"type": "fixed"}})")) == ErrorCode::invalid_config);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("trial outcomes") {
  SUBCASE("searcher starts on the source") {
    auto c = small_poisson();
    c.source = c.searchers[0];
    const auto r = run_trial(c);
    REQUIRE(r.found_at.has_value());
    CHECK(*r.found_at == 0);
    CHECK(r.steps.empty());
  }
  SUBCASE("exhausted") {
    auto c = small_poisson();
    c.source = Coord{0.5, 0.5};
    c.max_steps = 1;
    const auto r = run_trial(c);
    CHECK_FALSE(r.found_at.has_value());
    CHECK(r.steps.size() == 1);
  }
  SUBCASE("entropy stays in range and searchers move one cell") {
    auto c = small_poisson();
    const auto g = make_grid(c.grid);
    const double smax = std::log2(static_cast<double>(g.size()));
    const auto r = run_trial(c);
    CHECK(r.initial_entropy <= smax);
    for (const auto& s : r.steps) {
      CHECK(s.entropy >= 0.0);
      CHECK(s.entropy <= smax + 1e-12);
      CHECK(s.delta_s <= 1e-12);
      for (std::size_t i = 0; i < s.positions.size(); ++i) {
        const long dx = long(g.column(s.next_positions[i])) - long(g.column(s.positions[i]));
        const long dy = long(g.row(s.next_positions[i])) - long(g.row(s.positions[i]));
        CHECK(std::abs(dx) + std::abs(dy) <= 1);
      }
    }
  }
}

TEST_CASE("trial logs are deterministic") {
  auto c = small_poisson();
  c.max_steps = 15;
  std::ostringstream a, b, d;
  write_trial_log(run_trial(c), c, a);
  write_trial_log(run_trial(c), c, b);
  CHECK(a.str() == b.str());
  c.seed = 99;
  write_trial_log(run_trial(c), c, d);
  CHECK(a.str() != d.str());

  std::istringstream lines(a.str());
  std::string line, last;
  std::getline(lines, line);
  CHECK(json::parse(line)["type"] == "header");
  while (std::getline(lines, line)) last = line;
  const auto outcome = json::parse(last);
  CHECK(outcome["type"] == "outcome");
}

TEST_CASE("angular trial runs") {
  const auto c = config_from_json(json::parse(R"({
    "grid": {"cells_per_axis": 11},
    "model": {"type": "angular", "sigma2": 1.1, "amplitude": 0.01},
    "source": {"type": "fixed", "position": [0.1, 0.0]},
    "max_steps": 30,
    "seed": 3
  })"));
  const auto r = run_trial(c);
  CHECK(r.steps.size() <= 30);
  if (r.found_at) CHECK(*r.found_at == r.steps.size());
}

TEST_CASE("batch summary") {
  auto c = small_poisson();
  c.max_steps = 40;
  const auto one = run_batch(c, 1, 10);
  CHECK(one.coordinated.trials == 1);
  CHECK(one.independent.trials == 1);
  CHECK(one.paired <= 1);

  const auto s = run_batch(c, 12, 100);
  CHECK(s.coordinated.trials == 12);
  CHECK(s.coordinated.found <= 12);
  CHECK(s.coordinated.success_rate == doctest::Approx(double(s.coordinated.found) / 12));
  MESSAGE("coordinated mean steps " << s.coordinated.mean_steps << ", independent "
                                    << s.independent.mean_steps << ", paired difference "
                                    << s.mean_difference << " +- " << s.ci95_half_width);

  std::ostringstream csv;
  write_batch_csv(s, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "row,trials,found,success_rate,mean_steps,median_steps,spread");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  const auto again = run_batch(c, 12, 100);
  std::ostringstream csv2;
  write_batch_csv(again, csv2);
  CHECK(csv.str() == csv2.str());
}
