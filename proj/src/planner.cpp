#include "synsearch/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "synsearch/error.hpp"

namespace synsearch {

std::string_view to_string(Step step) {
  switch (step) {
    case Step::stay: return "stay";
    case Step::plus_x: return "+x";
    case Step::minus_x: return "-x";
    case Step::plus_y: return "+y";
    case Step::minus_y: return "-y";
    case Step::plus_x_plus_y: return "+x+y";
    case Step::plus_x_minus_y: return "+x-y";
    case Step::minus_x_plus_y: return "-x+y";
    case Step::minus_x_minus_y: return "-x-y";
  }
  return "?";
}

std::string_view to_string(Neighborhood n) {
  return n == Neighborhood::moore ? "moore" : "von_neumann";
}

std::string_view to_string(PlanMode mode) {
  return mode == PlanMode::coordinated ? "coordinated" : "independent";
}

Neighborhood parse_neighborhood(std::string_view text) {
  if (text == "von_neumann") return Neighborhood::von_neumann;
  if (text == "moore") return Neighborhood::moore;
  throw Error(ErrorCode::invalid_config, "unknown neighborhood '" + std::string(text) + "'");
}

PlanMode parse_plan_mode(std::string_view text) {
  if (text == "coordinated") return PlanMode::coordinated;
  if (text == "independent") return PlanMode::independent;
  throw Error(ErrorCode::invalid_config, "unknown mode '" + std::string(text) + "'");
}

std::vector<std::pair<Step, Cell>> searcher_options(Cell cell, const GridDomain& grid,
                                                    Neighborhood neighborhood) {
  struct Offset {
    Step step;
    int dx;
    int dy;
  };
  static constexpr std::array<Offset, 9> kOffsets{{{Step::stay, 0, 0},
                                                   {Step::plus_x, 1, 0},
                                                   {Step::minus_x, -1, 0},
                                                   {Step::plus_y, 0, 1},
                                                   {Step::minus_y, 0, -1},
                                                   {Step::plus_x_plus_y, 1, 1},
                                                   {Step::plus_x_minus_y, 1, -1},
                                                   {Step::minus_x_plus_y, -1, 1},
                                                   {Step::minus_x_minus_y, -1, -1}}};
  const std::size_t count = neighborhood == Neighborhood::moore ? 9 : 5;
  const auto n = static_cast<long>(grid.cells_per_axis());
  const auto ix = static_cast<long>(grid.column(cell));
  const auto iy = static_cast<long>(grid.row(cell));
  std::vector<std::pair<Step, Cell>> out;
  for (std::size_t k = 0; k < count; ++k) {
    const long x = ix + kOffsets[k].dx;
    const long y = iy + kOffsets[k].dy;
    if (x < 0 || y < 0 || x >= n || y >= n) continue;
    out.emplace_back(kOffsets[k].step,
                     grid.index(static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
  }
  return out;
}

std::vector<JointMove> candidate_joint_moves(std::span<const Cell> positions,
                                             const GridDomain& grid,
                                             const PlannerOptions& options) {
  if (positions.empty() || positions.size() > 2) {
    throw Error(ErrorCode::invalid_parameter, "one or two searchers supported");
  }
  for (Cell c : positions) {
    if (c >= grid.size()) throw Error(ErrorCode::off_grid, "searcher cell outside the grid");
  }
  std::vector<JointMove> moves;
  const auto first = searcher_options(positions[0], grid, options.neighborhood);
  if (positions.size() == 1) {
    for (const auto& [step, cell] : first) moves.push_back({{cell}, {step}});
    return moves;
  }
  const auto second = searcher_options(positions[1], grid, options.neighborhood);
  for (const auto& [s1, c1] : first) {
    for (const auto& [s2, c2] : second) {
      if (!options.allow_colocation && c1 == c2) continue;
      moves.push_back({{c1, c2}, {s1, s2}});
    }
  }
  return moves;
}

MoveScore score_positions(const ProbabilityField& field, const LikelihoodTable& table,
                          std::span<const Cell> occupied) {
  const double prior_entropy = entropy(field);

  double find = 0.0;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    if (std::find(occupied.begin(), occupied.begin() + i, occupied[i]) == occupied.begin() + i) {
      find += field[occupied[i]];
    }
  }

  const std::size_t n = table.cells;
  std::vector<double> joint(n);
  double expected_change = 0.0;
  for (std::size_t o = 0; o < table.outcomes(); ++o) {
    const auto lik = table.row(o);
    double evidence = 0.0;
    for (Cell r0 = 0; r0 < n; ++r0) evidence += joint[r0] = field[r0] * lik[r0];
    if (!(evidence > 0.0)) continue;
    double posterior_entropy = 0.0;
    for (Cell r0 = 0; r0 < n; ++r0) {
      const double p = joint[r0] / evidence;
      if (p > 0.0) posterior_entropy -= p * std::log2(p);
    }
    expected_change += evidence * (posterior_entropy - prior_entropy);
  }

  MoveScore score;
  score.find_probability = find;
  score.measurement_term = expected_change;
  score.delta_s = -find * prior_entropy + (1.0 - find) * expected_change;
  return score;
}

MoveScore expected_delta_S(const ProbabilityField& field, const SourceModel& model,
                           const JointMove& move) {
  auto score = score_positions(field, model.likelihood_table(move.cells), move.cells);
  score.move = move;
  return score;
}

namespace {

MoveScore best_of(const ProbabilityField& field, const SourceModel& model,
                  const std::vector<JointMove>& moves) {
  if (moves.empty()) throw Error(ErrorCode::invalid_parameter, "no admissible moves");
  MoveScore best = expected_delta_S(field, model, moves.front());
  for (std::size_t k = 1; k < moves.size(); ++k) {
    auto s = expected_delta_S(field, model, moves[k]);
    if (s.delta_s < best.delta_s) best = std::move(s);
  }
  return best;
}

// Ranked single-searcher options with the partner frozen at `partner`.
std::vector<std::pair<double, std::pair<Step, Cell>>> rank_alone(
    const ProbabilityField& field, const SourceModel& model, Cell from, const Cell* partner,
    Neighborhood neighborhood) {
  std::vector<std::pair<double, std::pair<Step, Cell>>> ranked;
  for (const auto& option : searcher_options(from, model.grid(), neighborhood)) {
    std::vector<Cell> occupied{option.second};
    if (partner) occupied.push_back(*partner);
    const double ds = score_positions(field, model.marginal_table(option.second), occupied).delta_s;
    ranked.emplace_back(ds, option);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return ranked;
}

}  // namespace

MoveScore choose_move(const ProbabilityField& field, const SourceModel& model,
                      std::span<const Cell> positions, PlanMode mode,
                      const PlannerOptions& options) {
  if (mode == PlanMode::coordinated || positions.size() == 1) {
    return best_of(field, model, candidate_joint_moves(positions, model.grid(), options));
  }
  if (positions.size() != 2) throw Error(ErrorCode::invalid_parameter, "one or two searchers supported");

  const auto first = rank_alone(field, model, positions[0], &positions[1], options.neighborhood);
  const auto second = rank_alone(field, model, positions[1], &positions[0], options.neighborhood);
  const auto& pick1 = first.front().second;
  auto pick2 = second.front().second;
  if (!options.allow_colocation && pick2.second == pick1.second) {
    const auto it = std::find_if(second.begin(), second.end(),
                                 [&](const auto& r) { return r.second.second != pick1.second; });
    if (it == second.end()) throw Error(ErrorCode::invalid_parameter, "no admissible moves");
    pick2 = it->second;
  }
  return expected_delta_S(field, model, JointMove{{pick1.second, pick2.second}, {pick1.first, pick2.first}});
}

}  // namespace synsearch
