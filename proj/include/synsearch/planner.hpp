#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "synsearch/field.hpp"
#include "synsearch/source_models.hpp"

namespace synsearch {

/// Single-searcher step. Order fixes tie-breaking.
enum class Step { stay, plus_x, minus_x, plus_y, minus_y, plus_x_plus_y, plus_x_minus_y,
                  minus_x_plus_y, minus_x_minus_y };

std::string_view to_string(Step step);

enum class Neighborhood { von_neumann, moore };
enum class PlanMode { coordinated, independent };

std::string_view to_string(Neighborhood n);
std::string_view to_string(PlanMode mode);
Neighborhood parse_neighborhood(std::string_view text);
PlanMode parse_plan_mode(std::string_view text);

struct PlannerOptions {
  Neighborhood neighborhood = Neighborhood::von_neumann;
  bool allow_colocation = true;
};

struct JointMove {
  std::vector<Cell> cells;
  std::vector<Step> steps;

  friend bool operator==(const JointMove&, const JointMove&) = default;
};

struct MoveScore {
  JointMove move;
  /// Expected entropy change in bits (non-positive up to rounding).
  double delta_s = 0.0;
  /// Posterior mass sitting on the proposed cells.
  double find_probability = 0.0;
  /// sum over outcomes of P(outcome) * (S_posterior - S_prior).
  double measurement_term = 0.0;
};

/// Steps available to one searcher from `cell`, clipped to the grid, in Step order.
std::vector<std::pair<Step, Cell>> searcher_options(Cell cell, const GridDomain& grid,
                                                    Neighborhood neighborhood);

/// Cartesian product of per-searcher options, the first searcher's step
/// varying slowest.
std::vector<JointMove> candidate_joint_moves(std::span<const Cell> positions,
                                             const GridDomain& grid,
                                             const PlannerOptions& options = {});

/// Expected entropy change of moving to move.cells and measuring there:
///   -P_find S + (1 - P_find) sum_meas P(meas) (S_post(meas) - S).
MoveScore expected_delta_S(const ProbabilityField& field, const SourceModel& model,
                           const JointMove& move);

/// The same expectation for an arbitrary measurement table, with the find
/// probability taken over the distinct cells in `occupied`.
MoveScore score_positions(const ProbabilityField& field, const LikelihoodTable& table,
                          std::span<const Cell> occupied);

/// Picks the next joint move. Coordinated: argmin of expected_delta_S over
/// all joint moves. Independent: each searcher minimizes its own
/// single-searcher expectation with the partner held where it is, then the
/// two choices are combined. Ties go to the earliest candidate.
MoveScore choose_move(const ProbabilityField& field, const SourceModel& model,
                      std::span<const Cell> positions, PlanMode mode,
                      const PlannerOptions& options = {});

}  // namespace synsearch
