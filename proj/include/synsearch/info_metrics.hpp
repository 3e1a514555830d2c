#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "synsearch/field.hpp"
#include "synsearch/source_models.hpp"

namespace synsearch {

enum class Axis { source, first, second };

/// Exact joint mass over (source cell, h1, h2). All information measures
/// below are computed from it in bits.
class JointDistribution {
 public:
  /// masses are laid out source-major: ((r0 * first) + h1) * second + h2.
  /// They must be non-negative and sum to 1 within 1e-12.
  static JointDistribution make(std::size_t source, std::size_t first, std::size_t second,
                                std::vector<double> masses);

  std::size_t extent(Axis axis) const;
  double operator()(std::size_t r0, std::size_t h1, std::size_t h2) const {
    return mass_[(r0 * first_ + h1) * second_ + h2];
  }
  std::span<const double> masses() const { return mass_; }

  /// Marginal over a single axis.
  std::vector<double> marginal(Axis axis) const;
  /// Marginal over two distinct axes, laid out a-major.
  std::vector<double> marginal(Axis a, Axis b) const;

 private:
  JointDistribution(std::size_t s, std::size_t f, std::size_t c, std::vector<double> m)
      : source_(s), first_(f), second_(c), mass_(std::move(m)) {}

  std::size_t source_;
  std::size_t first_;
  std::size_t second_;
  std::vector<double> mass_;
};

/// P(r0, h1, h2) = P(r0) P(h1, h2 | r0) for searchers at r1 and r2.
JointDistribution build_joint(const ProbabilityField& field, const SourceModel& model, Cell r1,
                              Cell r2);

/// I(A; B) between two distinct axes.
double mutual_information(const JointDistribution& joint, Axis a, Axis b);

/// I(H1; H2 | R0) = sum_r0 P(r0) I(H1; H2 | R0 = r0).
double conditional_mutual_information(const JointDistribution& joint);

/// R = I(H1; H2) - I(H1; H2 | R0). Negative means synergy, positive redundancy.
double synergy_R(const JointDistribution& joint);

/// The same quantity as a single expectation of
/// log2[P(h1|r0) P(h2|r0) P(h2|h1) / (P(h2) P(h1,h2|r0))].
double synergy_R_logform(const JointDistribution& joint);

}  // namespace synsearch
