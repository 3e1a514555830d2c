#pragma once

#include <array>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "synsearch/grid.hpp"
#include "synsearch/measurement.hpp"
#include "synsearch/random.hpp"

namespace synsearch {

/// pi(r0) = B exp(-|r_i - r0|^2): chance that searcher i catches a particle
/// emitted by a source at r0.
class DetectionKernel {
 public:
  /// amplitude must lie in (0, 1].
  static DetectionKernel make(double amplitude);

  double amplitude() const { return amplitude_; }
  double operator()(Coord searcher, Coord r0) const {
    return amplitude_ * std::exp(-squared_distance(searcher, r0));
  }

 private:
  explicit DetectionKernel(double amplitude) : amplitude_(amplitude) {}
  double amplitude_;
};

inline double detection_prob(const DetectionKernel& kernel, Coord searcher, Coord r0) {
  return kernel(searcher, r0);
}

// ---------------------------------------------------------------------------
// Poisson source

double poisson_pmf(unsigned k, double mean);

/// Smallest k_max with P(K > k_max) < tail for K ~ Poisson(mean).
unsigned poisson_truncation(double mean, double tail);

/// Closed form: prod_i Poisson(h_i; lambda0 * pi_i).
double poisson_product_probability(double lambda0, std::span<const double> pis,
                                   std::span<const unsigned> counts);

/// Sum over the total emitted count h_s >= sum(h_i) of Poisson(h_s; lambda0)
/// times the multinomial mass of sending h_i particles to searcher i and the
/// rest nowhere. Stops once the Poisson tail beyond h_s drops below `tail`.
/// Throws exclusion-violated when sum(pi_i) > 1.
double poisson_series_probability(double lambda0, std::span<const double> pis,
                                  std::span<const unsigned> counts, double tail);

class PoissonSource {
 public:
  /// Requires lambda0 > 0, epsilon in (0, 1e-6] and 2B <= 1 so that two
  /// searchers can share one particle stream under exclusion.
  static PoissonSource make(double lambda0, DetectionKernel kernel, double epsilon = 1e-12);

  double lambda0() const { return lambda0_; }
  const DetectionKernel& kernel() const { return kernel_; }
  double epsilon() const { return epsilon_; }
  /// Largest count kept in the per-searcher alphabet (tail below epsilon at
  /// the largest effective mean lambda0 * B).
  unsigned max_count() const { return max_count_; }

  double likelihood(std::span<const unsigned> counts, std::span<const Coord> positions,
                    Coord r0) const;
  double likelihood_series(std::span<const unsigned> counts, std::span<const Coord> positions,
                           Coord r0) const;

 private:
  PoissonSource(double lambda0, DetectionKernel kernel, double epsilon, unsigned max_count)
      : lambda0_(lambda0), kernel_(kernel), epsilon_(epsilon), max_count_(max_count) {}

  double lambda0_;
  DetectionKernel kernel_;
  double epsilon_;
  unsigned max_count_;
};

// ---------------------------------------------------------------------------
// Angularly correlated two-particle source

/// Four-quadrant direction from `from` to `to`, wrapped into [0, 2pi).
/// Throws coincident-points when the two coincide.
double bearing(Coord from, Coord to);

/// exp(-(|t1 - t2| - pi)^2 / sigma2), before the normalizer D.
double angular_f(double theta1, double theta2, double sigma2);

/// Joint detection probabilities indexed by h1 * 2 + h2 given the effective
/// per-searcher catch probabilities a = pi_1 D f and b = pi_2 D f.
inline std::array<double, 4> two_particle_table(double a, double b) {
  return {(1.0 - a) * (1.0 - b), (1.0 - a) * b, a * (1.0 - b), a * b};
}

class AngularSource {
 public:
  /// Grids with at most this many cells are fully validated at construction.
  static constexpr std::size_t kEagerValidationCells = 256;

  static AngularSource make(const GridDomain& grid, double sigma2, DetectionKernel kernel);

  const GridDomain& grid() const;
  double sigma2() const;
  const DetectionKernel& kernel() const;

  double detection(Cell searcher, Cell r0) const;

  /// D(r0, r1): makes the mean of D f over all cells r2 != r0 equal to one.
  double normalizer(Cell r0, Cell r1) const;

  /// Table entry P(h1, h2 | r0) for searchers at r1 and r2. When a searcher
  /// sits on r0 its bearing is undefined and both detections revert to the
  /// radial-only probabilities.
  double joint_likelihood(unsigned h1, unsigned h2, Cell r1, Cell r2, Cell r0) const;
  std::array<double, 4> joint_table(Cell r1, Cell r2, Cell r0) const;

  /// P(h | r0) = pi or 1 - pi.
  double marginal_likelihood(unsigned h, Cell r, Cell r0) const;

  /// Builds every normalizer row; throws probability-overflow if any
  /// pi_i D f exceeds 1 anywhere on the grid.
  void validate_all() const;

 private:
  struct Cache;
  explicit AngularSource(std::shared_ptr<const Cache> cache) : cache_(std::move(cache)) {}

  std::shared_ptr<const Cache> cache_;
};

// ---------------------------------------------------------------------------

/// Likelihood of every measurement outcome at every candidate source cell.
/// Outcome index enumerates the per-searcher counts with the first searcher
/// most significant: o = h1 * alphabet + h2.
struct LikelihoodTable {
  std::size_t searchers = 0;
  unsigned alphabet = 0;
  std::size_t cells = 0;
  std::vector<double> values;

  std::size_t outcomes() const { return values.size() / cells; }
  std::span<const double> row(std::size_t outcome) const {
    return std::span<const double>(values).subspan(outcome * cells, cells);
  }
  std::vector<unsigned> counts(std::size_t outcome) const;
};

class SourceModel {
 public:
  static SourceModel poisson(const GridDomain& grid, PoissonSource source);
  static SourceModel angular(AngularSource source);

  const GridDomain& grid() const { return grid_; }
  const PoissonSource* as_poisson() const { return std::get_if<PoissonSource>(&source_); }
  const AngularSource* as_angular() const { return std::get_if<AngularSource>(&source_); }

  /// Per-searcher count alphabet {0, ..., alphabet_size() - 1}.
  unsigned alphabet_size() const;

  /// P(meas | r0) for one or two searchers.
  double likelihood(const Measurement& meas, Cell r0) const;

  /// P(h | r0) for one searcher considered alone.
  double marginal_likelihood(unsigned h, Cell position, Cell r0) const;

  /// Full outcome-by-cell table. Poisson rows use per-searcher pmfs truncated
  /// at max_count() and renormalized, so every column sums to one.
  LikelihoodTable likelihood_table(std::span<const Cell> positions) const;
  /// Single-searcher table over its own count alphabet.
  LikelihoodTable marginal_table(Cell position) const;

 private:
  SourceModel(GridDomain grid, std::variant<PoissonSource, AngularSource> source)
      : grid_(grid), source_(std::move(source)) {}

  GridDomain grid_;
  std::variant<PoissonSource, AngularSource> source_;
};

/// Forward simulation of one time step with the source at true_r0.
Measurement sample_measurement(const SourceModel& model, Cell true_r0,
                               std::span<const Cell> positions, Rng& rng);

}  // namespace synsearch
