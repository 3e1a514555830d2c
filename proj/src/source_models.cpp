#include "synsearch/source_models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "synsearch/error.hpp"
#include "text_format.hpp"

namespace synsearch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// P(K > k) for K ~ Poisson(mean), summed directly so that tiny tails keep
// their relative precision.
double poisson_upper_tail(unsigned k, double mean) {
  double sum = 0.0;
  for (unsigned j = k + 1;; ++j) {
    const double term = poisson_pmf(j, mean);
    sum += term;
    if (j > mean && (term == 0.0 || term < sum * 1e-17)) break;
  }
  return sum;
}

void check_counts(std::span<const unsigned> counts, std::size_t n) {
  if (counts.size() != n) {
    throw Error(ErrorCode::invalid_parameter, "one count per searcher is required");
  }
}

}  // namespace

DetectionKernel DetectionKernel::make(double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw Error(ErrorCode::invalid_parameter,
                "detection amplitude must lie in (0, 1], got " + detail::format_g17(amplitude));
  }
  return DetectionKernel(amplitude);
}

// ---------------------------------------------------------------------------
// Poisson

double poisson_pmf(unsigned k, double mean) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

unsigned poisson_truncation(double mean, double tail) {
  unsigned k = 0;
  while (poisson_upper_tail(k, mean) >= tail) ++k;
  return k;
}

double poisson_product_probability(double lambda0, std::span<const double> pis,
                                   std::span<const unsigned> counts) {
  check_counts(counts, pis.size());
  double p = 1.0;
  for (std::size_t i = 0; i < pis.size(); ++i) p *= poisson_pmf(counts[i], lambda0 * pis[i]);
  return p;
}

double poisson_series_probability(double lambda0, std::span<const double> pis,
                                  std::span<const unsigned> counts, double tail) {
  check_counts(counts, pis.size());
  const double caught = std::accumulate(pis.begin(), pis.end(), 0.0);
  if (caught > 1.0) {
    throw Error(ErrorCode::exclusion_violated,
                "detection probabilities sum to " + detail::format_g17(caught));
  }
  const double missed = 1.0 - caught;
  const unsigned total = std::accumulate(counts.begin(), counts.end(), 0u);

  // Part of the multinomial log-mass that does not depend on h_s.
  double fixed = 0.0;
  for (std::size_t i = 0; i < pis.size(); ++i) {
    if (counts[i] == 0) continue;
    if (pis[i] == 0.0) return 0.0;
    fixed += counts[i] * std::log(pis[i]) - std::lgamma(counts[i] + 1.0);
  }

  double sum = 0.0;
  for (unsigned hs = total;; ++hs) {
    const unsigned rest = hs - total;
    if (rest > 0 && missed == 0.0) break;
    const double log_multinomial = std::lgamma(hs + 1.0) + fixed - std::lgamma(rest + 1.0) +
                                   (rest > 0 ? rest * std::log(missed) : 0.0);
    sum += poisson_pmf(hs, lambda0) * std::exp(log_multinomial);
    if (poisson_upper_tail(hs, lambda0) < tail) break;
  }
  return sum;
}

PoissonSource PoissonSource::make(double lambda0, DetectionKernel kernel, double epsilon) {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
    throw Error(ErrorCode::invalid_parameter, "lambda0 must be positive");
  }
  if (!(epsilon > 0.0 && epsilon <= 1e-6)) {
    throw Error(ErrorCode::invalid_parameter, "epsilon must lie in (0, 1e-6]");
  }
  if (2.0 * kernel.amplitude() > 1.0) {
    throw Error(ErrorCode::exclusion_violated,
                "two searchers need 2B <= 1, got B = " + detail::format_g17(kernel.amplitude()));
  }
  return PoissonSource(lambda0, kernel, epsilon,
                       poisson_truncation(lambda0 * kernel.amplitude(), epsilon));
}

namespace {

std::vector<double> catch_probabilities(const DetectionKernel& kernel,
                                        std::span<const Coord> positions, Coord r0) {
  std::vector<double> pis;
  pis.reserve(positions.size());
  for (Coord p : positions) pis.push_back(kernel(p, r0));
  return pis;
}

}  // namespace

double PoissonSource::likelihood(std::span<const unsigned> counts,
                                 std::span<const Coord> positions, Coord r0) const {
  return poisson_product_probability(lambda0_, catch_probabilities(kernel_, positions, r0), counts);
}

double PoissonSource::likelihood_series(std::span<const unsigned> counts,
                                        std::span<const Coord> positions, Coord r0) const {
  return poisson_series_probability(lambda0_, catch_probabilities(kernel_, positions, r0), counts,
                                    epsilon_);
}

// ---------------------------------------------------------------------------
// Angular

double bearing(Coord from, Coord to) {
  if (from == to) throw Error(ErrorCode::coincident_points, "bearing of a point to itself");
  double t = std::atan2(to.y - from.y, to.x - from.x);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

double angular_f(double theta1, double theta2, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::non_positive_variance, "sigma2 must be positive");
  const double gap = std::abs(theta1 - theta2) - std::numbers::pi;
  return std::exp(-gap * gap / sigma2);
}

struct AngularSource::Cache {
  Cache(const GridDomain& g, double s2, DetectionKernel k)
      : grid(g), sigma2(s2), kernel(k), flags(new std::once_flag[g.size()]), rows(g.size()) {
    centers.reserve(g.size());
    for (Cell c = 0; c < g.size(); ++c) centers.push_back(g.center(c));
  }

  // rows[r1][r0] = D(r0, r1); NaN on the diagonal.
  const std::vector<double>& row(Cell r1) const {
    std::call_once(flags[r1], [&] { rows[r1] = build_row(r1); });
    return rows[r1];
  }

  std::vector<double> build_row(Cell r1) const {
    const std::size_t n = centers.size();
    std::vector<double> d(n, std::nan(""));
    std::vector<double> f(n);
    for (Cell r0 = 0; r0 < n; ++r0) {
      if (r0 == r1) continue;
      const double theta1 = bearing(centers[r1], centers[r0]);
      double sum = 0.0;
      double f_max = 0.0;
      for (Cell r2 = 0; r2 < n; ++r2) {
        if (r2 == r0) continue;
        f[r2] = angular_f(theta1, bearing(centers[r2], centers[r0]), sigma2);
        sum += f[r2];
        f_max = std::max(f_max, f[r2]);
      }
      const double norm = static_cast<double>(n - 1) / sum;
      // Table entries need pi_i D f <= 1 for every partner cell.
      double worst = kernel(centers[r1], centers[r0]) * norm * f_max;
      for (Cell r2 = 0; r2 < n; ++r2) {
        if (r2 == r0) continue;
        worst = std::max(worst, kernel(centers[r2], centers[r0]) * norm * f[r2]);
      }
      if (worst > 1.0) {
        throw Error(ErrorCode::probability_overflow,
                    "pi D f reaches " + detail::format_g17(worst) + " (B = " +
                        detail::format_g17(kernel.amplitude()) +
                        ", sigma2 = " + detail::format_g17(sigma2) + "); lower B or raise sigma2");
      }
      d[r0] = norm;
    }
    return d;
  }

  GridDomain grid;
  double sigma2;
  DetectionKernel kernel;
  std::vector<Coord> centers;
  std::unique_ptr<std::once_flag[]> flags;
  mutable std::vector<std::vector<double>> rows;
};

AngularSource AngularSource::make(const GridDomain& grid, double sigma2, DetectionKernel kernel) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::non_positive_variance, "sigma2 must be positive");
  }
  AngularSource src(std::make_shared<const Cache>(grid, sigma2, kernel));
  if (grid.size() <= kEagerValidationCells) src.validate_all();
  return src;
}

const GridDomain& AngularSource::grid() const { return cache_->grid; }
double AngularSource::sigma2() const { return cache_->sigma2; }
const DetectionKernel& AngularSource::kernel() const { return cache_->kernel; }

double AngularSource::detection(Cell searcher, Cell r0) const {
  return cache_->kernel(cache_->centers.at(searcher), cache_->centers.at(r0));
}

double AngularSource::normalizer(Cell r0, Cell r1) const {
  if (r0 == r1) throw Error(ErrorCode::coincident_points, "normalizer needs r1 != r0");
  return cache_->row(r1).at(r0);
}

std::array<double, 4> AngularSource::joint_table(Cell r1, Cell r2, Cell r0) const {
  const auto& c = cache_->centers;
  const double pi1 = detection(r1, r0);
  const double pi2 = detection(r2, r0);
  if (r1 == r0 || r2 == r0) return two_particle_table(pi1, pi2);
  const double df = normalizer(r0, r1) *
                    angular_f(bearing(c[r1], c[r0]), bearing(c[r2], c[r0]), cache_->sigma2);
  return two_particle_table(pi1 * df, pi2 * df);
}

double AngularSource::joint_likelihood(unsigned h1, unsigned h2, Cell r1, Cell r2, Cell r0) const {
  if (h1 > 1 || h2 > 1) {
    throw Error(ErrorCode::invalid_parameter, "angular source counts must be 0 or 1");
  }
  return joint_table(r1, r2, r0)[h1 * 2 + h2];
}

double AngularSource::marginal_likelihood(unsigned h, Cell r, Cell r0) const {
  if (h > 1) throw Error(ErrorCode::invalid_parameter, "angular source counts must be 0 or 1");
  const double pi = detection(r, r0);
  return h == 1 ? pi : 1.0 - pi;
}

void AngularSource::validate_all() const {
  for (Cell r1 = 0; r1 < cache_->grid.size(); ++r1) cache_->row(r1);
}

// ---------------------------------------------------------------------------
// SourceModel

std::vector<unsigned> LikelihoodTable::counts(std::size_t outcome) const {
  std::vector<unsigned> h(searchers);
  for (std::size_t i = searchers; i-- > 0;) {
    h[i] = static_cast<unsigned>(outcome % alphabet);
    outcome /= alphabet;
  }
  return h;
}

SourceModel SourceModel::poisson(const GridDomain& grid, PoissonSource source) {
  return SourceModel(grid, std::move(source));
}

SourceModel SourceModel::angular(AngularSource source) {
  const GridDomain grid = source.grid();
  return SourceModel(grid, std::move(source));
}

unsigned SourceModel::alphabet_size() const {
  if (const auto* p = as_poisson()) return p->max_count() + 1;
  return 2;
}

namespace {

void check_searchers(std::size_t n) {
  if (n < 1 || n > 2) throw Error(ErrorCode::invalid_parameter, "one or two searchers supported");
}

}  // namespace

double SourceModel::likelihood(const Measurement& meas, Cell r0) const {
  check_searchers(meas.searchers());
  if (const auto* p = as_poisson()) {
    std::vector<unsigned> counts;
    std::vector<Coord> positions;
    for (const auto& r : meas.readings) {
      counts.push_back(r.count);
      positions.push_back(grid_.center(r.cell));
    }
    return p->likelihood(counts, positions, grid_.center(r0));
  }
  const auto& a = *as_angular();
  const auto& rd = meas.readings;
  if (rd.size() == 1) return a.marginal_likelihood(rd[0].count, rd[0].cell, r0);
  return a.joint_likelihood(rd[0].count, rd[1].count, rd[0].cell, rd[1].cell, r0);
}

double SourceModel::marginal_likelihood(unsigned h, Cell position, Cell r0) const {
  if (const auto* p = as_poisson()) {
    return poisson_pmf(h, p->lambda0() * p->kernel()(grid_.center(position), grid_.center(r0)));
  }
  return as_angular()->marginal_likelihood(h, position, r0);
}

namespace {

// Poisson pmf over {0..max_count} at every cell, renormalized per cell.
std::vector<double> truncated_counts(const PoissonSource& src, const GridDomain& grid, Cell pos) {
  const unsigned alphabet = src.max_count() + 1;
  const std::size_t n = grid.size();
  std::vector<double> t(alphabet * n);
  for (Cell r0 = 0; r0 < n; ++r0) {
    const double mean = src.lambda0() * src.kernel()(grid.center(pos), grid.center(r0));
    double total = 0.0;
    for (unsigned h = 0; h < alphabet; ++h) total += t[h * n + r0] = poisson_pmf(h, mean);
    for (unsigned h = 0; h < alphabet; ++h) t[h * n + r0] /= total;
  }
  return t;
}

}  // namespace

LikelihoodTable SourceModel::likelihood_table(std::span<const Cell> positions) const {
  check_searchers(positions.size());
  if (positions.size() == 1) return marginal_table(positions[0]);
  const std::size_t n = grid_.size();
  LikelihoodTable table{2, alphabet_size(), n, {}};
  table.values.assign(static_cast<std::size_t>(table.alphabet) * table.alphabet * n, 0.0);

  if (const auto* p = as_poisson()) {
    const auto first = truncated_counts(*p, grid_, positions[0]);
    const auto second = truncated_counts(*p, grid_, positions[1]);
    for (unsigned h1 = 0; h1 < table.alphabet; ++h1) {
      for (unsigned h2 = 0; h2 < table.alphabet; ++h2) {
        double* out = table.values.data() + (h1 * table.alphabet + h2) * n;
        for (Cell r0 = 0; r0 < n; ++r0) out[r0] = first[h1 * n + r0] * second[h2 * n + r0];
      }
    }
    return table;
  }
  const auto& a = *as_angular();
  for (Cell r0 = 0; r0 < n; ++r0) {
    const auto probs = a.joint_table(positions[0], positions[1], r0);
    for (std::size_t o = 0; o < 4; ++o) table.values[o * n + r0] = probs[o];
  }
  return table;
}

LikelihoodTable SourceModel::marginal_table(Cell position) const {
  const std::size_t n = grid_.size();
  LikelihoodTable table{1, alphabet_size(), n, {}};
  if (const auto* p = as_poisson()) {
    table.values = truncated_counts(*p, grid_, position);
    return table;
  }
  table.values.resize(2 * n);
  for (Cell r0 = 0; r0 < n; ++r0) {
    const double pi = as_angular()->detection(position, r0);
    table.values[r0] = 1.0 - pi;
    table.values[n + r0] = pi;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

unsigned sample_poisson(double mean, Rng& rng) {
  const double u = uniform01(rng);
  unsigned k = 0;
  double p = std::exp(-mean);
  double cdf = p;
  while (u >= cdf && k < 10000) {
    ++k;
    p *= mean / k;
    cdf += p;
    if (p == 0.0 && k > mean) break;
  }
  return k;
}

template <std::size_t N>
std::size_t sample_categorical(const std::array<double, N>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double cdf = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    cdf += probs[i];
    if (u < cdf) return i;
  }
  return N - 1;
}

}  // namespace

Measurement sample_measurement(const SourceModel& model, Cell true_r0,
                               std::span<const Cell> positions, Rng& rng) {
  check_searchers(positions.size());
  const auto& grid = model.grid();
  Measurement meas;
  for (Cell c : positions) meas.readings.push_back({c, 0});

  if (const auto* p = model.as_poisson()) {
    const unsigned emitted = sample_poisson(p->lambda0(), rng);
    // Each particle goes to searcher 1, searcher 2 or nowhere.
    std::array<double, 3> split{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < positions.size(); ++i) {
      split[i] = p->kernel()(grid.center(positions[i]), grid.center(true_r0));
    }
    split[2] = 1.0 - split[0] - split[1];
    for (unsigned k = 0; k < emitted; ++k) {
      const std::size_t who = sample_categorical(split, rng);
      if (who < positions.size()) ++meas.readings[who].count;
    }
    return meas;
  }

  const auto& a = *model.as_angular();
  if (positions.size() == 1) {
    meas.readings[0].count = uniform01(rng) < a.detection(positions[0], true_r0) ? 1 : 0;
    return meas;
  }
  const std::size_t o = sample_categorical(a.joint_table(positions[0], positions[1], true_r0), rng);
  meas.readings[0].count = static_cast<unsigned>(o / 2);
  meas.readings[1].count = static_cast<unsigned>(o % 2);
  return meas;
}

}  // namespace synsearch
