#include "synsearch/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "synsearch/grid.hpp"
#include "synsearch/info_metrics.hpp"
#include "synsearch/random.hpp"
#include "synsearch/source_models.hpp"

namespace synsearch {

namespace {

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t below(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

CheckResult poisson_forms(Rng& rng) {
  CheckResult r{"poisson series == product form", true, 0.0, 1e-10};
  const auto grid = GridDomain::make(-0.5, 0.5, 9);
  for (int t = 0; t < 500; ++t) {
    const double lambda0 = uniform(rng, 1e-3, 5.0);
    const double b = uniform(rng, 1e-3, 0.5);
    const auto src = PoissonSource::make(lambda0, DetectionKernel::make(b));
    const Coord pos[] = {grid.center(below(rng, grid.size())), grid.center(below(rng, grid.size()))};
    const Coord r0 = grid.center(below(rng, grid.size()));
    const unsigned h[] = {static_cast<unsigned>(below(rng, 7)), static_cast<unsigned>(below(rng, 7))};
    r.worst = std::max(r.worst, std::abs(src.likelihood_series(h, pos, r0) - src.likelihood(h, pos, r0)));
  }
  r.passed = r.worst < r.tolerance;
  return r;
}

CheckResult r_identity(Rng& rng) {
  CheckResult r{"R definition == log form", true, 0.0, 1e-10};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t ns = 1 + below(rng, 4);
    const std::size_t n1 = 1 + below(rng, 3);
    const std::size_t n2 = 1 + below(rng, 3);
    std::vector<double> m(ns * n1 * n2);
    double total = 0.0;
    for (double& x : m) total += x = uniform01(rng) < 0.15 ? 0.0 : uniform01(rng);
    if (total == 0.0) continue;
    for (double& x : m) x /= total;
    const auto joint = JointDistribution::make(ns, n1, n2, std::move(m));
    r.worst = std::max(r.worst, std::abs(synergy_R(joint) - synergy_R_logform(joint)));
  }
  r.passed = r.worst < r.tolerance;
  return r;
}

CheckResult table_sums(Rng& rng) {
  CheckResult r{"two-particle table sums to one", true, 0.0, 1e-14};
  for (int t = 0; t < 10000; ++t) {
    const auto p = two_particle_table(uniform01(rng), uniform01(rng));
    r.worst = std::max(r.worst, std::abs(p[0] + p[1] + p[2] + p[3] - 1.0));
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

CheckResult angular_marginals(Rng& rng) {
  CheckResult r{"angular table marginalizes to radial probability", true, 0.0, 1e-10};
  const auto grid = GridDomain::make(-0.5, 0.5, 9);
  const auto src = AngularSource::make(grid, 1.1, DetectionKernel::make(0.01));
  const std::size_t n = grid.size();
  for (int t = 0; t < 10; ++t) {
    const Cell r0 = below(rng, n);
    Cell r1 = below(rng, n);
    if (r1 == r0) r1 = (r1 + 1) % n;
    for (unsigned h1 = 0; h1 < 2; ++h1) {
      double sum = 0.0;
      for (Cell r2 = 0; r2 < n; ++r2) {
        if (r2 == r0) continue;
        for (unsigned h2 = 0; h2 < 2; ++h2) sum += src.joint_likelihood(h1, h2, r1, r2, r0);
      }
      const double avg = sum / static_cast<double>(n - 1);
      r.worst = std::max(r.worst, std::abs(avg - src.marginal_likelihood(h1, r1, r0)));
    }
  }
  r.passed = r.worst < r.tolerance;
  return r;
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(poisson_forms(rng));
  out.push_back(r_identity(rng));
  out.push_back(table_sums(rng));
  out.push_back(angular_marginals(rng));
  return out;
}

}  // namespace synsearch
