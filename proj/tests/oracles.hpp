#pragma once

// Brute-force reference computations used only by the tests. They take the
// slow, literal route (explicit loops, explicit posteriors) and share no
// code with the library paths they check beyond the model's per-measurement
// likelihood.

#include <cmath>
#include <numbers>
#include <vector>

#include "synsearch/field.hpp"
#include "synsearch/info_metrics.hpp"
#include "synsearch/planner.hpp"
#include "synsearch/source_models.hpp"

namespace oracle {

using namespace synsearch;

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// H(X) - H(X|Y) written with explicit loops over a 2-D table p[x][y].
inline double mi_2d(const std::vector<std::vector<double>>& p) {
  const std::size_t nx = p.size();
  const std::size_t ny = p[0].size();
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += p[x][y];
      py[y] += p[x][y];
    }
  double hx = 0.0, hxy = 0.0, hy = 0.0;
  for (double v : px) hx -= plogp(v);
  for (double v : py) hy -= plogp(v);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) hxy -= plogp(p[x][y]);
  return hx - (hxy - hy);
}

// I(H1;H2|R0) via entropies: H(R,H1) + H(R,H2) - H(R,H1,H2) - H(R).
inline double cmi_entropies(const JointDistribution& j) {
  const std::size_t ns = j.extent(Axis::source), n1 = j.extent(Axis::first),
                    n2 = j.extent(Axis::second);
  double h_r = 0, h_r1 = 0, h_r2 = 0, h_all = 0;
  for (std::size_t r = 0; r < ns; ++r) {
    double pr = 0;
    std::vector<double> a(n1, 0.0), b(n2, 0.0);
    for (std::size_t x = 0; x < n1; ++x)
      for (std::size_t y = 0; y < n2; ++y) {
        const double p = j(r, x, y);
        pr += p;
        a[x] += p;
        b[y] += p;
        h_all -= plogp(p);
      }
    h_r -= plogp(pr);
    for (double v : a) h_r1 -= plogp(v);
    for (double v : b) h_r2 -= plogp(v);
  }
  return h_r1 + h_r2 - h_all - h_r;
}

inline std::vector<std::vector<double>> pair_table(const JointDistribution& j) {
  std::vector<std::vector<double>> t(j.extent(Axis::first),
                                     std::vector<double>(j.extent(Axis::second), 0.0));
  for (std::size_t r = 0; r < j.extent(Axis::source); ++r)
    for (std::size_t x = 0; x < t.size(); ++x)
      for (std::size_t y = 0; y < t[0].size(); ++y) t[x][y] += j(r, x, y);
  return t;
}

// Every counts vector in {0..alphabet-1}^n.
inline std::vector<std::vector<unsigned>> all_counts(std::size_t n, unsigned alphabet) {
  std::vector<std::vector<unsigned>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& prefix : out)
      for (unsigned h = 0; h < alphabet; ++h) {
        auto v = prefix;
        v.push_back(h);
        next.push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

// Expected entropy change by explicit enumeration: build every posterior with bayes_update
// from Measurement likelihoods and weight by the exact outcome probability.
inline double expected_delta_s(const ProbabilityField& field, const SourceModel& model,
                               const std::vector<Cell>& cells) {
  const double s0 = entropy(field);
  double find = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    bool dup = false;
    for (std::size_t k = 0; k < i; ++k) dup = dup || cells[k] == cells[i];
    if (!dup) find += field[cells[i]];
  }
  double expectation = 0.0;
  for (const auto& h : all_counts(cells.size(), model.alphabet_size())) {
    Measurement m;
    for (std::size_t i = 0; i < cells.size(); ++i) m.readings.push_back({cells[i], h[i]});
    double prob = 0.0;
    for (Cell r0 = 0; r0 < field.size(); ++r0) prob += field[r0] * model.likelihood(m, r0);
    if (prob <= 0.0) continue;
    const auto post = bayes_update(field, m, model);
    expectation += prob * (entropy(post) - s0);
  }
  return -find * s0 + (1.0 - find) * expectation;
}

}  // namespace oracle
