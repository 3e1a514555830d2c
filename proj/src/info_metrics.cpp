#include "synsearch/info_metrics.hpp"

#include <cmath>
#include <string>

#include "synsearch/error.hpp"
#include "text_format.hpp"

namespace synsearch {

JointDistribution JointDistribution::make(std::size_t source, std::size_t first,
                                          std::size_t second, std::vector<double> masses) {
  if (source == 0 || first == 0 || second == 0 || masses.size() != source * first * second) {
    throw Error(ErrorCode::invalid_parameter, "joint shape does not match its mass count");
  }
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::invalid_parameter, "joint masses must be finite and non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_parameter, "joint mass sums to " + detail::format_g17(total));
  }
  return JointDistribution(source, first, second, std::move(masses));
}

std::size_t JointDistribution::extent(Axis axis) const {
  switch (axis) {
    case Axis::source: return source_;
    case Axis::first: return first_;
    case Axis::second: return second_;
  }
  return 0;
}

std::vector<double> JointDistribution::marginal(Axis axis) const {
  std::vector<double> out(extent(axis), 0.0);
  for (std::size_t r = 0; r < source_; ++r)
    for (std::size_t a = 0; a < first_; ++a)
      for (std::size_t b = 0; b < second_; ++b) {
        const std::size_t idx[] = {r, a, b};
        out[idx[static_cast<int>(axis)]] += (*this)(r, a, b);
      }
  return out;
}

std::vector<double> JointDistribution::marginal(Axis x, Axis y) const {
  if (x == y) throw Error(ErrorCode::invalid_parameter, "pair marginal needs distinct axes");
  const std::size_t ny = extent(y);
  std::vector<double> out(extent(x) * ny, 0.0);
  for (std::size_t r = 0; r < source_; ++r)
    for (std::size_t a = 0; a < first_; ++a)
      for (std::size_t b = 0; b < second_; ++b) {
        const std::size_t idx[] = {r, a, b};
        out[idx[static_cast<int>(x)] * ny + idx[static_cast<int>(y)]] += (*this)(r, a, b);
      }
  return out;
}

JointDistribution build_joint(const ProbabilityField& field, const SourceModel& model, Cell r1,
                              Cell r2) {
  const Cell positions[] = {r1, r2};
  const auto table = model.likelihood_table(positions);
  const std::size_t n = table.cells;
  const std::size_t outcomes = table.outcomes();
  std::vector<double> mass(n * outcomes);
  double total = 0.0;
  for (Cell r0 = 0; r0 < n; ++r0) {
    for (std::size_t o = 0; o < outcomes; ++o) {
      total += mass[r0 * outcomes + o] = field[r0] * table.values[o * n + r0];
    }
  }
  // Columns sum to one up to rounding; absorb it so the joint is exact.
  for (double& m : mass) m /= total;
  return JointDistribution::make(n, table.alphabet, table.alphabet, std::move(mass));
}

double mutual_information(const JointDistribution& joint, Axis a, Axis b) {
  const auto pab = joint.marginal(a, b);
  const auto pa = joint.marginal(a);
  const auto pb = joint.marginal(b);
  double info = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const double p = pab[i * pb.size() + j];
      if (p > 0.0) info += p * std::log2(p / (pa[i] * pb[j]));
    }
  }
  return info;
}

double conditional_mutual_information(const JointDistribution& joint) {
  const std::size_t ns = joint.extent(Axis::source);
  const std::size_t n1 = joint.extent(Axis::first);
  const std::size_t n2 = joint.extent(Axis::second);
  std::vector<double> p1(n1);
  std::vector<double> p2(n2);
  double info = 0.0;
  for (std::size_t r = 0; r < ns; ++r) {
    double pr = 0.0;
    std::fill(p1.begin(), p1.end(), 0.0);
    std::fill(p2.begin(), p2.end(), 0.0);
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) {
        const double p = joint(r, a, b);
        p1[a] += p;
        p2[b] += p;
        pr += p;
      }
    if (pr == 0.0) continue;
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) {
        const double p = joint(r, a, b);
        if (p > 0.0) info += p * std::log2(p * pr / (p1[a] * p2[b]));
      }
  }
  return info;
}

double synergy_R(const JointDistribution& joint) {
  return mutual_information(joint, Axis::first, Axis::second) -
         conditional_mutual_information(joint);
}

double synergy_R_logform(const JointDistribution& joint) {
  const std::size_t ns = joint.extent(Axis::source);
  const std::size_t n1 = joint.extent(Axis::first);
  const std::size_t n2 = joint.extent(Axis::second);
  const auto p_r = joint.marginal(Axis::source);
  const auto p_r1 = joint.marginal(Axis::source, Axis::first);
  const auto p_r2 = joint.marginal(Axis::source, Axis::second);
  const auto p_12 = joint.marginal(Axis::first, Axis::second);
  const auto p_1 = joint.marginal(Axis::first);
  const auto p_2 = joint.marginal(Axis::second);

  double r_value = 0.0;
  for (std::size_t r = 0; r < ns; ++r) {
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n2; ++b) {
        const double p = joint(r, a, b);
        if (p <= 0.0) continue;
        const double h1_given_r = p_r1[r * n1 + a] / p_r[r];
        const double h2_given_r = p_r2[r * n2 + b] / p_r[r];
        const double h2_given_h1 = p_12[a * n2 + b] / p_1[a];
        const double both_given_r = p / p_r[r];
        r_value += p * std::log2(h1_given_r * h2_given_r * h2_given_h1 / (p_2[b] * both_given_r));
      }
    }
  }
  return r_value;
}

}  // namespace synsearch
