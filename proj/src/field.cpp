#include "synsearch/field.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "synsearch/error.hpp"
#include "synsearch/source_models.hpp"
#include "text_format.hpp"

namespace synsearch {

namespace {

constexpr double kNormTolerance = 1e-12;

}  // namespace

ProbabilityField ProbabilityField::from_weights(const GridDomain& grid, std::vector<double> weights) {
  if (weights.size() != grid.size()) {
    throw Error(ErrorCode::invalid_parameter, "weight count does not match the grid");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::invalid_parameter, "weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::zero_evidence, "all weights are zero");
  }
  for (double& w : weights) w /= total;
  return ProbabilityField(grid, std::move(weights));
}

ProbabilityField ProbabilityField::from_normalized(const GridDomain& grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::invalid_parameter, "value count does not match the grid");
  }
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_parameter, "probabilities must be finite and non-negative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::invalid_parameter, "probabilities sum to " + detail::format_g17(total));
  }
  return ProbabilityField(grid, std::move(values));
}

ProbabilityField uniform_prior(const GridDomain& grid) {
  return ProbabilityField::from_normalized(
      grid, std::vector<double>(grid.size(), 1.0 / static_cast<double>(grid.size())));
}

ProbabilityField gaussian_prior(const GridDomain& grid, Coord center, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::non_positive_variance, "prior variance must be positive");
  }
  if (!grid.contains(center)) {
    throw Error(ErrorCode::off_grid, "prior center lies outside the grid");
  }
  std::vector<double> w(grid.size());
  for (Cell c = 0; c < grid.size(); ++c) {
    w[c] = std::exp(-squared_distance(grid.center(c), center) / variance);
  }
  return ProbabilityField::from_weights(grid, std::move(w));
}

double entropy(std::span<const double> masses) {
  double s = 0.0;
  for (double p : masses) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

ProbabilityField bayes_update(const ProbabilityField& field, std::span<const double> likelihood) {
  if (likelihood.size() != field.size()) {
    throw Error(ErrorCode::invalid_parameter, "likelihood size does not match the field");
  }
  std::vector<double> post(field.size());
  double evidence = 0.0;
  for (std::size_t c = 0; c < post.size(); ++c) {
    post[c] = field[c] * likelihood[c];
    evidence += post[c];
  }
  if (!(evidence > 0.0)) {
    throw Error(ErrorCode::zero_evidence, "measurement has zero probability under the prior");
  }
  for (double& p : post) p /= evidence;
  return ProbabilityField::from_normalized(field.grid(), std::move(post));
}

ProbabilityField bayes_update(const ProbabilityField& field, const Measurement& meas,
                              const SourceModel& model) {
  std::vector<double> lik(field.size());
  for (Cell r0 = 0; r0 < lik.size(); ++r0) lik[r0] = model.likelihood(meas, r0);
  return bayes_update(field, lik);
}

ProbabilityField exclude_cells(const ProbabilityField& field, std::span<const Cell> cells) {
  std::vector<double> lik(field.size(), 1.0);
  for (Cell c : cells) lik.at(c) = 0.0;
  return bayes_update(field, lik);
}

void write_field_csv(const ProbabilityField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  const auto& grid = field.grid();
  out << "x,y,p\n";
  for (Cell c = 0; c < grid.size(); ++c) {
    const Coord xy = grid.center(c);
    out << detail::format_g17(xy.x) << ',' << detail::format_g17(xy.y) << ','
        << detail::format_g17(field[c]) << '\n';
  }
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

ProbabilityField read_field_csv(const GridDomain& grid, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line) !=
                                     std::vector<std::string_view>{"x", "y", "p"}) {
    throw Error(ErrorCode::io_failure, path.string() + ": expected header x,y,p");
  }
  std::vector<double> values(grid.size(), 0.0);
  std::vector<bool> seen(grid.size(), false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = detail::split_csv_line(line);
    if (cols.size() != 3) throw Error(ErrorCode::io_failure, "malformed row: " + line);
    const Cell c = grid.nearest_cell({detail::parse_double(cols[0]), detail::parse_double(cols[1])});
    values[c] = detail::parse_double(cols[2]);
    seen[c] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::io_failure, path.string() + ": missing cells");
  }
  return ProbabilityField::from_normalized(grid, std::move(values));
}

}  // namespace synsearch
