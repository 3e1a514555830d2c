#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "synsearch/error.hpp"
#include "synsearch/info_metrics.hpp"

using namespace synsearch;

namespace {

JointDistribution random_joint(std::mt19937_64& gen, std::size_t ns, std::size_t n1,
                               std::size_t n2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(ns * n1 * n2);
  double total = 0.0;
  for (double& x : m) total += x = u(gen) < 0.15 ? 0.0 : u(gen);
  if (total == 0.0) m[0] = total = 1.0;
  for (double& x : m) x /= total;
  return JointDistribution::make(ns, n1, n2, std::move(m));
}

// H1, H2 uniform independent bits; source axis carries H1 xor H2.
JointDistribution xor_joint() {
  std::vector<double> m(8, 0.0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) m[((a ^ b) * 2 + a) * 2 + b] = 0.25;
  return JointDistribution::make(2, 2, 2, m);
}

}  // namespace

TEST_CASE("joint validation") {
  CHECK_THROWS_AS(JointDistribution::make(1, 2, 2, {0.5, 0.5, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(JointDistribution::make(1, 2, 2, {1.0}), Error);
}

TEST_CASE("mutual information") {
  SUBCASE("product distribution") {
    const double px[] = {0.2, 0.8}, py[] = {0.1, 0.6, 0.3};
    std::vector<double> m;
    for (double a : px)
      for (double b : py) m.push_back(a * b);
    const auto j = JointDistribution::make(1, 2, 3, m);
    CHECK(std::abs(mutual_information(j, Axis::first, Axis::second)) < 1e-12);
  }
  SUBCASE("perfectly correlated bits") {
    const auto j = JointDistribution::make(1, 2, 2, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(j, Axis::first, Axis::second) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("random joints against the entropy route") {
    std::mt19937_64 gen(17);
    for (int t = 0; t < 300; ++t) {
      const auto j = random_joint(gen, 3, 2, 2);
      const double mi = mutual_information(j, Axis::first, Axis::second);
      CHECK(std::abs(mi - oracle::mi_2d(oracle::pair_table(j))) < 1e-12);
      CHECK(mi >= -1e-12);
      CHECK(std::abs(mi - mutual_information(j, Axis::second, Axis::first)) < 1e-14);
      CHECK(mutual_information(j, Axis::source, Axis::first) >= -1e-12);
    }
  }
}

TEST_CASE("conditional mutual information") {
  SUBCASE("H2 copies H1 for every source value") {
    std::vector<double> m(3 * 2 * 2, 0.0);
    for (std::size_t r = 0; r < 3; ++r) {
      m[(r * 2 + 0) * 2 + 0] = 0.5 / 3.0;
      m[(r * 2 + 1) * 2 + 1] = 0.5 / 3.0;
    }
    const auto j = JointDistribution::make(3, 2, 2, m);
    CHECK(conditional_mutual_information(j) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random joints against the entropy route") {
    std::mt19937_64 gen(23);
    for (int t = 0; t < 300; ++t) {
      const auto j = random_joint(gen, 4, 3, 3);
      const double cmi = conditional_mutual_information(j);
      CHECK(std::abs(cmi - oracle::cmi_entropies(j)) < 1e-12);
      CHECK(cmi >= -1e-12);
    }
  }
}

TEST_CASE("synergy R") {
  CHECK(std::abs(synergy_R(xor_joint()) + 1.0) <= 1e-12);
  CHECK(std::abs(synergy_R_logform(xor_joint()) + 1.0) <= 1e-12);

  // Everything independent: every log argument is one.
  std::vector<double> m;
  for (double r : {0.3, 0.7})
    for (double a : {0.4, 0.6})
      for (double b : {0.1, 0.9}) m.push_back(r * a * b);
  const auto indep = JointDistribution::make(2, 2, 2, m);
  CHECK(std::abs(synergy_R_logform(indep)) < 1e-12);
  CHECK(std::abs(synergy_R(indep)) < 1e-12);

  std::mt19937_64 gen(29);
  std::uniform_int_distribution<std::size_t> ns(1, 4), nh(1, 3);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto j = random_joint(gen, ns(gen), nh(gen), nh(gen));
    worst = std::max(worst, std::abs(synergy_R(j) - synergy_R_logform(j)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("metrics are invariant under relabeling the count alphabets") {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 50; ++t) {
    const auto j = random_joint(gen, 3, 3, 2);
    std::vector<double> m(j.masses().size());
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 2; ++b) m[(r * 3 + (2 - a)) * 2 + (1 - b)] = j(r, a, b);
    const auto k = JointDistribution::make(3, 3, 2, m);
    CHECK(std::abs(synergy_R(j) - synergy_R(k)) < 1e-13);
    CHECK(std::abs(conditional_mutual_information(j) - conditional_mutual_information(k)) < 1e-13);
  }
}

TEST_CASE("build_joint") {
  const auto g = GridDomain::make(-0.5, 0.5, 5);
  const auto poisson = SourceModel::poisson(g, PoissonSource::make(1.5, DetectionKernel::make(0.4)));
  const auto angular = SourceModel::angular(AngularSource::make(g, 1.1, DetectionKernel::make(0.02)));
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  SUBCASE("point mass field yields one conditional slice") {
    std::vector<double> w(g.size(), 0.0);
    w[8] = 1.0;
    const auto field = ProbabilityField::from_weights(g, w);
    const auto j = build_joint(field, angular, 2, 20);
    const auto p = angular.as_angular()->joint_table(2, 20, 8);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) CHECK(j(8, a, b) == doctest::Approx(p[a * 2 + b]).epsilon(1e-15));
  }

  SUBCASE("normalized and consistent with the field") {
    for (int t = 0; t < 20; ++t) {
      std::vector<double> w(g.size());
      for (double& x : w) x = u(gen);
      const auto field = ProbabilityField::from_weights(g, w);
      for (const SourceModel* m : {&poisson, &angular}) {
        const auto j = build_joint(field, *m, t % 25, (7 * t) % 25);
        double total = 0.0;
        for (double x : j.masses()) total += x;
        CHECK(std::abs(total - 1.0) <= 1e-12);
        const auto pr = j.marginal(Axis::source);
        for (Cell c = 0; c < g.size(); ++c) CHECK(std::abs(pr[c] - field[c]) <= 1e-12);
      }
    }
  }

  SUBCASE("poisson joints carry no synergy") {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> w(g.size());
      for (double& x : w) x = u(gen);
      const auto field = ProbabilityField::from_weights(g, w);
      const auto j = build_joint(field, poisson, t % 25, (11 * t + 3) % 25);
      const double r = synergy_R(j);
      CHECK(std::abs(conditional_mutual_information(j)) <= 1e-12);
      CHECK(r >= -1e-12);
      CHECK(std::abs(r - mutual_information(j, Axis::first, Axis::second)) <= 1e-12);
      CHECK(std::abs(synergy_R_logform(j) - mutual_information(j, Axis::first, Axis::second)) <= 1e-10);
    }
  }
}
