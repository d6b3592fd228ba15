#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gml/witness.hpp"
#include "oracles.hpp"

using namespace gml;

namespace {

Vec scalar(double x) {
  Vec v(1);
  v << x;
  return v;
}

RegressionRegime scalar_instance(double eta) {
  Mat x(1, 1);
  x << 1.0;
  return {x, Vec::Zero(1), eta, Vec::Zero(1), 1.0, 1.0};
}

}  // namespace

TEST_CASE("contractive_step basics") {
  Vec mu(2);
  mu << 1.0, -1.0;
  AnchoredRegime r{"r", mu, 0.75};

  CHECK((contractive_step(mu, r) - mu).norm() == doctest::Approx(0.0));

  AnchoredRegime full{"r", mu, 1.0};
  Vec s(2);
  s << 5.0, 5.0;
  CHECK((contractive_step(s, full) - mu).norm() == doctest::Approx(0.0));

  Vec offset(2);
  offset << 2.0, 0.0;
  Vec out = contractive_step(mu + offset, r);
  CHECK((out - mu)[0] == doctest::Approx(1.0));
  CHECK((out - mu)[1] == doctest::Approx(0.0));
  CHECK((out - mu).squaredNorm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(contractive_step(Vec::Zero(3), r), DimensionMismatch);
  CHECK_THROWS_AS(contractive_step(s, AnchoredRegime{"r", mu, 0.0}), InvalidAlpha);
}

TEST_CASE("contraction is exact for random configurations") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    int dim = 1 + static_cast<int>(unit(rng) * 7.99);
    Vec mu(dim), s(dim);
    for (int i = 0; i < dim; ++i) {
      mu[i] = gauss(rng);
      s[i] = gauss(rng);
    }
    double alpha = 0.05 + 0.95 * unit(rng);
    AnchoredRegime r{"r", mu, alpha};
    double before = (s - mu).squaredNorm();
    double after = (contractive_step(s, r) - mu).squaredNorm();
    CHECK(after == doctest::Approx((1.0 - alpha) * before).epsilon(1e-12));
  }
}

TEST_CASE("epsilon_range endpoints") {
  EpsilonRange half = epsilon_range(0.5);
  CHECK(half.upper == doctest::Approx(1.0));
  CHECK(!half.unbounded);

  EpsilonRange one = epsilon_range(1.0);
  CHECK(one.unbounded);
  CHECK(one.contains(1e9));

  EpsilonRange fifth = epsilon_range(0.2);
  CHECK(fifth.upper == doctest::Approx(0.25));

  CHECK_THROWS_AS(epsilon_range(0.0), InvalidAlpha);
  CHECK_THROWS_AS(epsilon_range(1.5), InvalidAlpha);
}

TEST_CASE("every interior epsilon keeps the effective contraction strict") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double alpha = 0.05 + 0.9 * unit(rng);
    EpsilonRange range = epsilon_range(alpha);
    double eps = range.upper * (0.01 + 0.98 * unit(rng));
    CHECK(range.contains(eps));
    CHECK((1.0 + eps) * (1.0 - alpha) < 1.0);
  }
  CHECK(default_epsilon(1.0) == doctest::Approx(1.0));
  CHECK(default_epsilon(0.5) == doctest::Approx(0.5));
}

TEST_CASE("transport_overhead") {
  CHECK(transport_overhead(0.7, scalar(2.0), scalar(2.0)) == doctest::Approx(0.0));
  CHECK(transport_overhead(1.0, scalar(0.0), scalar(2.0)) == doctest::Approx(8.0));
  CHECK(transport_overhead(0.5, scalar(0.0), scalar(1.0)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(transport_overhead(0.0, scalar(0.0), scalar(1.0)), InvalidParams);
  CHECK_THROWS_AS(transport_overhead(1.0, scalar(0.0), Vec::Zero(2)), DimensionMismatch);
}

TEST_CASE("young split holds pointwise") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vec s(3), mu(3), mu2(3);
    for (int i = 0; i < 3; ++i) {
      s[i] = gauss(rng);
      mu[i] = gauss(rng);
      mu2[i] = gauss(rng);
    }
    double eps = pos(rng);
    double lhs = (s - mu2).squaredNorm();
    double rhs = (1.0 + eps) * (s - mu).squaredNorm() + (1.0 + 1.0 / eps) * (mu - mu2).squaredNorm();
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("single regime witness decays geometrically") {
  WitnessRun run = simulate_witness({{"r0", scalar(0.0), 0.5}}, {}, scalar(2.0), 10);
  REQUIRE(run.trajectory.w_values.size() == 11);
  for (std::size_t t = 0; t + 1 < run.trajectory.w_values.size(); ++t) {
    CHECK(run.trajectory.w_values[t + 1] ==
          doctest::Approx(0.5 * run.trajectory.w_values[t]).epsilon(1e-12));
    CHECK(run.trajectory.costs[t] == doctest::Approx(0.0));
  }
}

TEST_CASE("equal anchors make switching free") {
  WitnessRun run = simulate_witness({{"r0", scalar(1.0), 0.5}, {"r1", scalar(1.0), 0.5}}, {5},
                                    scalar(3.0), 10);
  for (double c : run.trajectory.costs) CHECK(c == doctest::Approx(0.0));
  for (std::size_t t = 0; t + 1 < run.trajectory.w_values.size(); ++t) {
    CHECK(run.trajectory.w_values[t + 1] ==
          doctest::Approx(0.5 * run.trajectory.w_values[t]).epsilon(1e-12));
  }
}

TEST_CASE("witness trajectory passes drift verification") {
  WitnessRun run = simulate_witness({{"r0", scalar(0.0), 0.5}, {"r1", scalar(2.0), 0.5}}, {5},
                                    scalar(1.5), 30);
  DriftReport report = verify_drift(DriftParams(run.effective_alpha, 0.0, 1.0), run.trajectory);
  CHECK(report.passed());
  CHECK(run.effective_alpha == doctest::Approx(0.25));
}

TEST_CASE("witness input validation") {
  CHECK_THROWS_AS(simulate_witness({}, {}, scalar(0.0), 5), InvalidParams);
  CHECK_THROWS_AS(simulate_witness({{"r0", scalar(0.0), 0.5}}, {2}, scalar(0.0), 5),
                  InvalidParams);
  CHECK_THROWS_AS(
      simulate_witness({{"r0", scalar(0.0), 0.5}, {"r1", scalar(1.0), 0.5}}, {7}, scalar(0.0), 5),
      InvalidParams);
  CHECK_THROWS_AS(
      simulate_witness({{"r0", Vec::Zero(2), 0.5}, {"r1", scalar(1.0), 0.5}}, {1}, scalar(0.0), 5),
      DimensionMismatch);
}

TEST_CASE("gradient_transport on the scalar instance") {
  CHECK(gradient_transport(scalar(0.5), scalar_instance(0.5))[0] == doctest::Approx(0.25));
  CHECK(gradient_transport(scalar(1.0), scalar_instance(2.0))[0] == doctest::Approx(-1.0));

  RegressionRegime r = scalar_instance(0.3);
  Vec minimizer = least_squares_minimizer(r);
  CHECK((gradient_transport(minimizer, r) - minimizer).norm() == doctest::Approx(0.0));
}

TEST_CASE("least squares minimizer and singular designs") {
  Mat x(2, 2);
  x << 1.0, 0.0, 0.0, 2.0;
  Vec y(2);
  y << 1.0, 4.0;
  RegressionRegime r{x, y, 0.1, Vec::Zero(2), 1.0, 1.0};
  Vec w = least_squares_minimizer(r);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(2.0));

  Mat deg(2, 2);
  deg << 1.0, 1.0, 1.0, 1.0;
  RegressionRegime singular{deg, y, 0.1, Vec::Zero(2), 1.0, 1.0};
  CHECK_THROWS_AS(least_squares_minimizer(singular), SingularDesign);
}

TEST_CASE("gradient step decreases the loss for small steps") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + trial % 3;
    Mat x(d + 1, d);
    Vec y(d + 1), w(d);
    for (int i = 0; i < d + 1; ++i) {
      y[i] = gauss(rng);
      for (int j = 0; j < d; ++j) x(i, j) = gauss(rng);
    }
    for (int j = 0; j < d; ++j) w[j] = gauss(rng);

    Eigen::SelfAdjointEigenSolver<Mat> eig(x.transpose() * x);
    double eta = 1.0 / eig.eigenvalues().maxCoeff();  // < 2 / lambda_max
    RegressionRegime r{x, y, eta, Vec::Zero(d), 1.0, 1.0};
    double before = (x * w - y).squaredNorm();
    double after = (x * gradient_transport(w, r) - y).squaredNorm();
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("toy admissibility on the scalar instance") {
  Certificate inside = toy_admissible(scalar(0.5), scalar_instance(0.5));
  CHECK(inside.admissible);
  CHECK(inside.cost == Cost::finite(0.0));

  Certificate outside = toy_admissible(scalar(2.0), scalar_instance(0.1));
  CHECK(!outside.admissible);
  CHECK(outside.cost.is_infinite());
  CHECK(outside.has_reason(FailureReason::ProtectedViolated));
  CHECK((*outside.transported_state)[0] == doctest::Approx(1.8));

  // identical scalar instances have coincident minimizers: zero shift cost
  RegressionRegime target = scalar_instance(0.5);
  Certificate with_cost = toy_admissible(scalar(0.5), scalar_instance(0.5), &target);
  CHECK(with_cost.cost == Cost::finite(0.0));

  Mat x(1, 1);
  x << 1.0;
  RegressionRegime shifted{x, scalar(2.0), 0.5, Vec::Zero(1), 10.0, 3.0};
  Certificate shift_cost = toy_admissible(scalar(0.5), scalar_instance(0.5), &shifted);
  // source c0 = 1, minimizers 0 and 2
  CHECK(shift_cost.cost.value() == doctest::Approx(4.0));
}

TEST_CASE("sufficient condition implies admissibility") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    double w = unit(rng);
    double eta = std::abs(unit(rng)) + 1e-3;
    RegressionRegime r = scalar_instance(eta);
    double grad = w;  // X^T (X w - y) with X = 1, y = 0
    if (std::abs(w) <= r.radius / 2.0 && eta * std::abs(grad) <= r.radius / 2.0) {
      CHECK(toy_admissible(scalar(w), r).admissible);
    }
  }
}

TEST_CASE("toy admissibility equals the direct inequality on a grid") {
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      double w = -2.0 + 4.0 * i / 49.0;
      double eta = 2.0 * (j + 1) / 51.0;
      bool got = toy_admissible(scalar(w), scalar_instance(eta)).admissible;
      CHECK(got == oracles::toy_region(w, eta));
    }
  }
}

TEST_CASE("scalarization obstruction demo") {
  ObstructionReport r = scalarization_obstruction(2.0, 1.0, 2.0, {0.5, 1.0, 3.0});
  CHECK(r.divergence);
  CHECK(r.penalty_maximizer == doctest::Approx(3.0));
  CHECK(r.penalty_value == doctest::Approx(4.0));
  REQUIRE(r.gated_maximizer.has_value());
  CHECK(*r.gated_maximizer == doctest::Approx(1.0));
  CHECK(r.gated_value == doctest::Approx(2.0));

  // penalty above every possible proxy gain on the grid removes divergence
  ObstructionReport tamed = scalarization_obstruction(2.0, 1.0, 7.0, {0.5, 1.0, 3.0});
  CHECK(!tamed.divergence);
  CHECK(tamed.penalty_maximizer == doctest::Approx(1.0));

  ObstructionReport compliant = scalarization_obstruction(2.0, 1.0, 2.0, {0.2, 0.5, 1.0});
  CHECK(!compliant.divergence);

  CHECK_THROWS_AS(scalarization_obstruction(2.0, 1.0, 2.0, {}), InvalidParams);
}

TEST_CASE("covering bound values") {
  CHECK(covering_bound({2, 2.0, 1.0}) == doctest::Approx(2.0 * std::log(5.0)));
  CHECK(covering_bound({0, 2.0, 1.0, 1.0, 0.7}) == doctest::Approx(0.7));
  CHECK(covering_bound({2, 2.0, 1.0, 2.0, 0.0}) == doctest::Approx(2.0 * std::log(9.0)));
  CHECK_THROWS_AS(covering_bound({2, 2.0, 0.0}), InvalidResolution);
  CHECK_THROWS_AS(covering_bound({2, 2.0, -1.0}), InvalidResolution);
}

TEST_CASE("covering bound dominates a greedy net") {
  for (int d = 1; d <= 3; ++d) {
    for (double eps : {0.5, 1.0}) {
      double diam = 2.0;
      // cube of diagonal diam so every pairwise distance is at most diam
      double side = diam / std::sqrt(static_cast<double>(d));
      auto points = oracles::cube_grid(d, side, 9);
      std::size_t net = oracles::greedy_net_size(points, eps);
      CHECK(std::log(static_cast<double>(net)) <= covering_bound({d, diam, eps}) + 1e-9);
    }
  }
}
