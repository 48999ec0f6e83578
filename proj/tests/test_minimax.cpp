#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "powersum/minimax.hpp"

using namespace powersum;
using namespace powersum::minimax;

namespace {

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> th(n);
  for (auto& t : th) t = uni(rng);
  return th;
}

}  // namespace

TEST(Objective, Examples) {
  EXPECT_NEAR(objective(fabrykowski_tuple(pds::singer_construct(2))), std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(objective(UnimodularTuple({0.3, 0.3, 0.3, 0.3, 0.3})), 5.0, 1e-12);
  for (std::size_t n : {2u, 3u, 4u, 7u}) {
    std::vector<double> th(n);
    for (std::size_t k = 0; k < n; ++k) th[k] = static_cast<double>(k) / n;
    EXPECT_NEAR(objective(UnimodularTuple(th)), static_cast<double>(n), 1e-9);
  }
}

TEST(Objective, GaugeInvariance) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    auto th = random_angles(rng, 2 + trial % 7);
    const double base = objective(UnimodularTuple(th));
    for (auto& t : th) t += 0.3183;
    EXPECT_NEAR(objective(UnimodularTuple(th)), base, 1e-12);
  }
}

TEST(Smoothed, LargeBetaOnFabrykowskiApproachesMaxSquared) {
  const auto t = fabrykowski_tuple(pds::singer_construct(2));
  // All six |S|^2 equal 2, so the value is exactly 2 + log(6)/beta.
  for (double beta : {1.0, 10.0, 1e3, 1e6}) {
    EXPECT_NEAR(smoothed_objective(t, beta), 2.0 + std::log(6.0) / beta, 1e-9);
  }
  EXPECT_NEAR(std::sqrt(smoothed_objective(t, 1e9)), std::sqrt(2.0), 1e-8);
}

TEST(Smoothed, SmallBetaMatchesDirectFormulaAndBoundsMax) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto th = random_angles(rng, 2 + trial % 5);
    const UnimodularTuple t(th);
    const double max_sq = std::pow(objective(t), 2);
    double prev = INFINITY;
    for (double beta : {0.01, 0.1, 0.5, 1.0, 4.0}) {
      const double v = smoothed_objective(t, beta);
      EXPECT_NEAR(v, oracle::smoothed_direct(th, beta), 1e-9 * std::max(1.0, std::abs(v)));
      EXPECT_GE(v, max_sq - 1e-12);
      EXPECT_LE(v, prev + 1e-12);  // decreasing in beta
      prev = v;
    }
  }
  EXPECT_THROW(smoothed_objective(UnimodularTuple({0.0, 0.5}), 0.0), Error);
}

TEST(Smoothed, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto th = random_angles(rng, n);
    const double beta = std::vector<double>{1.0, 4.0, 16.0, 64.0}[trial % 4] / (n * n);
    const auto sv = smoothed_value_and_gradient(th, beta);
    auto f = [&](const std::vector<double>& x) { return smoothed_value_and_gradient(x, beta).value; };
    for (std::size_t k = 0; k < n; ++k) {
      const double fd = oracle::central_difference(f, th, k, 1e-6);
      EXPECT_LE(std::abs(sv.grad[k] - fd), 1e-5 * std::max(1.0, std::abs(fd))) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Minimize, ConfigValidation) {
  OptimizerConfig c;
  c.n = 1;
  EXPECT_THROW(minimize(c), Error);
  c = {};
  c.restarts = 0;
  EXPECT_THROW(minimize(c), Error);
  c = {};
  c.smoothing_betas = {4.0, 1.0};
  EXPECT_THROW(minimize(c), Error);
}

TEST(Minimize, TripleReachesBoundAndRecovers) {
  OptimizerConfig c;
  c.n = 3;
  c.restarts = 10;
  c.seed = 2;
  const auto r = minimize(c);
  EXPECT_NEAR(r.best_value, std::sqrt(2.0), 1e-6);
  EXPECT_GE(r.gap_to_bound, -1e-6);
  EXPECT_EQ(r.bound_violations, 0u);
  ASSERT_EQ(r.recovered.status, RecoveryStatus::IsMinimizer);
  EXPECT_EQ(pds::canonical_form(*r.recovered.pds).residues, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_NEAR(objective(fabrykowski_tuple(*r.recovered.pds, r.recovered.alpha_turns)), std::sqrt(2.0), 1e-9);
  EXPECT_EQ(r.per_restart_values.size(), 10u);
  EXPECT_DOUBLE_EQ(r.best_value, *std::min_element(r.per_restart_values.begin(), r.per_restart_values.end()));
  EXPECT_DOUBLE_EQ(r.best_tuple.thetas()[0], 0.0);
}

TEST(Minimize, ReproducibleAndIndependentOfWorkers) {
  OptimizerConfig c;
  c.n = 4;
  c.restarts = 6;
  c.seed = 99;
  c.record_trace = true;
  const auto a = minimize(c);
  const auto b = minimize(c);
  c.workers = 3;
  const auto p = minimize(c);
  EXPECT_EQ(a.per_restart_values, b.per_restart_values);
  EXPECT_EQ(a.per_restart_values, p.per_restart_values);
  EXPECT_EQ(a.best_tuple.thetas(), p.best_tuple.thetas());
  EXPECT_EQ(a.trace.size(), p.trace.size());
  EXPECT_FALSE(a.trace.empty());
  c.seed = 100;
  c.workers = 1;
  EXPECT_NE(minimize(c).per_restart_values, a.per_restart_values);
}

TEST(Minimize, NeverBeatsLowerBound) {
  for (std::size_t n : {2u, 4u, 6u}) {
    OptimizerConfig c;
    c.n = n;
    c.restarts = 5;
    c.seed = 7;
    const auto r = minimize(c);
    EXPECT_EQ(r.bound_violations, 0u);
    EXPECT_GE(r.best_value, std::sqrt(n - 1.0) - 1e-9);
    EXPECT_GT(r.evaluations, 0u);
  }
}

TEST(Minimize, CoordinatePolishStillRespectsBound) {
  OptimizerConfig c;
  c.n = 3;
  c.restarts = 3;
  c.seed = 4;
  c.polish = Polish::CoordinateDescent;
  c.polish_tol = 1e-9;
  const auto r = minimize(c);
  EXPECT_EQ(r.bound_violations, 0u);
  EXPECT_GE(r.gap_to_bound, -1e-9);
}

TEST(Simplex, SmallLinearProgram) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6  -> (1.6, 1.2)
  const auto x = detail::simplex_max({{1, 2}, {3, 1}}, {4, 6}, {1, 1});
  EXPECT_NEAR(x[0], 1.6, 1e-12);
  EXPECT_NEAR(x[1], 1.2, 1e-12);
}
