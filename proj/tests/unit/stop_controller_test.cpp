#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "least/errors.hpp"
#include "least/stats.hpp"
#include "least/stop/stop_controller.hpp"
#include "truth_table.hpp"

using namespace least::stop;

namespace {

StopControllerConfig small_config(int k = 4, int l = 5) {
  StopControllerConfig c;
  c.initial_episodes = k;
  c.min_episodes = k;
  c.max_episodes = 2 * k;
  c.max_episode_len = l;
  return c;
}

void add_episode(StopController& ctrl, const std::vector<double>& q, const std::vector<double>& g) {
  ctrl.begin_episode();
  for (std::size_t i = 0; i < q.size(); ++i) ctrl.record_step(static_cast<int>(i), q[i], g[i]);
  ctrl.end_episode();
}

// Histogram entropy recomputed from scratch.
double entropy_oracle(std::vector<double> v) {
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) return 0.0;
  std::vector<int> bins(32, 0);
  for (double x : v) {
    int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * 32.0));
    bins[static_cast<std::size_t>(std::min(b, 31))]++;
  }
  double h = 0.0;
  for (int c : bins) {
    if (c) h -= c / double(v.size()) * std::log(c / double(v.size()));
  }
  return h;
}

}  // namespace

TEST(StopRule, TruthTable) {
  for (const auto& c : least::testing::kStopTruthTable) {
    EXPECT_EQ(effective_threshold(c.omega, c.epsilon, c.q_min, c.q_max), c.threshold) << c.name;
    EXPECT_EQ(stop_decision(c.q_hat, c.omega, c.epsilon, c.q_min, c.q_max), c.stop) << c.name;
  }
}

TEST(StopRule, WorkedExamples) {
  EXPECT_TRUE(stop_decision(0.4, 0.5, 1.0, 0.0, 2.0));
  EXPECT_EQ(effective_threshold(0.5, -1.0, -1.8, -0.2), -1.8);
  EXPECT_FALSE(stop_decision(-1.5, 0.5, -1.0, -1.8, -0.2));
}

TEST(StopRule, ThresholdAlwaysWithinColumnBounds) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 5.0);
  std::uniform_real_distribution<double> w(1e-3, 10.0);
  for (int i = 0; i < 10000; ++i) {
    double a = n(rng), b = n(rng);
    if (a > b) std::swap(a, b);
    const double t = effective_threshold(w(rng), n(rng), a, b);
    EXPECT_GE(t, a);
    EXPECT_LE(t, b);
  }
}

TEST(StopRule, ScaleEquivariantForNonNegativeEpsilon) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int i = 0; i < 5000; ++i) {
    const double eps = u(rng), omega = w(rng), q = u(rng);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double s = 4.0;  // power of two keeps scaling exact
    EXPECT_EQ(stop_decision(q, omega, eps, a, b), stop_decision(s * q, omega, s * eps, s * a, s * b));
  }
}

TEST(Omega, Examples) {
  StopControllerConfig c = small_config(3, 2);
  c.omega_scale = 1.0;
  StopController ctrl(c);
  add_episode(ctrl, {0.0}, {1.0});
  add_episode(ctrl, {0.0}, {2.0});
  add_episode(ctrl, {0.0}, {3.0});
  EXPECT_EQ(*ctrl.compute_omega(0, 4.0), 0.5);  // median 2, G 4
  EXPECT_EQ(*ctrl.compute_omega(0, 0.0), 2.0 / kOmegaFloor);

  c.omega_scale = 0.5;
  StopController half(c);
  add_episode(half, {0.0}, {2.0});
  add_episode(half, {0.0}, {3.0});
  add_episode(half, {0.0}, {4.0});
  EXPECT_EQ(*half.compute_omega(0, 1.5), 1.0);
}

TEST(ColumnThreshold, MedianExamples) {
  StopController ctrl(small_config(3, 2));
  for (double v : {1.0, 3.0, 2.0}) add_episode(ctrl, {v}, {1.0});
  EXPECT_EQ(*ctrl.column_threshold(0), 2.0);
  StopController outlier(small_config(3, 2));
  for (double v : {1.0, 2.0, 100.0}) add_episode(outlier, {v}, {1.0});
  EXPECT_EQ(*outlier.column_threshold(0), 2.0);
}

TEST(ColumnThreshold, MedianBreakdownBound) {
  // Contaminating m cells moves the median by at most m order statistics.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(-3.0, 1.0);
  const int k = 150;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> clean(k);
    for (auto& v : clean) v = n(rng);
    std::vector<double> sorted = clean;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> dirty = clean;
    const int m = 8;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < m; ++i) dirty[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] *= 10.0;
    const double md = least::median(dirty);
    EXPECT_GE(md, sorted[static_cast<std::size_t>(k / 2 - 1 - m)]);
    EXPECT_LE(md, sorted[static_cast<std::size_t>(k / 2 + m)]);
  }
}

TEST(Entropy, ConstantIsZeroAndUniformIsLog32) {
  StopController ctrl(small_config(64, 2));
  for (int e = 0; e < 64; ++e) add_episode(ctrl, {3.0}, {1.0});
  EXPECT_EQ(ctrl.current_entropy(), 0.0);

  StopController uni(small_config(64, 2));
  for (int e = 0; e < 64; ++e) add_episode(uni, {(e % 32) + 0.5}, {1.0});  // two per bin
  EXPECT_NEAR(uni.current_entropy(), std::log(32.0), 1e-12);
}

TEST(Entropy, MatchesHistogramOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  StopController ctrl(small_config(40, 6));
  std::vector<double> all;
  for (int e = 0; e < 40; ++e) {
    std::vector<double> q, g;
    for (int i = 0; i < 6; ++i) {
      q.push_back(n(rng));
      g.push_back(1.0);
    }
    all.insert(all.end(), q.begin(), q.end());
    add_episode(ctrl, q, g);
  }
  EXPECT_NEAR(ctrl.current_entropy(), entropy_oracle(all), 1e-12);
}

TEST(Entropy, EmptyMatrixThrows) {
  StopController ctrl(small_config());
  EXPECT_THROW(ctrl.current_entropy(), std::invalid_argument);
}

TEST(Resize, EqualEntropyDoesNotGrow) {
  StopControllerConfig c = small_config(150, 2);
  c.max_episodes = 300;
  StopController ctrl(c);
  for (int e = 0; e < 64; ++e) add_episode(ctrl, {(e % 32) + 0.5}, {1.0});
  ctrl.set_entropy_baseline(ctrl.current_entropy());
  EXPECT_EQ(ctrl.maybe_resize(), ResizeOutcome::kUnchanged);
  EXPECT_EQ(ctrl.capacity(), 150);
}

TEST(Resize, OverflowGrowsByH) {
  StopControllerConfig c = small_config(150, 2);
  c.max_episodes = 300;
  StopController ctrl(c);
  for (int e = 0; e < 64; ++e) add_episode(ctrl, {(e % 32) + 0.5}, {1.0});
  ctrl.set_entropy_baseline(ctrl.current_entropy() / 1.1);
  EXPECT_EQ(ctrl.maybe_resize(), ResizeOutcome::kGrew);
  EXPECT_EQ(ctrl.capacity(), 160);
  for (int i = 0; i < 30; ++i) ctrl.maybe_resize();
  EXPECT_EQ(ctrl.capacity(), 300);
}

TEST(Resize, ShrinksBackButNotBelowInitial) {
  StopControllerConfig c = small_config(10, 2);
  c.min_episodes = 5;
  c.max_episodes = 40;
  StopController ctrl(c);
  for (int e = 0; e < 10; ++e) add_episode(ctrl, {static_cast<double>(e)}, {1.0});
  ctrl.set_entropy_baseline(0.0);
  ctrl.maybe_resize();
  ctrl.maybe_resize();
  EXPECT_EQ(ctrl.capacity(), 30);
  ctrl.set_entropy_baseline(100.0);
  EXPECT_EQ(ctrl.maybe_resize(), ResizeOutcome::kShrank);
  EXPECT_EQ(ctrl.capacity(), 20);
  ctrl.maybe_resize();
  EXPECT_EQ(ctrl.maybe_resize(), ResizeOutcome::kUnchanged);
  EXPECT_EQ(ctrl.capacity(), 10);
}

TEST(Resize, OnlyOnCheckInterval) {
  StopControllerConfig c = small_config(4, 2);
  c.entropy_check_interval = 100;
  StopController ctrl(c);
  add_episode(ctrl, {1.0}, {1.0});
  add_episode(ctrl, {2.0}, {1.0});
  EXPECT_FALSE(ctrl.on_global_step(100).has_value());  // no baseline yet
  ctrl.set_entropy_baseline(0.0);
  EXPECT_FALSE(ctrl.on_global_step(150).has_value());
  EXPECT_EQ(ctrl.on_global_step(200), ResizeOutcome::kGrew);
}

TEST(Controller, InertBeforeStartStep) {
  StopControllerConfig c = small_config(4, 3);
  c.start_step = 1000;
  StopController ctrl(c);
  for (int e = 0; e < 4; ++e) add_episode(ctrl, {5.0, 5.0}, {1.0, 1.0});
  ctrl.begin_episode();
  ctrl.record_step(0, -100.0, 1.0);
  for (std::int64_t t = 0; t < 1000; ++t) EXPECT_FALSE(ctrl.evaluate(t, 0, -100.0, 1.0).has_value());
  EXPECT_FALSE(ctrl.entropy_baseline().has_value());
  const auto v = ctrl.evaluate(1000, 0, -100.0, 1.0);
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(v->stop);
  EXPECT_TRUE(ctrl.entropy_baseline().has_value());
}

TEST(Controller, DisabledNeverEvaluates) {
  StopControllerConfig c = small_config(4, 3);
  c.enabled = false;
  StopController ctrl(c);
  add_episode(ctrl, {5.0}, {1.0});
  EXPECT_FALSE(ctrl.evaluate(10, 0, -100.0, 1.0).has_value());
}

TEST(Controller, VerdictUsesValidColumnBounds) {
  StopController ctrl(small_config(4, 3));
  add_episode(ctrl, {-1.0, -2.0}, {1.0, 1.0});
  add_episode(ctrl, {-3.0}, {1.0});
  add_episode(ctrl, {-2.0, -4.0}, {1.0, 1.0});
  ctrl.begin_episode();
  ctrl.record_step(0, -1.0, 2.0);
  const auto v = ctrl.evaluate(0, 1, -3.5, 2.0);
  ASSERT_TRUE(v.has_value());
  // column 1: valid {-2, -4}; filled with min over columns >= 1 = -4 for the
  // short and open rows -> {-2, -4, -4, -4}, median -4.
  EXPECT_EQ(v->epsilon, -4.0);
  EXPECT_EQ(v->q_min, -4.0);
  EXPECT_EQ(v->q_max, -2.0);
  EXPECT_EQ(v->omega, 0.5 * 1.0 / 2.0);
  EXPECT_EQ(v->threshold, -4.0);  // -4 / 0.25 = -16, clipped to -4
  EXPECT_FALSE(v->stop);
}

TEST(Controller, RecordStepBeyondLengthThrows) {
  StopController ctrl(small_config(4, 3));
  ctrl.begin_episode();
  ctrl.record_step(0, 0.0, 0.0);
  ctrl.record_step(1, 0.0, 0.0);
  ctrl.record_step(2, 0.0, 0.0);
  EXPECT_THROW(ctrl.record_step(3, 0.0, 0.0), least::DimensionError);
}

TEST(Controller, ConfigJsonRoundTripAndDefaults) {
  StopControllerConfig c;
  c.initial_episodes = 120;
  c.start_step = 777;
  c.entropy_baseline = 1.5;
  const auto back = nlohmann::json(c).get<StopControllerConfig>();
  EXPECT_EQ(back.initial_episodes, 120);
  EXPECT_EQ(back.start_step, 777);
  EXPECT_EQ(back.entropy_baseline, 1.5);
  const auto derived = nlohmann::json{{"K", 80}}.get<StopControllerConfig>();
  EXPECT_EQ(derived.min_episodes, 80);
  EXPECT_EQ(derived.max_episodes, 160);
}

TEST(Controller, DumpHasMatricesAndThresholds) {
  StopController ctrl(small_config(4, 3));
  add_episode(ctrl, {1.0, 2.0}, {0.5, 0.5});
  const auto d = ctrl.dump();
  EXPECT_EQ(d.at("q_matrix").size(), 1u);
  EXPECT_EQ(d.at("column_thresholds").size(), 3u);
  EXPECT_EQ(d.at("column_thresholds")[0].get<double>(), 1.0);
  EXPECT_TRUE(d.at("column_thresholds")[2].is_null());
}
