#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "least/errors.hpp"
#include "least/nn/adam.hpp"

using least::nn::adam_step;
using least::nn::AdamConfig;
using least::nn::AdamState;

TEST(Adam, ZeroGradientAtStartIsFixedPoint) {
  std::vector<double> p{0.5, -1.25, 3.0};
  const std::vector<double> g(3, 0.0);
  auto s = AdamState::zeros(3, AdamConfig{});
  adam_step(p, g, s);
  EXPECT_EQ(p, (std::vector<double>{0.5, -1.25, 3.0}));
  EXPECT_TRUE(s.first_moment.isZero(0.0));
  EXPECT_TRUE(s.second_moment.isZero(0.0));
  EXPECT_EQ(s.step_count, 1);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<double> p{0.0};
  auto s = AdamState::zeros(1, AdamConfig{1e-3, 0.9, 0.999, 1e-8});
  adam_step(p, std::vector<double>{1.0}, s);
  // m_hat = v_hat = 1, so the step is lr / (1 + eps).
  EXPECT_NEAR(p[0], -1e-3 / (1.0 + 1e-8), 1e-18);
}

TEST(Adam, FiveStepsMatchHandRecurrence) {
  const AdamConfig cfg{1e-3, 0.9, 0.999, 1e-8};
  std::vector<double> p{0.0};
  auto s = AdamState::zeros(1, cfg);
  double ref = 0.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 5; ++t) {
    adam_step(p, std::vector<double>{0.5}, s);
    m = 0.9 * m + 0.1 * 0.5;
    v = 0.999 * v + 0.001 * 0.25;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    ref -= 1e-3 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(p[0], ref, 1e-15) << "step " << t;
    EXPECT_EQ(s.step_count, t);
  }
}

TEST(Adam, NonFiniteGradientRejectedWithoutMutation) {
  std::vector<double> p{1.0, 2.0};
  auto s = AdamState::zeros(2, AdamConfig{});
  adam_step(p, std::vector<double>{0.1, 0.2}, s);
  const auto p_before = p;
  const auto s_before = s;
  EXPECT_THROW(adam_step(p, std::vector<double>{0.1, std::numeric_limits<double>::quiet_NaN()}, s),
               least::NonFiniteError);
  EXPECT_THROW(adam_step(p, std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}, s),
               least::NonFiniteError);
  EXPECT_EQ(p, p_before);
  EXPECT_EQ(s.step_count, s_before.step_count);
  EXPECT_EQ(s.first_moment, s_before.first_moment);
}

TEST(Adam, ShapeMismatchThrows) {
  std::vector<double> p{1.0, 2.0};
  auto s = AdamState::zeros(2, AdamConfig{});
  EXPECT_THROW(adam_step(p, std::vector<double>{1.0}, s), least::DimensionError);
}

TEST(Adam, ZeroGradientsKeepParametersAfterWarmState) {
  std::vector<double> p{1.0};
  auto s = AdamState::zeros(1, AdamConfig{});
  for (int i = 0; i < 3; ++i) adam_step(p, std::vector<double>{0.0}, s);
  EXPECT_EQ(p[0], 1.0);
}

TEST(Adam, MinimizesQuadratic) {
  std::vector<double> p{3.0, -2.0};
  auto s = AdamState::zeros(2, AdamConfig{0.05, 0.9, 0.999, 1e-8});
  for (int i = 0; i < 2000; ++i) adam_step(p, std::vector<double>{2.0 * (p[0] - 1.0), 2.0 * (p[1] + 0.5)}, s);
  EXPECT_NEAR(p[0], 1.0, 1e-3);
  EXPECT_NEAR(p[1], -0.5, 1e-3);
}
