#include <benchmark/benchmark.h>

#include <random>

#include "least/agent/td3_agent.hpp"
#include "least/maze/maze_env.hpp"
#include "least/replay/replay_buffer.hpp"
#include "least/stop/stop_controller.hpp"

using namespace least;

namespace {

agent::Td3Agent make_agent() {
  std::mt19937_64 rng(1);
  return agent::Td3Agent(4, agent::ActionScale::symmetric(2), agent::Td3Config{}, rng);
}

replay::ReplayBuffer filled_buffer(Eigen::Index n) {
  replay::ReplayBuffer buf(n, 4, 2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    buf.push(Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)), Eigen::Vector2d(u(rng), u(rng)), u(rng),
             Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)), i % 50 == 0);
  }
  return buf;
}

}  // namespace

static void BM_MlpForwardBatch(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto net = nn::Mlp::uniform_init({6, 64, 64, 1}, nn::OutputActivation::kNone, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward_batch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForwardBatch)->Arg(1)->Arg(128)->Arg(1024);

static void BM_MlpForwardBackward(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto net = nn::Mlp::uniform_init({6, 64, 64, 1}, nn::OutputActivation::kNone, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 128);
  const Eigen::MatrixXd up = Eigen::MatrixXd::Ones(1, 128);
  for (auto _ : state) {
    const auto trace = net.forward_trace(x);
    benchmark::DoNotOptimize(net.backward(trace, up));
  }
}
BENCHMARK(BM_MlpForwardBackward);

static void BM_Td3TrainStep(benchmark::State& state) {
  auto ag = make_agent();
  const auto buf = filled_buffer(10000);
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    const auto batch = buf.sample(128, rng);
    benchmark::DoNotOptimize(ag.train_step(batch, rng));
  }
}
BENCHMARK(BM_Td3TrainStep);

static void BM_ProbeStep(benchmark::State& state) {
  const auto ag = make_agent();
  const Eigen::Vector4d s(1.5, 1.5, 0.1, 0.0), s2(1.6, 1.5, 0.1, 0.0);
  const Eigen::Vector2d a(0.3, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(ag.probe_step(s, a, -0.5, s2, false));
}
BENCHMARK(BM_ProbeStep);

static void BM_StopControllerEvaluate(benchmark::State& state) {
  stop::StopControllerConfig cfg;
  cfg.initial_episodes = static_cast<int>(state.range(0));
  cfg.min_episodes = cfg.initial_episodes;
  cfg.max_episodes = 2 * cfg.initial_episodes;
  stop::StopController ctrl(cfg);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(-3.0, 1.0);
  for (int e = 0; e < cfg.initial_episodes; ++e) {
    ctrl.begin_episode();
    for (int i = 0; i < 50; ++i) ctrl.record_step(i, n(rng), std::abs(n(rng)));
    ctrl.end_episode();
  }
  ctrl.begin_episode();
  ctrl.record_step(0, -3.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ctrl.evaluate(100000, 0, -3.0, 1.0));
}
BENCHMARK(BM_StopControllerEvaluate)->Arg(150)->Arg(300);

static void BM_MazeStep(benchmark::State& state) {
  maze::MazeEnv env(maze::MazeLayout::builtin(maze::SizeClass::kLarge));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  env.reset(rng);
  for (auto _ : state) {
    const auto r = env.step(Eigen::Vector2d(u(rng), u(rng)));
    if (r.done()) env.reset(rng);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MazeStep);

static void BM_ReplaySample(benchmark::State& state) {
  const auto buf = filled_buffer(100000);
  std::mt19937_64 rng(8);
  for (auto _ : state) benchmark::DoNotOptimize(buf.sample(128, rng));
}
BENCHMARK(BM_ReplaySample);
BENCHMARK_MAIN();
