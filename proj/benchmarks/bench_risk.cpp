// Copyright 2026 The rssrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rssrisk/experiments.hpp"
#include "rssrisk/risk_index.hpp"
#include "rssrisk/simulator.hpp"
#include "rssrisk/statistics.hpp"
#include "rssrisk/verify.hpp"

using namespace rssrisk;

namespace
{

struct Draw
{
  core::LongitudinalPairState lon;
  core::LateralPairState lat;
};

std::vector<Draw> make_draws(size_t n)
{
  std::mt19937_64 rng(1ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Draw> draws(n);
  for (auto & d : draws) {
    d.lon = {40.0 * u(rng), 40.0 * u(rng), 200.0 * u(rng)};
    d.lat = {-3.0 + 6.0 * u(rng), -3.0 + 6.0 * u(rng), 10.0 * u(rng)};
  }
  return draws;
}

void BM_RiskBreakdown(benchmark::State & state)
{
  const auto scenario = experiments::default_two_lane_scenario();
  const auto draws = make_draws(1024);
  size_t i = 0;
  for (auto _ : state) {
    const auto & d = draws[i++ & 1023];
    benchmark::DoNotOptimize(core::risk_breakdown(
      d.lon, d.lat, scenario.rss.lon, scenario.rss.lat, scenario.risk));
  }
}
BENCHMARK(BM_RiskBreakdown);

void BM_ScenarioSecond(benchmark::State & state)
{
  auto scenario = experiments::default_two_lane_scenario();
  scenario.horizon = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::run_scenario(scenario));
  }
  state.SetItemsProcessed(state.iterations() * 100);  // steps per run
}
BENCHMARK(BM_ScenarioSecond);

void BM_VerifyZeroRisk(benchmark::State & state)
{
  const auto scenario = experiments::default_two_lane_scenario();
  geometry::VehicleState rear;
  rear.id = "rear";
  rear.y = 1.75;
  rear.v_x = 20.0;
  geometry::VehicleState front = rear;
  front.id = "front";
  front.x = 120.0;
  front.v_x = 10.0;

  verify::VerifyConfig cfg;
  cfg.accel_grid_levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
      verify::verify_zero_risk(rear, front, scenario.rss, scenario.risk, cfg));
  }
}
BENCHMARK(BM_VerifyZeroRisk)->Arg(3)->Arg(5);

void BM_PointBiserial(benchmark::State & state)
{
  std::mt19937_64 rng(2ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(500);
  std::vector<std::uint8_t> labels(500);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = u(rng);
    labels[i] = u(rng) < 0.2 ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::point_biserial(scores, labels));
  }
}
BENCHMARK(BM_PointBiserial);

}  // namespace

BENCHMARK_MAIN();
