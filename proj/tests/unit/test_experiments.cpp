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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rssrisk/errors.hpp"
#include "rssrisk/experiments.hpp"
#include "rssrisk/io.hpp"
#include "rssrisk/verify.hpp"

using namespace rssrisk;
using namespace rssrisk::experiments;

namespace
{

sim::RssParams fixture_rss()
{
  sim::RssParams p;
  p.lon.rho = 1.0;
  p.lon.a_max_accel = 2.0;
  p.lon.a_min_brake = 4.0;
  p.lon.a_max_brake = 8.0;
  p.lon.a_cap_brake = 10.0;
  p.lat.rho = 1.0;
  p.lat.a_lat_max_accel = 0.5;
  p.lat.a_lat_min_brake = 1.0;
  p.lat.a_lat_cap_brake = 2.0;
  return p;
}

geometry::VehicleState make_vehicle(const std::string & id, double x, double y, double v_x)
{
  geometry::VehicleState s;
  s.id = id;
  s.x = x;
  s.y = y;
  s.v_x = v_x;
  return s;
}

}  // namespace

TEST_CASE("sample_violations: zero rate gives an empty schedule")
{
  BehaviorViolationModel model;
  model.rate = 0.0;
  std::mt19937_64 rng(1ULL);
  CHECK(sample_violations(model, fixture_rss(), {1, 2}, 40.0, rng).empty());
}

TEST_CASE("sample_violations: Poisson mean matches rate * horizon over many draws")
{
  BehaviorViolationModel model;
  model.rate = 0.1;
  model.duration = 1.0;
  std::mt19937_64 rng(2026ULL);
  const double horizon = 50.0;  // rate * horizon = 5
  const int reps = 10000;
  double total = 0.0;
  for (int i = 0; i < reps; ++i) {
    total += static_cast<double>(sample_violations(model, fixture_rss(), {1}, horizon, rng).size());
  }
  const double mean = total / reps;
  const double se = std::sqrt(5.0 / reps);
  CHECK(std::abs(mean - 5.0) <= 3.0 * se);
}

TEST_CASE("sample_violations: events stay inside the horizon and eligible set")
{
  BehaviorViolationModel model;
  model.rate = 0.5;
  model.duration = 2.0;
  std::mt19937_64 rng(7ULL);
  const auto schedule = sample_violations(model, fixture_rss(), {1, 2}, 30.0, rng);
  REQUIRE(!schedule.empty());
  for (const auto & e : schedule) {
    REQUIRE(e.start >= 0.0);
    REQUIRE(e.start < 30.0);
    REQUIRE(e.duration == 2.0);
    REQUIRE((e.vehicle == 1 || e.vehicle == 2));
  }
}

TEST_CASE("violation brake command saturates at capability, not at the excess value")
{
  auto params = fixture_rss();
  params.lon.a_max_brake = 8.0;
  params.lon.a_cap_brake = 10.0;
  BehaviorViolationModel model;
  model.rate = 5.0;
  model.brake_excess = 1.5;

  std::mt19937_64 rng(11ULL);
  const auto schedule = sample_violations(model, params, {0}, 50.0, rng);
  bool saw_brake_event = false;
  for (const auto & e : schedule) {
    if (e.command.a_x < 0.0) {
      saw_brake_event = true;
      CHECK(e.command.a_x == -12.0);
      const auto applied = sim::saturate_command(e.command, params);
      CHECK(applied.a_x == -10.0);
    }
  }
  REQUIRE(saw_brake_event);
}

TEST_CASE("perturb_perception: zero sigmas are the identity")
{
  const auto truth = make_vehicle("a", 10.0, 2.0, 15.0);
  StateNoiseModel model;
  std::mt19937_64 rng(3ULL);
  const auto perceived = perturb_perception(truth, model, rng);
  CHECK(perceived.x == truth.x);
  CHECK(perceived.y == truth.y);
  CHECK(perceived.v_x == truth.v_x);
  CHECK(perceived.v_y == truth.v_y);
}

TEST_CASE("perturb_perception: sample moments match the configured sigma")
{
  const auto truth = make_vehicle("a", 0.0, 0.0, 100.0);
  StateNoiseModel model;
  model.sigma_pos = 0.5;
  std::mt19937_64 rng(17ULL);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = perturb_perception(truth, model, rng).x;
    sum += dx;
    sum_sq += dx * dx;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) <= 3.0 * 0.5 / std::sqrt(n));
  CHECK(std::abs(stddev - 0.5) <= 3.0 * 0.5 / std::sqrt(2.0 * n));
}

TEST_CASE("perturb_perception: perceived forward speed never goes negative")
{
  auto truth = make_vehicle("a", 0.0, 0.0, 0.1);
  StateNoiseModel model;
  model.sigma_vel = 5.0;
  std::mt19937_64 rng(23ULL);
  for (int i = 0; i < 2000; ++i) {
    REQUIRE(perturb_perception(truth, model, rng).v_x >= 0.0);
  }
}

TEST_CASE("run_campaign: zero-perturbation baseline is collision-free, zero-risk, degenerate")
{
  auto scenario = default_two_lane_scenario();
  scenario.horizon = 5.0;  // shortened for test speed
  ExperimentSpec exp;
  exp.kind = ExperimentKind::kBehavior;
  exp.behavior.rate = 0.0;

  const auto result = run_campaign(scenario, exp, 10, 42, 99);
  CHECK(result.collisions == 0);
  CHECK(result.stats.degenerate);
  CHECK_FALSE(result.stats.point_biserial.has_value());
  for (const auto & rec : result.records) {
    REQUIRE(rec.max_risk == 0.0);
    REQUIRE_FALSE(rec.collision);
    REQUIRE(rec.seed == 42 + static_cast<std::uint64_t>(rec.episode_id));
  }
}

TEST_CASE("run_campaign: identical master seed twice gives byte-identical CSV")
{
  auto scenario = default_two_lane_scenario();
  scenario.horizon = 8.0;
  const auto exp = default_behavior_experiment();

  const auto a = run_campaign(scenario, exp, 12, 7, 199, 4);
  const auto b = run_campaign(scenario, exp, 12, 7, 199, 2);  // thread count must not matter

  std::ostringstream csv_a;
  std::ostringstream csv_b;
  io::write_episodes_csv(csv_a, a.records);
  io::write_episodes_csv(csv_b, b.records);
  CHECK(csv_a.str() == csv_b.str());

  std::ostringstream sum_a;
  std::ostringstream sum_b;
  io::write_summary_csv(sum_a, a);
  io::write_summary_csv(sum_b, b);
  CHECK(sum_a.str() == sum_b.str());
}

TEST_CASE("run_campaign: episode and seed stability")
{
  auto scenario = default_two_lane_scenario();
  scenario.horizon = 6.0;
  const auto exp = default_behavior_experiment();
  const auto result = run_campaign(scenario, exp, 6, 1000, 99);
  for (const auto & rec : result.records) {
    const auto replay = run_episode(scenario, exp, rec.episode_id, rec.seed);
    REQUIRE(replay.max_risk == rec.max_risk);
    REQUIRE(replay.collision == rec.collision);
    REQUIRE(replay.min_d_lon == rec.min_d_lon);
  }
}

TEST_CASE("run_campaign rejects fewer than two episodes")
{
  const auto scenario = default_two_lane_scenario();
  CHECK_THROWS_AS(
    run_campaign(scenario, default_behavior_experiment(), 1, 0), ParameterError);
}

TEST_CASE("hand-built records: one collision at risk one, one clean at zero")
{
  const std::vector<double> scores{1.0, 0.0};
  const std::vector<std::uint8_t> labels{1, 0};
  CHECK(*stats::point_biserial(scores, labels) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify_zero_risk: a comfortably safe pair is verified")
{
  const auto params = fixture_rss();
  const core::RiskParams risk;
  auto rear = make_vehicle("rear", 0.0, 1.75, 20.0);
  auto front = make_vehicle("front", 100.0 + rear.length, 1.75, 10.0);

  verify::VerifyConfig cfg;
  cfg.accel_grid_levels = 5;
  cfg.dt = 0.1;
  cfg.horizon = 10.0;
  const auto result = verify::verify_zero_risk(rear, front, params, risk, cfg);
  CHECK(result.verified);
  CHECK(result.profiles_checked > 0);
  CHECK_FALSE(result.counterexample.has_value());
}

TEST_CASE("verify_zero_risk: colliding input violates the precondition")
{
  const auto params = fixture_rss();
  const core::RiskParams risk;
  const auto a = make_vehicle("a", 0.0, 1.75, 5.0);
  const auto b = make_vehicle("b", 0.0, 1.75, 5.0);
  verify::VerifyConfig cfg;
  CHECK_THROWS_AS(verify::verify_zero_risk(a, b, params, risk, cfg), PreconditionError);
}

TEST_CASE("verify_zero_risk: stationary cars with zero accel bounds verify instantly")
{
  auto params = fixture_rss();
  params.lon.a_max_accel = 0.0;
  params.lat.a_lat_max_accel = 0.0;
  const core::RiskParams risk;
  const auto a = make_vehicle("a", 0.0, 1.75, 0.0);
  const auto b = make_vehicle("b", 104.8, 1.75, 0.0);
  verify::VerifyConfig cfg;
  const auto result = verify::verify_zero_risk(a, b, params, risk, cfg);
  CHECK(result.verified);
}

TEST_CASE("verify_zero_risk adversary is sharp: it closes to within the spare margin")
{
  // Same-lane pair with the gap exactly 0.4 m above d_lon_min: the worst
  // gridded profile (rear full response, front hardest allowed braking) must
  // shave the margin down to exactly that spare 0.4 m, and no further.
  const auto params = fixture_rss();
  const core::RiskParams risk;
  auto rear = make_vehicle("rear", 0.0, 1.75, 20.0);
  const double bound = core::d_lon_min({20.0, 10.0, 0.0}, params.lon);
  auto front = make_vehicle("front", bound + 0.4 + rear.length, 1.75, 10.0);

  verify::VerifyConfig cfg;
  const auto result = verify::verify_zero_risk(rear, front, params, risk, cfg);
  CHECK(result.verified);
  CHECK(result.closest_approach == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("verify_zero_risk: randomized zero-risk states stay collision-free (small sweep)")
{
  const auto params = fixture_rss();
  const core::RiskParams risk;
  std::mt19937_64 rng(13ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  verify::VerifyConfig cfg;
  cfg.accel_grid_levels = 3;
  cfg.dt = 0.1;
  cfg.horizon = 5.0;

  int verified = 0;
  int tried = 0;
  while (verified < 25 && tried < 2000) {
    ++tried;
    auto a = make_vehicle("a", 120.0 * u(rng), 8.0 * u(rng), 30.0 * u(rng));
    auto b = make_vehicle("b", 120.0 * u(rng), 8.0 * u(rng), 30.0 * u(rng));
    a.v_y = -2.0 + 4.0 * u(rng);
    b.v_y = -2.0 + 4.0 * u(rng);
    const auto pair = geometry::pair_states(a, b);
    const auto breakdown =
      core::risk_breakdown(pair.lon, pair.lat, params.lon, params.lat, risk);
    if (breakdown.r != 0.0) {
      continue;
    }
    const auto result = verify::verify_zero_risk(a, b, params, risk, cfg);
    REQUIRE(result.verified);
    ++verified;
  }
  REQUIRE(verified == 25);
}

TEST_CASE("mix_seed decorrelates the statistics stream from episode seeds")
{
  CHECK(mix_seed(0) != 0);
  CHECK(mix_seed(1) != 1);
  CHECK(mix_seed(42) != mix_seed(43));
}
