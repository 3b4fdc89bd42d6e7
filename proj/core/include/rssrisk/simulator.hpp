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

#ifndef RSSRISK_SIMULATOR_HPP_
#define RSSRISK_SIMULATOR_HPP_

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rssrisk/frame_geometry.hpp"
#include "rssrisk/risk_index.hpp"

namespace rssrisk::sim
{

struct RssParams
{
  core::LongitudinalParams lon;
  core::LateralParams lat;

  void validate() const;
};

enum class BehaviorKind
{
  kConstantSpeed,
  kRssFollower,
  kScriptedAccelProfile,
};

/// One knot of a scripted acceleration profile; values hold until the next
/// knot (step function, zero before the first knot).
struct AccelSample
{
  double t{0.0};
  double a_x{0.0};
  double a_y{0.0};
};

struct BehaviorSpec
{
  BehaviorKind kind{BehaviorKind::kConstantSpeed};
  double target_speed{0.0};
  /// rss_follower: extra gap above d_lon_min before the braking branch fires.
  double headway_margin{0.0};
  /// rss_follower: actuation delay applied to its commands; negative means
  /// "use the RSS response time rho".
  double response_delay{-1.0};
  std::vector<AccelSample> profile;
  /// Lateral position held by the lane keeper; unset means the initial y.
  std::optional<double> lane_center;

  void validate(double horizon) const;
};

struct VehicleSetup
{
  geometry::VehicleState state;
  BehaviorSpec behavior;
  bool is_ego{false};
};

struct ScenarioConfig
{
  std::vector<VehicleSetup> vehicles;
  double lane_width{3.5};
  int lane_count{1};
  double dt{0.01};
  double horizon{10.0};
  RssParams rss;
  core::RiskParams risk;
  core::BranchPolicy branch_policy{core::BranchPolicy::kReinterpreted};

  void validate() const;
  int ego_index() const;
};

struct Accel
{
  double a_x{0.0};
  double a_y{0.0};
};

/// Gap and risk indices for the (i, j) vehicle pair, i < j by config order,
/// evaluated on the ego's perceived states.
struct PairRisk
{
  int i{0};
  int j{0};
  double d_lon{0.0};
  double d_lat{0.0};
  core::RiskBreakdown risk;
};

struct TraceSample
{
  double t{0.0};
  std::vector<geometry::VehicleState> states;  // ground truth
  std::vector<PairRisk> pair_risks;
  std::vector<std::pair<int, int>> collision_pairs;  // ground truth
};

enum class TerminalStatus
{
  kCompleted,
  kCollision,
};

struct Trace
{
  std::vector<TraceSample> samples;
  TerminalStatus status{TerminalStatus::kCompleted};
  double end_time{0.0};
};

/// Experiment hooks. Controllers consume perceived states; collision
/// detection always sees ground truth.
struct Hooks
{
  /// Replaces the controller command for (vehicle, t); bypasses the
  /// follower's delay line. Capability saturation still applies.
  std::function<std::optional<Accel>(int vehicle, double t)> override_command;
  /// Maps a true state to the copy perceived by `perceiver` (a vehicle
  /// index) at time t. Identity when empty.
  std::function<geometry::VehicleState(
    const geometry::VehicleState & truth, int perceiver, int target, double t)>
    perceive;
};

/// Clamps a command to physical capability: longitudinal braking at most
/// a_cap_brake, lateral magnitude at most a_lat_cap_brake.
Accel saturate_command(const Accel & command, const RssParams & params);

/// Constant-acceleration kinematic update over dt. Longitudinal speed is
/// clamped at zero; the position leg of a braking step integrates only up to
/// the stopping instant, so braking never moves a vehicle backward.
geometry::VehicleState integrate_step(
  const geometry::VehicleState & state, const Accel & command, double dt);

/// The follower's longitudinal law: brake at a_min_brake while the gap is
/// below d_lon_min + headway_margin, otherwise track the target speed with
/// acceleration bounded by a_max_accel. `lead` may be null (free flow).
double rss_follower_control(
  const geometry::VehicleState & self, const geometry::VehicleState * lead,
  const RssParams & params, const BehaviorSpec & spec);

/// Maximum unified risk over all vehicle pairs; 0 for fewer than two.
double scene_risk(
  const std::vector<geometry::VehicleState> & states, const RssParams & params,
  const core::RiskParams & risk, core::BranchPolicy policy);

/// Runs the scenario to the horizon or the first collision. Bitwise
/// deterministic for identical config and hooks.
Trace run_scenario(const ScenarioConfig & config, const Hooks & hooks = {});

}  // namespace rssrisk::sim

#endif  // RSSRISK_SIMULATOR_HPP_
