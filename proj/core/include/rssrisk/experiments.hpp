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

#ifndef RSSRISK_EXPERIMENTS_HPP_
#define RSSRISK_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rssrisk/simulator.hpp"
#include "rssrisk/statistics.hpp"

namespace rssrisk::experiments
{

/// Random violations of the reasonable-behavior assumptions: Poisson-timed
/// events during which an eligible traffic vehicle's command is replaced by
/// an excess-scaled one (still capability-saturated).
struct BehaviorViolationModel
{
  double rate{0.0};          // events per second
  double duration{1.0};      // s
  double brake_excess{1.5};  // factor > 1 on a_max_brake
  double accel_excess{1.5};  // factor > 1 on a_max_accel / a_lat_max_accel
  /// Eligible target ids; empty means every non-ego vehicle.
  std::vector<std::string> target_ids;

  void validate() const;
};

/// Additive zero-mean Gaussian noise on perceived state copies. Ground truth
/// is never touched; perceived v_x is floored at zero.
struct StateNoiseModel
{
  enum class AppliesTo
  {
    kEgo,
    kTraffic,
    kBoth,
  };

  double sigma_pos{0.0};  // m
  double sigma_vel{0.0};  // m/s
  double sigma_acc{0.0};  // m/s^2
  AppliesTo applies_to{AppliesTo::kBoth};
  /// Perception refresh period: noise offsets are held this long before
  /// being redrawn (a 10 Hz sensor by default).
  double refresh_period{0.1};  // s

  void validate() const;
};

enum class ExperimentKind
{
  kBehavior,
  kState,
};

struct ExperimentSpec
{
  ExperimentKind kind{ExperimentKind::kBehavior};
  BehaviorViolationModel behavior;
  StateNoiseModel state;
};

/// One scheduled violation: `command` replaces the target's controller
/// output on [start, start + duration).
struct ViolationEvent
{
  int vehicle{0};
  double start{0.0};
  double duration{0.0};
  sim::Accel command;
};

/// Draws a Poisson-process schedule of violation events over the horizon.
/// Event commands are one of hard braking (-brake_excess * a_max_brake),
/// hard acceleration (+accel_excess * a_max_accel) or lateral drift
/// (+-accel_excess * a_lat_max_accel), chosen uniformly per event.
std::vector<ViolationEvent> sample_violations(
  const BehaviorViolationModel & model, const sim::RssParams & params,
  const std::vector<int> & eligible, double horizon, std::mt19937_64 & rng);

/// Perceived copy of a true state under the noise model.
geometry::VehicleState perturb_perception(
  const geometry::VehicleState & truth, const StateNoiseModel & model, std::mt19937_64 & rng);

struct EpisodeRecord
{
  int episode_id{0};
  std::uint64_t seed{0};
  double max_risk{0.0};
  bool collision{false};
  std::optional<double> t_collision;
  std::optional<double> min_d_lon;
  std::optional<double> min_d_lat;
  double max_r_lon{0.0};
  double max_r_lat{0.0};
};

struct CampaignStats
{
  std::optional<double> point_biserial;
  std::optional<double> auc;
  std::optional<double> permutation_p;
  bool degenerate{false};
};

struct CampaignResult
{
  std::vector<EpisodeRecord> records;
  CampaignStats stats;
  int episodes{0};
  int collisions{0};
};

/// Runs one seeded episode of the experiment and folds its trace into a
/// record. Episode i of a campaign uses seed = master_seed + i.
EpisodeRecord run_episode(
  const sim::ScenarioConfig & base, const ExperimentSpec & experiment, int episode_id,
  std::uint64_t seed);

/// Runs `episodes` independent episodes (optionally in parallel), merges the
/// records in episode order and computes the campaign statistics.
/// `threads` <= 0 picks the hardware concurrency.
CampaignResult run_campaign(
  const sim::ScenarioConfig & base, const ExperimentSpec & experiment, int episodes,
  std::uint64_t master_seed, int n_perms = 999, int threads = 0);

/// splitmix64 finalizer; used to derive the statistics RNG seed from the
/// master seed so it is disjoint from the additive episode seeds.
std::uint64_t mix_seed(std::uint64_t seed);

/// The default two-lane car-following campaign: an RSS follower cruising
/// behind a constant-speed lead with an abreast neighbor in the other lane.
sim::ScenarioConfig default_two_lane_scenario();
ExperimentSpec default_behavior_experiment();
ExperimentSpec default_state_experiment();

}  // namespace rssrisk::experiments

#endif  // RSSRISK_EXPERIMENTS_HPP_
