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

#include "rssrisk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "rssrisk/errors.hpp"

namespace rssrisk::experiments
{

void BehaviorViolationModel::validate() const
{
  if (!std::isfinite(rate) || rate < 0.0) throw ConfigError("violation rate must be >= 0");
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw ConfigError("violation duration must be > 0");
  }
  if (!std::isfinite(brake_excess) || brake_excess <= 1.0) {
    throw ConfigError("brake_excess must be > 1");
  }
  if (!std::isfinite(accel_excess) || accel_excess <= 1.0) {
    throw ConfigError("accel_excess must be > 1");
  }
}

void StateNoiseModel::validate() const
{
  if (!std::isfinite(sigma_pos) || sigma_pos < 0.0) throw ConfigError("sigma_pos must be >= 0");
  if (!std::isfinite(sigma_vel) || sigma_vel < 0.0) throw ConfigError("sigma_vel must be >= 0");
  if (!std::isfinite(sigma_acc) || sigma_acc < 0.0) throw ConfigError("sigma_acc must be >= 0");
  if (!std::isfinite(refresh_period) || refresh_period <= 0.0) {
    throw ConfigError("refresh_period must be > 0");
  }
}

std::vector<ViolationEvent> sample_violations(
  const BehaviorViolationModel & model, const sim::RssParams & params,
  const std::vector<int> & eligible, double horizon, std::mt19937_64 & rng)
{
  model.validate();
  std::vector<ViolationEvent> schedule;
  if (model.rate <= 0.0 || eligible.empty()) {
    return schedule;
  }

  std::exponential_distribution<double> inter_arrival(model.rate);
  std::uniform_int_distribution<size_t> pick_vehicle(0, eligible.size() - 1);
  std::uniform_int_distribution<int> pick_kind(0, 3);

  double t = inter_arrival(rng);
  while (t < horizon) {
    ViolationEvent event;
    event.vehicle = eligible[pick_vehicle(rng)];
    event.start = t;
    event.duration = model.duration;
    switch (pick_kind(rng)) {
      case 0:
        event.command = {-model.brake_excess * params.lon.a_max_brake, 0.0};
        break;
      case 1:
        event.command = {model.accel_excess * params.lon.a_max_accel, 0.0};
        break;
      case 2:
        event.command = {0.0, model.accel_excess * params.lat.a_lat_max_accel};
        break;
      default:
        event.command = {0.0, -model.accel_excess * params.lat.a_lat_max_accel};
        break;
    }
    schedule.push_back(event);
    t += inter_arrival(rng);
  }
  return schedule;
}

geometry::VehicleState perturb_perception(
  const geometry::VehicleState & truth, const StateNoiseModel & model, std::mt19937_64 & rng)
{
  model.validate();
  std::normal_distribution<double> pos(0.0, 1.0);
  geometry::VehicleState out = truth;
  if (model.sigma_pos > 0.0) {
    out.x += model.sigma_pos * pos(rng);
    out.y += model.sigma_pos * pos(rng);
  }
  if (model.sigma_vel > 0.0) {
    out.v_x += model.sigma_vel * pos(rng);
    out.v_y += model.sigma_vel * pos(rng);
  }
  if (model.sigma_acc > 0.0) {
    out.a_x += model.sigma_acc * pos(rng);
    out.a_y += model.sigma_acc * pos(rng);
  }
  out.v_x = std::max(out.v_x, 0.0);
  return out;
}

namespace
{

std::vector<int> eligible_targets(
  const sim::ScenarioConfig & config, const BehaviorViolationModel & model)
{
  std::vector<int> out;
  for (size_t i = 0; i < config.vehicles.size(); ++i) {
    const auto & v = config.vehicles[i];
    if (v.is_ego) {
      continue;
    }
    if (!model.target_ids.empty() &&
        std::find(model.target_ids.begin(), model.target_ids.end(), v.state.id) ==
          model.target_ids.end()) {
      continue;
    }
    out.push_back(static_cast<int>(i));
  }
  return out;
}

/// Holds per-(perceiver, target) noise offsets for one refresh period, so a
/// 10 Hz sensor reading stays stable across the 100 Hz integration steps.
class NoisePerception
{
public:
  NoisePerception(const StateNoiseModel & model, int ego, std::mt19937_64 & rng)
  : model_(model), ego_(ego), rng_(rng)
  {
  }

  geometry::VehicleState perceive(
    const geometry::VehicleState & truth, int perceiver, int target, double t)
  {
    const bool noisy = perceiver == ego_
                         ? model_.applies_to != StateNoiseModel::AppliesTo::kTraffic
                         : model_.applies_to != StateNoiseModel::AppliesTo::kEgo;
    if (!noisy) {
      return truth;
    }
    Offsets & o = offsets_[{perceiver, target}];
    if (!o.valid || t - o.drawn_at >= model_.refresh_period - 1e-12) {
      std::normal_distribution<double> unit(0.0, 1.0);
      o.x = model_.sigma_pos * unit(rng_);
      o.y = model_.sigma_pos * unit(rng_);
      o.v_x = model_.sigma_vel * unit(rng_);
      o.v_y = model_.sigma_vel * unit(rng_);
      o.a_x = model_.sigma_acc * unit(rng_);
      o.a_y = model_.sigma_acc * unit(rng_);
      o.drawn_at = t;
      o.valid = true;
    }
    geometry::VehicleState out = truth;
    out.x += o.x;
    out.y += o.y;
    out.v_x = std::max(truth.v_x + o.v_x, 0.0);
    out.v_y += o.v_y;
    out.a_x += o.a_x;
    out.a_y += o.a_y;
    return out;
  }

private:
  struct Offsets
  {
    double x{0}, y{0}, v_x{0}, v_y{0}, a_x{0}, a_y{0};
    double drawn_at{0.0};
    bool valid{false};
  };

  StateNoiseModel model_;
  int ego_;
  std::mt19937_64 & rng_;
  std::map<std::pair<int, int>, Offsets> offsets_;
};

EpisodeRecord fold_trace(const sim::Trace & trace, int episode_id, std::uint64_t seed)
{
  EpisodeRecord rec;
  rec.episode_id = episode_id;
  rec.seed = seed;
  rec.collision = trace.status == sim::TerminalStatus::kCollision;
  if (rec.collision) {
    rec.t_collision = trace.end_time;
  }
  double min_lon = std::numeric_limits<double>::infinity();
  double min_lat = std::numeric_limits<double>::infinity();
  bool any_pair = false;
  for (const auto & sample : trace.samples) {
    for (const auto & pr : sample.pair_risks) {
      any_pair = true;
      rec.max_risk = std::max(rec.max_risk, pr.risk.r);
      rec.max_r_lon = std::max(rec.max_r_lon, pr.risk.r_lon);
      rec.max_r_lat = std::max(rec.max_r_lat, pr.risk.r_lat);
      min_lon = std::min(min_lon, pr.d_lon);
      min_lat = std::min(min_lat, pr.d_lat);
    }
  }
  if (any_pair) {
    rec.min_d_lon = min_lon;
    rec.min_d_lat = min_lat;
  }
  return rec;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EpisodeRecord run_episode(
  const sim::ScenarioConfig & base, const ExperimentSpec & experiment, int episode_id,
  std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  sim::Hooks hooks;

  std::vector<ViolationEvent> schedule;
  std::optional<NoisePerception> noise;

  if (experiment.kind == ExperimentKind::kBehavior) {
    schedule = sample_violations(
      experiment.behavior, base.rss, eligible_targets(base, experiment.behavior), base.horizon,
      rng);
    if (!schedule.empty()) {
      hooks.override_command = [&schedule](int vehicle, double t) -> std::optional<sim::Accel> {
        // Later-starting events win when overlapping on the same vehicle.
        const ViolationEvent * active = nullptr;
        for (const auto & e : schedule) {
          if (e.vehicle == vehicle && t >= e.start && t < e.start + e.duration) {
            active = &e;
          }
        }
        if (active == nullptr) {
          return std::nullopt;
        }
        return active->command;
      };
    }
  } else {
    experiment.state.validate();
    noise.emplace(experiment.state, base.ego_index(), rng);
    hooks.perceive = [&noise](
                       const geometry::VehicleState & truth, int perceiver, int target,
                       double t) { return noise->perceive(truth, perceiver, target, t); };
  }

  const sim::Trace trace = sim::run_scenario(base, hooks);
  return fold_trace(trace, episode_id, seed);
}

CampaignResult run_campaign(
  const sim::ScenarioConfig & base, const ExperimentSpec & experiment, int episodes,
  std::uint64_t master_seed, int n_perms, int threads)
{
  if (episodes < 2) {
    throw ParameterError("a campaign needs at least 2 episodes");
  }
  base.validate();

  CampaignResult result;
  result.records.resize(static_cast<size_t>(episodes));

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::max(1, std::min(worker_count, episodes));

  std::atomic<int> next{0};
  auto work = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= episodes) {
        return;
      }
      result.records[static_cast<size_t>(i)] =
        run_episode(base, experiment, i, master_seed + static_cast<std::uint64_t>(i));
    }
  };

  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
      pool.emplace_back(work);
    }
    for (auto & th : pool) {
      th.join();
    }
  }

  result.episodes = episodes;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(result.records.size());
  labels.reserve(result.records.size());
  for (const auto & rec : result.records) {
    scores.push_back(rec.max_risk);
    labels.push_back(rec.collision ? 1 : 0);
    result.collisions += rec.collision ? 1 : 0;
  }

  result.stats.point_biserial = stats::point_biserial(scores, labels);
  result.stats.auc = stats::auc(scores, labels);
  if (result.stats.point_biserial) {
    std::mt19937_64 stat_rng(mix_seed(master_seed));
    result.stats.permutation_p = stats::permutation_p(scores, labels, n_perms, stat_rng);
  }
  result.stats.degenerate = !result.stats.point_biserial || !result.stats.auc ||
                            !result.stats.permutation_p;
  return result;
}

sim::ScenarioConfig default_two_lane_scenario()
{
  sim::ScenarioConfig cfg;
  cfg.lane_width = 3.3;
  cfg.lane_count = 2;
  cfg.dt = 0.01;
  cfg.horizon = 20.0;

  cfg.rss.lon.rho = 1.0;
  cfg.rss.lon.a_max_accel = 2.0;
  cfg.rss.lon.a_min_brake = 4.0;
  cfg.rss.lon.a_max_brake = 6.0;
  cfg.rss.lon.a_cap_brake = 12.0;
  cfg.rss.lat.rho = 1.0;
  cfg.rss.lat.a_lat_max_accel = 0.3;
  cfg.rss.lat.a_lat_min_brake = 1.0;
  cfg.rss.lat.a_lat_cap_brake = 2.0;
  cfg.risk.beta = 1.0;
  cfg.risk.gamma = 1.0;

  sim::VehicleSetup ego;
  ego.state.id = "ego";
  ego.state.x = 0.0;
  ego.state.y = 1.75;
  ego.state.v_x = 20.0;
  ego.is_ego = true;
  ego.behavior.kind = sim::BehaviorKind::kRssFollower;
  ego.behavior.target_speed = 20.0;

  sim::VehicleSetup lead;
  lead.state.id = "lead";
  lead.state.x = 55.0;
  lead.state.y = 1.75;
  lead.state.v_x = 20.0;
  lead.behavior.kind = sim::BehaviorKind::kConstantSpeed;
  lead.behavior.target_speed = 20.0;

  sim::VehicleSetup neighbor;
  neighbor.state.id = "neighbor";
  neighbor.state.x = 0.0;
  neighbor.state.y = 5.05;
  neighbor.state.v_x = 20.0;
  neighbor.behavior.kind = sim::BehaviorKind::kConstantSpeed;
  neighbor.behavior.target_speed = 20.0;

  cfg.vehicles = {ego, lead, neighbor};
  return cfg;
}

ExperimentSpec default_behavior_experiment()
{
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kBehavior;
  spec.behavior.rate = 0.12;
  spec.behavior.duration = 2.0;
  spec.behavior.brake_excess = 2.0;
  spec.behavior.accel_excess = 1.5;
  return spec;
}

ExperimentSpec default_state_experiment()
{
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kState;
  spec.state.sigma_pos = 0.5;
  spec.state.sigma_vel = 0.5;
  spec.state.sigma_acc = 0.0;
  spec.state.applies_to = StateNoiseModel::AppliesTo::kBoth;
  spec.state.refresh_period = 0.6;
  return spec;
}

}  // namespace rssrisk::experiments
