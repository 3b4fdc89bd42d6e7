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

#include "rssrisk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "rssrisk/errors.hpp"

namespace rssrisk::sim
{

namespace
{

constexpr double kSpeedGain = 0.5;  // 1/s
constexpr double kLaneKeepP = 0.3;  // 1/s^2
constexpr double kLaneKeepD = 0.5;  // 1/s

double clamp(double v, double lo, double hi)
{
  return std::min(std::max(v, lo), hi);
}

double speed_tracking(double v, const BehaviorSpec & spec, const RssParams & params)
{
  return clamp(
    kSpeedGain * (spec.target_speed - v), -params.lon.a_min_brake, params.lon.a_max_accel);
}

double lane_keeping(double y, double v_y, double lane_y, const RssParams & params)
{
  const double a = -kLaneKeepP * (y - lane_y) - kLaneKeepD * v_y;
  return clamp(a, -params.lat.a_lat_max_accel, params.lat.a_lat_max_accel);
}

Accel scripted_command(const std::vector<AccelSample> & profile, double t)
{
  Accel out;
  for (const auto & knot : profile) {
    if (knot.t > t) {
      break;
    }
    out.a_x = knot.a_x;
    out.a_y = knot.a_y;
  }
  return out;
}

struct BehaviorRuntime
{
  double lane_y{0.0};
  std::deque<Accel> delay_line;
};

}  // namespace

void RssParams::validate() const
{
  lon.validate();
  lat.validate();
  if (lon.rho != lat.rho) {
    throw ParameterError("longitudinal and lateral response times must match");
  }
}

void BehaviorSpec::validate(double horizon) const
{
  if (kind == BehaviorKind::kConstantSpeed || kind == BehaviorKind::kRssFollower) {
    if (!std::isfinite(target_speed) || target_speed < 0.0) {
      throw ConfigError("behavior target_speed must be finite and >= 0");
    }
  }
  if (kind == BehaviorKind::kRssFollower) {
    if (!std::isfinite(headway_margin) || headway_margin < 0.0) {
      throw ConfigError("behavior headway_margin must be finite and >= 0");
    }
    if (!std::isfinite(response_delay) && !(response_delay < 0.0)) {
      throw ConfigError("behavior response_delay must be finite");
    }
  }
  if (kind == BehaviorKind::kScriptedAccelProfile) {
    double last_t = -1.0;
    for (const auto & knot : profile) {
      if (!std::isfinite(knot.t) || !std::isfinite(knot.a_x) || !std::isfinite(knot.a_y)) {
        throw ConfigError("scripted profile knots must be finite");
      }
      if (knot.t < 0.0 || knot.t < last_t) {
        throw ConfigError("scripted profile times must be non-negative and non-decreasing");
      }
      last_t = knot.t;
    }
    if (last_t > horizon) {
      throw ConfigError("scripted profile extends past the horizon");
    }
  }
  if (lane_center && !std::isfinite(*lane_center)) {
    throw ConfigError("behavior lane_center must be finite");
  }
}

void ScenarioConfig::validate() const
{
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt must be finite and > 0");
  if (!std::isfinite(horizon) || horizon < dt) throw ConfigError("horizon must be >= dt");
  if (lane_count < 1) throw ConfigError("lane_count must be >= 1");
  if (!std::isfinite(lane_width) || lane_width <= 0.0) {
    throw ConfigError("lane_width must be finite and > 0");
  }
  if (vehicles.empty()) throw ConfigError("scenario needs at least one vehicle");

  try {
    rss.validate();
    risk.validate();
  } catch (const std::exception & e) {
    throw ConfigError(std::string("invalid rss/risk parameters: ") + e.what());
  }

  std::set<std::string> ids;
  bool has_ego = false;
  for (const auto & v : vehicles) {
    if (v.state.id.empty()) throw ConfigError("vehicle id must be non-empty");
    if (!ids.insert(v.state.id).second) {
      throw ConfigError("duplicate vehicle id: " + v.state.id);
    }
    try {
      v.state.validate();
    } catch (const std::exception & e) {
      throw ConfigError("vehicle " + v.state.id + ": " + e.what());
    }
    v.behavior.validate(horizon);
    has_ego = has_ego || v.is_ego;
  }
  if (!has_ego) throw ConfigError("scenario needs a designated ego vehicle");
}

int ScenarioConfig::ego_index() const
{
  for (size_t i = 0; i < vehicles.size(); ++i) {
    if (vehicles[i].is_ego) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Accel saturate_command(const Accel & command, const RssParams & params)
{
  Accel out;
  out.a_x = std::max(command.a_x, -params.lon.a_cap_brake);
  out.a_y = clamp(command.a_y, -params.lat.a_lat_cap_brake, params.lat.a_lat_cap_brake);
  return out;
}

geometry::VehicleState integrate_step(
  const geometry::VehicleState & state, const Accel & command, double dt)
{
  geometry::VehicleState out = state;
  const double v_next = state.v_x + command.a_x * dt;
  if (v_next < 0.0) {
    // Braking crosses zero speed inside this step; the vehicle stops at
    // t_stop and stays put for the remainder.
    const double t_stop = command.a_x != 0.0 ? -state.v_x / command.a_x : 0.0;
    out.x += state.v_x * t_stop + 0.5 * command.a_x * t_stop * t_stop;
    out.v_x = 0.0;
  } else {
    out.x += state.v_x * dt + 0.5 * command.a_x * dt * dt;
    out.v_x = v_next;
  }
  out.y += state.v_y * dt + 0.5 * command.a_y * dt * dt;
  out.v_y = state.v_y + command.a_y * dt;
  out.a_x = command.a_x;
  out.a_y = command.a_y;
  return out;
}

double rss_follower_control(
  const geometry::VehicleState & self, const geometry::VehicleState * lead,
  const RssParams & params, const BehaviorSpec & spec)
{
  if (lead == nullptr) {
    return speed_tracking(self.v_x, spec, params);
  }
  const geometry::PairStates pair = geometry::pair_states(self, *lead);
  const double safe = core::d_lon_min(pair.lon, params.lon);
  if (pair.lon.d_lon < safe + spec.headway_margin) {
    return self.v_x > 0.0 ? -params.lon.a_min_brake : 0.0;
  }
  return speed_tracking(self.v_x, spec, params);
}

double scene_risk(
  const std::vector<geometry::VehicleState> & states, const RssParams & params,
  const core::RiskParams & risk, core::BranchPolicy policy)
{
  double worst = 0.0;
  for (size_t i = 0; i + 1 < states.size(); ++i) {
    for (size_t j = i + 1; j < states.size(); ++j) {
      const geometry::PairStates pair = geometry::pair_states(states[i], states[j]);
      const core::RiskBreakdown b =
        core::risk_breakdown(pair.lon, pair.lat, params.lon, params.lat, risk, policy);
      worst = std::max(worst, b.r);
    }
  }
  return worst;
}

namespace
{

class ScenarioRunner
{
public:
  ScenarioRunner(const ScenarioConfig & config, const Hooks & hooks)
  : config_(config), hooks_(hooks)
  {
    states_.reserve(config.vehicles.size());
    runtimes_.reserve(config.vehicles.size());
    for (const auto & v : config.vehicles) {
      states_.push_back(v.state);
      BehaviorRuntime rt;
      rt.lane_y = v.behavior.lane_center.value_or(v.state.y);
      if (v.behavior.kind == BehaviorKind::kRssFollower) {
        const double delay =
          v.behavior.response_delay < 0.0 ? config.rss.lon.rho : v.behavior.response_delay;
        const auto steps = static_cast<size_t>(std::llround(delay / config.dt));
        rt.delay_line.assign(steps, Accel{});
      }
      runtimes_.push_back(std::move(rt));
    }
  }

  Trace run()
  {
    Trace trace;
    trace.samples.push_back(make_sample(0.0));
    if (!trace.samples.back().collision_pairs.empty()) {
      trace.status = TerminalStatus::kCollision;
      trace.end_time = 0.0;
      return trace;
    }

    const auto n_steps =
      static_cast<long>(std::floor(config_.horizon / config_.dt + 1e-9));
    for (long i = 1; i <= n_steps; ++i) {
      const double t_prev = static_cast<double>(i - 1) * config_.dt;
      advance(t_prev);
      const double t = static_cast<double>(i) * config_.dt;
      trace.samples.push_back(make_sample(t));
      if (!trace.samples.back().collision_pairs.empty()) {
        trace.status = TerminalStatus::kCollision;
        trace.end_time = t;
        return trace;
      }
    }
    trace.status = TerminalStatus::kCompleted;
    trace.end_time = static_cast<double>(n_steps) * config_.dt;
    return trace;
  }

private:
  geometry::VehicleState perceive_one(int perceiver, int target, double t) const
  {
    if (!hooks_.perceive) {
      return states_[target];
    }
    return hooks_.perceive(states_[target], perceiver, target, t);
  }

  std::vector<geometry::VehicleState> perceive_world(int perceiver, double t) const
  {
    std::vector<geometry::VehicleState> out;
    out.reserve(states_.size());
    for (size_t j = 0; j < states_.size(); ++j) {
      out.push_back(perceive_one(perceiver, static_cast<int>(j), t));
    }
    return out;
  }

  const geometry::VehicleState * find_lead(
    const std::vector<geometry::VehicleState> & view, int self) const
  {
    const geometry::VehicleState & me = view[self];
    const geometry::VehicleState * lead = nullptr;
    for (size_t j = 0; j < view.size(); ++j) {
      if (static_cast<int>(j) == self) {
        continue;
      }
      if (view[j].x <= me.x) {
        continue;
      }
      if (std::abs(view[j].y - me.y) >= 0.5 * config_.lane_width) {
        continue;
      }
      if (lead == nullptr || view[j].x < lead->x) {
        lead = &view[j];
      }
    }
    return lead;
  }

  Accel controller_command(int v, double t)
  {
    const BehaviorSpec & spec = config_.vehicles[v].behavior;
    const BehaviorRuntime & rt = runtimes_[v];
    switch (spec.kind) {
      case BehaviorKind::kScriptedAccelProfile:
        return scripted_command(spec.profile, t);
      case BehaviorKind::kConstantSpeed: {
        const geometry::VehicleState self = perceive_one(v, v, t);
        return {speed_tracking(self.v_x, spec, config_.rss),
                lane_keeping(self.y, self.v_y, rt.lane_y, config_.rss)};
      }
      case BehaviorKind::kRssFollower: {
        const std::vector<geometry::VehicleState> view = perceive_world(v, t);
        const geometry::VehicleState & self = view[v];
        const geometry::VehicleState * lead = find_lead(view, v);
        return {rss_follower_control(self, lead, config_.rss, spec),
                lane_keeping(self.y, self.v_y, rt.lane_y, config_.rss)};
      }
    }
    return {};
  }

  void advance(double t)
  {
    std::vector<Accel> commands(states_.size());
    for (size_t v = 0; v < states_.size(); ++v) {
      Accel cmd = controller_command(static_cast<int>(v), t);
      auto & line = runtimes_[v].delay_line;
      if (!line.empty()) {
        line.push_back(cmd);
        cmd = line.front();
        line.pop_front();
      }
      if (hooks_.override_command) {
        if (const auto forced = hooks_.override_command(static_cast<int>(v), t)) {
          cmd = *forced;
        }
      }
      commands[v] = saturate_command(cmd, config_.rss);
    }
    for (size_t v = 0; v < states_.size(); ++v) {
      states_[v] = integrate_step(states_[v], commands[v], config_.dt);
    }
  }

  // Risk indices and gaps are evaluated on ground truth, like collision
  // detection; perception noise reaches the dynamics through the
  // controllers only.
  TraceSample make_sample(double t) const
  {
    TraceSample sample;
    sample.t = t;
    sample.states = states_;
    const auto n = states_.size();
    for (size_t i = 0; i + 1 < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        const geometry::PairStates pair = geometry::pair_states(states_[i], states_[j]);
        PairRisk pr;
        pr.i = static_cast<int>(i);
        pr.j = static_cast<int>(j);
        pr.d_lon = pair.lon.d_lon;
        pr.d_lat = pair.lat.d_lat;
        pr.risk = core::risk_breakdown(
          pair.lon, pair.lat, config_.rss.lon, config_.rss.lat, config_.risk,
          config_.branch_policy);
        sample.pair_risks.push_back(pr);
        if (geometry::in_collision(states_[i], states_[j])) {
          sample.collision_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
    }
    return sample;
  }

  const ScenarioConfig & config_;
  const Hooks & hooks_;
  std::vector<geometry::VehicleState> states_;
  std::vector<BehaviorRuntime> runtimes_;
};

}  // namespace

Trace run_scenario(const ScenarioConfig & config, const Hooks & hooks)
{
  config.validate();
  ScenarioRunner runner(config, hooks);
  return runner.run();
}

}  // namespace rssrisk::sim
