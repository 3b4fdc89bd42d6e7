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

#include "rssrisk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rssrisk/errors.hpp"

namespace rssrisk::verify
{

namespace
{

struct Axis
{
  double pos{0.0};
  double vel{0.0};
};

// Constant-acceleration advance with a floor at zero speed: braking stops
// the car at the crossing instant instead of reversing it.
void advance_forward(Axis & s, double a, double dur)
{
  const double v_next = s.vel + a * dur;
  if (v_next < 0.0) {
    const double t_stop = a != 0.0 ? -s.vel / a : 0.0;
    s.pos += s.vel * t_stop + 0.5 * a * t_stop * t_stop;
    s.vel = 0.0;
  } else {
    s.pos += s.vel * dur + 0.5 * a * dur * dur;
    s.vel = v_next;
  }
}

void advance_free(Axis & s, double a, double dur)
{
  s.pos += s.vel * dur + 0.5 * a * dur * dur;
  s.vel += a * dur;
}

// Lateral braking toward zero velocity; holds once stopped.
void advance_lat_brake(Axis & s, double brake, double dur)
{
  if (s.vel == 0.0) {
    return;
  }
  const double a = s.vel > 0.0 ? -brake : brake;
  const double v_next = s.vel + a * dur;
  if ((s.vel > 0.0) != (v_next > 0.0) || v_next == 0.0) {
    const double t_stop = -s.vel / a;
    s.pos += s.vel * t_stop + 0.5 * a * t_stop * t_stop;
    s.vel = 0.0;
  } else {
    s.pos += s.vel * dur + 0.5 * a * dur * dur;
    s.vel = v_next;
  }
}

std::vector<double> grid_levels(double lo, double hi, int n)
{
  if (lo == hi) {
    return {lo};
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return out;
}

struct PairFrame
{
  int rear{0};  // index into {a, b}
  int front{1};
  double half_len_sum{0.0};
  double half_wid_sum{0.0};
};

class ProfileSimulator
{
public:
  ProfileSimulator(
    const geometry::VehicleState & a, const geometry::VehicleState & b,
    const sim::RssParams & params, const PairFrame & frame, const VerifyConfig & config)
  : params_(params), frame_(frame), config_(config)
  {
    init_[0] = a;
    init_[1] = b;
  }

  // Returns the collision time, or nullopt if the profile stays safe.
  // `closest` accumulates the smallest collision margin seen so far.
  std::optional<double> run(
    const AdversaryProfile & p, std::vector<VerifyTraceStep> * trace, double * closest) const
  {
    Axis lon[2] = {{init_[0].x, init_[0].v_x}, {init_[1].x, init_[1].v_x}};
    Axis lat[2] = {{init_[0].y, init_[0].v_y}, {init_[1].y, init_[1].v_y}};
    const double lat_accel[2] = {p.lat_response_a, p.lat_response_b};
    const double rho = params_.lon.rho;
    const double dt = config_.dt;
    const auto n_steps = static_cast<long>(std::floor(config_.horizon / dt + 1e-9));

    if (trace) {
      trace->push_back(snapshot(0.0, lon, lat));
    }

    for (long k = 1; k <= n_steps; ++k) {
      const double t0 = static_cast<double>(k - 1) * dt;
      const double t1 = static_cast<double>(k) * dt;
      double cursor = t0;
      while (cursor < t1 - 1e-15) {
        const bool response = cursor < rho - 1e-15;
        const double seg_end = response ? std::min(t1, rho) : t1;
        const double dur = seg_end - cursor;
        if (response) {
          advance_forward(lon[frame_.rear], p.rear_lon_response, dur);
          advance_forward(lon[frame_.front], p.front_lon_response, dur);
          advance_free(lat[0], lat_accel[0], dur);
          advance_free(lat[1], lat_accel[1], dur);
        } else {
          advance_forward(lon[frame_.rear], -params_.lon.a_min_brake, dur);
          advance_forward(lon[frame_.front], p.front_lon_after, dur);
          advance_lat_brake(lat[0], params_.lat.a_lat_min_brake, dur);
          advance_lat_brake(lat[1], params_.lat.a_lat_min_brake, dur);
        }
        cursor = seg_end;
      }

      if (trace) {
        trace->push_back(snapshot(t1, lon, lat));
      }
      const double lon_gap = std::abs(lon[0].pos - lon[1].pos) - frame_.half_len_sum;
      const double lat_gap = std::abs(lat[0].pos - lat[1].pos) - frame_.half_wid_sum;
      if (closest) {
        *closest = std::min(*closest, std::max(lon_gap, lat_gap));
      }
      if (lon_gap <= 0.0 && lat_gap <= 0.0) {
        return t1;
      }
      // Once the rear car and both lateral motions have stopped after the
      // response window, the longitudinal gap can only grow and the lateral
      // gap is frozen: nothing can close anymore.
      if (t1 >= rho && lon[frame_.rear].vel == 0.0 && lat[0].vel == 0.0 && lat[1].vel == 0.0) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

private:
  VerifyTraceStep snapshot(double t, const Axis lon[2], const Axis lat[2]) const
  {
    VerifyTraceStep s;
    s.t = t;
    s.x_a = lon[0].pos;
    s.v_x_a = lon[0].vel;
    s.y_a = lat[0].pos;
    s.v_y_a = lat[0].vel;
    s.x_b = lon[1].pos;
    s.v_x_b = lon[1].vel;
    s.y_b = lat[1].pos;
    s.v_y_b = lat[1].vel;
    return s;
  }

  geometry::VehicleState init_[2];
  const sim::RssParams & params_;
  PairFrame frame_;
  const VerifyConfig & config_;
};

}  // namespace

void VerifyConfig::validate() const
{
  if (accel_grid_levels < 2) {
    throw ParameterError("accel_grid_levels must be >= 2");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw ParameterError("verify dt must be > 0");
  }
  if (!std::isfinite(horizon) || horizon < dt) {
    throw ParameterError("verify horizon must be >= dt");
  }
}

VerifyResult verify_zero_risk(
  const geometry::VehicleState & a, const geometry::VehicleState & b,
  const sim::RssParams & params, const core::RiskParams & risk, const VerifyConfig & config,
  core::BranchPolicy policy)
{
  config.validate();
  params.validate();

  const geometry::PairStates pair = geometry::pair_states(a, b);
  const core::RiskBreakdown breakdown =
    core::risk_breakdown(pair.lon, pair.lat, params.lon, params.lat, risk, policy);
  if (breakdown.r != 0.0) {
    throw PreconditionError("verify_zero_risk requires a pair with unified risk 0");
  }

  const geometry::PairGap gaps = geometry::pair_gap(a, b);
  PairFrame frame;
  frame.rear = gaps.rear_id == a.id ? 0 : 1;
  frame.front = 1 - frame.rear;
  frame.half_len_sum = 0.5 * (a.length + b.length);
  frame.half_wid_sum = 0.5 * (a.width + b.width);

  const auto rear_response = grid_levels(
    -params.lon.a_cap_brake, params.lon.a_max_accel, config.accel_grid_levels);
  const auto front_lon = grid_levels(
    -params.lon.a_max_brake, params.lon.a_max_accel, config.accel_grid_levels);
  const auto lat_response = grid_levels(
    -params.lat.a_lat_max_accel, params.lat.a_lat_max_accel, config.accel_grid_levels);

  const ProfileSimulator simulator(a, b, params, frame, config);

  VerifyResult result;
  result.closest_approach = std::numeric_limits<double>::infinity();
  for (double g_rear : rear_response) {
    for (double g_front1 : front_lon) {
      for (double g_front2 : front_lon) {
        for (double h_a : lat_response) {
          for (double h_b : lat_response) {
            AdversaryProfile profile{g_rear, g_front1, g_front2, h_a, h_b};
            ++result.profiles_checked;
            if (const auto hit = simulator.run(profile, nullptr, &result.closest_approach)) {
              result.verified = false;
              result.counterexample = profile;
              result.collision_time = *hit;
              simulator.run(profile, &result.counterexample_trace, nullptr);
              return result;
            }
          }
        }
      }
    }
  }
  result.verified = true;
  return result;
}

std::pair<geometry::VehicleState, geometry::VehicleState> sample_vehicle_pair(
  std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto draw = [&](const char * id) {
    geometry::VehicleState s;
    s.id = id;
    s.x = 180.0 * u(rng);
    s.y = 10.0 * u(rng);
    s.v_x = 30.0 * u(rng);
    s.v_y = -2.0 + 4.0 * u(rng);
    s.length = 4.8;
    s.width = 1.8;
    return s;
  };
  return {draw("a"), draw("b")};
}

}  // namespace rssrisk::verify
