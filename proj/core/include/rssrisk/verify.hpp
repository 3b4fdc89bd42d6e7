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

#ifndef RSSRISK_VERIFY_HPP_
#define RSSRISK_VERIFY_HPP_

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "rssrisk/frame_geometry.hpp"
#include "rssrisk/simulator.hpp"

namespace rssrisk::verify
{

struct VerifyConfig
{
  int accel_grid_levels{5};
  double dt{0.1};
  double horizon{10.0};

  void validate() const;
};

/// One adversarial piecewise-constant profile: accelerations during the
/// response window (switching once at t = rho), after which the rear car
/// brakes at a_min_brake to a stop, the front car applies
/// front_lon_after, and both cars laterally brake at a_lat_min_brake
/// toward zero lateral velocity.
struct AdversaryProfile
{
  double rear_lon_response{0.0};
  double front_lon_response{0.0};
  double front_lon_after{0.0};
  double lat_response_a{0.0};
  double lat_response_b{0.0};
};

struct VerifyTraceStep
{
  double t{0.0};
  double x_a{0.0}, y_a{0.0}, v_x_a{0.0}, v_y_a{0.0};
  double x_b{0.0}, y_b{0.0}, v_x_b{0.0}, v_y_b{0.0};
};

struct VerifyResult
{
  bool verified{false};
  std::optional<AdversaryProfile> counterexample;
  std::optional<double> collision_time;
  std::vector<VerifyTraceStep> counterexample_trace;
  long profiles_checked{0};
  /// Smallest collision margin reached over all profiles: min over time of
  /// max(longitudinal raw gap, lateral raw gap). <= 0 means collision.
  double closest_approach{0.0};
};

/// Exhaustively simulates every gridded adversarial profile within the
/// assumption bounds and reports the first profile (if any) that reaches a
/// body-rectangle collision within the horizon. The input pair must have
/// unified risk exactly zero (PreconditionError otherwise).
VerifyResult verify_zero_risk(
  const geometry::VehicleState & a, const geometry::VehicleState & b,
  const sim::RssParams & params, const core::RiskParams & risk, const VerifyConfig & config,
  core::BranchPolicy policy = core::BranchPolicy::kReinterpreted);

/// Draws a random two-vehicle state for verification sweeps: positions
/// within a highway-scale box, speeds up to 30 m/s, lateral velocities in
/// [-2, 2] m/s, standard car footprints.
std::pair<geometry::VehicleState, geometry::VehicleState> sample_vehicle_pair(
  std::mt19937_64 & rng);

}  // namespace rssrisk::verify

#endif  // RSSRISK_VERIFY_HPP_
