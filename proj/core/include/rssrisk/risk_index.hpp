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

#ifndef RSSRISK_RISK_INDEX_HPP_
#define RSSRISK_RISK_INDEX_HPP_

namespace rssrisk::core
{

/// Longitudinal assumption bounds for an ordered rear/front pair.
///
/// rho is the rear car's response time; during it the rear may accelerate by
/// at most a_max_accel, after it the rear brakes by at least a_min_brake. The
/// front car never brakes harder than a_max_brake. a_cap_brake is the rear
/// car's maximum capable braking (>= a_min_brake).
struct LongitudinalParams
{
  double rho{1.0};          // s
  double a_max_accel{0.0};  // m/s^2
  double a_min_brake{1.0};  // m/s^2
  double a_max_brake{1.0};  // m/s^2
  double a_cap_brake{1.0};  // m/s^2

  void validate() const;
};

/// Lateral assumption bounds. rho is shared with the longitudinal case.
struct LateralParams
{
  double rho{1.0};              // s
  double a_lat_max_accel{0.0};  // m/s^2
  double a_lat_min_brake{1.0};  // m/s^2
  double a_lat_cap_brake{1.0};  // m/s^2

  void validate() const;
};

/// Risk propensity exponents; values < 1 act as risk aversion.
struct RiskParams
{
  double beta{1.0};
  double gamma{1.0};

  void validate() const;
};

/// Speeds and current gap of an ordered rear/front pair. Forward driving
/// only: both speeds must be >= 0.
struct LongitudinalPairState
{
  double v_rear{0.0};   // m/s
  double v_front{0.0};  // m/s
  double d_lon{0.0};    // m

  void validate() const;
};

/// Signed lateral velocities and current gap of an ordered left/right pair.
///
/// Sign convention: the lateral axis points from the left car toward the
/// right car. Positive v_left moves the left car toward the right car;
/// positive v_right moves the right car away from the left car.
struct LateralPairState
{
  double v_left{0.0};   // m/s
  double v_right{0.0};  // m/s
  double d_lat{0.0};    // m

  void validate() const;
};

/// Velocities reached after the response window.
struct LateralResponseVelocities
{
  double v_left_rho{0.0};
  double v_right_rho{0.0};
};

LateralResponseVelocities lateral_response_velocities(
  const LateralPairState & state, const LateralParams & p);

/// How the piecewise risk-index branch guards treat degenerate bounds.
///
/// kReinterpreted (default): r = 0 whenever d >= d_min (including d_min = 0
/// with d > 0) and r = 1 whenever d <= 0 (bodies touching or overlapping).
/// kStrictPaper: the literal "> 0" guards, under which d_min = 0 always
/// yields r = 1.
enum class BranchPolicy
{
  kReinterpreted,
  kStrictPaper,
};

/// Minimum safe longitudinal distance (guaranteed-braking bound).
double d_lon_min(const LongitudinalPairState & state, const LongitudinalParams & p);

/// Tighter longitudinal bound using the rear car's maximum capable braking.
double d_lon_min_brake(const LongitudinalPairState & state, const LongitudinalParams & p);

/// Longitudinal risk index in [0,1]: 0 above d_lon_min, 1 below
/// d_lon_min_brake, linear ramp in between.
double r_lon(
  const LongitudinalPairState & state, const LongitudinalParams & p,
  BranchPolicy policy = BranchPolicy::kReinterpreted);

/// Minimum safe lateral distance.
double d_lat_min(const LateralPairState & state, const LateralParams & p);

/// Tighter lateral bound using the maximum capable lateral braking.
double d_lat_min_brake(const LateralPairState & state, const LateralParams & p);

/// Lateral risk index in [0,1], mirror of r_lon.
double r_lat(
  const LateralPairState & state, const LateralParams & p,
  BranchPolicy policy = BranchPolicy::kReinterpreted);

/// Unified risk index r_lon^beta * r_lat^gamma. Zero iff either factor is
/// zero; both inputs must already lie in [0,1].
double unified_risk(double r_lon_value, double r_lat_value, const RiskParams & rp);

/// All indices and distance bounds for one vehicle pair.
struct RiskBreakdown
{
  double r_lon{0.0};
  double r_lat{0.0};
  double r{0.0};
  double d_lon_min{0.0};
  double d_lon_min_brake{0.0};
  double d_lat_min{0.0};
  double d_lat_min_brake{0.0};
};

RiskBreakdown risk_breakdown(
  const LongitudinalPairState & lon, const LateralPairState & lat,
  const LongitudinalParams & lp, const LateralParams & tp, const RiskParams & rp,
  BranchPolicy policy = BranchPolicy::kReinterpreted);

}  // namespace rssrisk::core

#endif  // RSSRISK_RISK_INDEX_HPP_
