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

#include "rssrisk/risk_index.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rssrisk/errors.hpp"

namespace rssrisk::core
{

namespace
{

void require_finite(double value, const char * name)
{
  if (!std::isfinite(value)) {
    throw InvalidInputError(std::string(name) + " must be finite");
  }
}

/// Displacement of one car along the lateral axis: trapezoid over the
/// response window, then braking at |b| until the lateral velocity reaches
/// zero. The braking leg continues in the direction of the response
/// velocity, so a car that ends its response moving away keeps moving away.
double lateral_travel(double v0, double a_response, double rho, double brake)
{
  const double v_rho = v0 + rho * a_response;
  const double response = 0.5 * (v0 + v_rho) * rho;
  const double sign = v_rho > 0.0 ? 1.0 : (v_rho < 0.0 ? -1.0 : 0.0);
  return response + sign * v_rho * v_rho / (2.0 * brake);
}

double d_lon_min_with_brake(
  const LongitudinalPairState & s, const LongitudinalParams & p, double rear_brake)
{
  const double v_response = s.v_rear + p.rho * p.a_max_accel;
  const double raw = s.v_rear * p.rho + 0.5 * p.rho * p.rho * p.a_max_accel +
                     v_response * v_response / (2.0 * rear_brake) -
                     s.v_front * s.v_front / (2.0 * p.a_max_brake);
  return std::max(raw, 0.0);
}

double d_lat_min_with_brake(
  const LateralPairState & s, const LateralParams & p, double brake)
{
  const double raw = lateral_travel(s.v_left, p.a_lat_max_accel, p.rho, brake) -
                     lateral_travel(s.v_right, -p.a_lat_max_accel, p.rho, brake);
  return std::max(raw, 0.0);
}

double risk_ramp(double gap, double d_min, double d_min_brake, BranchPolicy policy)
{
  if (policy == BranchPolicy::kStrictPaper) {
    if (gap >= d_min && d_min > 0.0) {
      return 0.0;
    }
    if (d_min >= gap && gap >= d_min_brake && d_min_brake > 0.0) {
      // Branch one already caught gap == d_min when d_min > 0, so the ramp
      // here always has positive width.
      return 1.0 - (gap - d_min_brake) / (d_min - d_min_brake);
    }
    return 1.0;
  }

  if (gap <= 0.0) {
    return 1.0;
  }
  if (gap >= d_min) {
    return 0.0;
  }
  if (gap <= d_min_brake) {
    return 1.0;
  }
  return 1.0 - (gap - d_min_brake) / (d_min - d_min_brake);
}

}  // namespace

void LongitudinalParams::validate() const
{
  require_finite(rho, "rho");
  require_finite(a_max_accel, "a_max_accel");
  require_finite(a_min_brake, "a_min_brake");
  require_finite(a_max_brake, "a_max_brake");
  require_finite(a_cap_brake, "a_cap_brake");
  if (rho <= 0.0) throw ParameterError("rho must be > 0");
  if (a_max_accel < 0.0) throw ParameterError("a_max_accel must be >= 0");
  if (a_min_brake <= 0.0) throw ParameterError("a_min_brake must be > 0");
  if (a_max_brake <= 0.0) throw ParameterError("a_max_brake must be > 0");
  if (a_cap_brake < a_min_brake) throw ParameterError("a_cap_brake must be >= a_min_brake");
}

void LateralParams::validate() const
{
  require_finite(rho, "rho");
  require_finite(a_lat_max_accel, "a_lat_max_accel");
  require_finite(a_lat_min_brake, "a_lat_min_brake");
  require_finite(a_lat_cap_brake, "a_lat_cap_brake");
  if (rho <= 0.0) throw ParameterError("rho must be > 0");
  if (a_lat_max_accel < 0.0) throw ParameterError("a_lat_max_accel must be >= 0");
  if (a_lat_min_brake <= 0.0) throw ParameterError("a_lat_min_brake must be > 0");
  if (a_lat_cap_brake < a_lat_min_brake) {
    throw ParameterError("a_lat_cap_brake must be >= a_lat_min_brake");
  }
}

void RiskParams::validate() const
{
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  if (beta <= 0.0) throw ParameterError("beta must be > 0");
  if (gamma <= 0.0) throw ParameterError("gamma must be > 0");
}

void LongitudinalPairState::validate() const
{
  require_finite(v_rear, "v_rear");
  require_finite(v_front, "v_front");
  require_finite(d_lon, "d_lon");
  if (v_rear < 0.0) throw InvalidInputError("v_rear must be >= 0 (forward driving)");
  if (v_front < 0.0) throw InvalidInputError("v_front must be >= 0 (forward driving)");
}

void LateralPairState::validate() const
{
  require_finite(v_left, "v_left");
  require_finite(v_right, "v_right");
  require_finite(d_lat, "d_lat");
}

LateralResponseVelocities lateral_response_velocities(
  const LateralPairState & state, const LateralParams & p)
{
  state.validate();
  p.validate();
  return {state.v_left + p.rho * p.a_lat_max_accel,
          state.v_right - p.rho * p.a_lat_max_accel};
}

double d_lon_min(const LongitudinalPairState & state, const LongitudinalParams & p)
{
  state.validate();
  p.validate();
  return d_lon_min_with_brake(state, p, p.a_min_brake);
}

double d_lon_min_brake(const LongitudinalPairState & state, const LongitudinalParams & p)
{
  state.validate();
  p.validate();
  return d_lon_min_with_brake(state, p, p.a_cap_brake);
}

double r_lon(
  const LongitudinalPairState & state, const LongitudinalParams & p, BranchPolicy policy)
{
  return risk_ramp(state.d_lon, d_lon_min(state, p), d_lon_min_brake(state, p), policy);
}

double d_lat_min(const LateralPairState & state, const LateralParams & p)
{
  state.validate();
  p.validate();
  return d_lat_min_with_brake(state, p, p.a_lat_min_brake);
}

double d_lat_min_brake(const LateralPairState & state, const LateralParams & p)
{
  state.validate();
  p.validate();
  return d_lat_min_with_brake(state, p, p.a_lat_cap_brake);
}

double r_lat(const LateralPairState & state, const LateralParams & p, BranchPolicy policy)
{
  return risk_ramp(state.d_lat, d_lat_min(state, p), d_lat_min_brake(state, p), policy);
}

double unified_risk(double r_lon_value, double r_lat_value, const RiskParams & rp)
{
  rp.validate();
  require_finite(r_lon_value, "r_lon");
  require_finite(r_lat_value, "r_lat");
  if (r_lon_value < 0.0 || r_lon_value > 1.0) {
    throw InvalidInputError("r_lon must lie in [0,1]");
  }
  if (r_lat_value < 0.0 || r_lat_value > 1.0) {
    throw InvalidInputError("r_lat must lie in [0,1]");
  }
  return std::pow(r_lon_value, rp.beta) * std::pow(r_lat_value, rp.gamma);
}

RiskBreakdown risk_breakdown(
  const LongitudinalPairState & lon, const LateralPairState & lat,
  const LongitudinalParams & lp, const LateralParams & tp, const RiskParams & rp,
  BranchPolicy policy)
{
  RiskBreakdown out;
  out.d_lon_min = d_lon_min(lon, lp);
  out.d_lon_min_brake = d_lon_min_brake(lon, lp);
  out.d_lat_min = d_lat_min(lat, tp);
  out.d_lat_min_brake = d_lat_min_brake(lat, tp);
  out.r_lon = risk_ramp(lon.d_lon, out.d_lon_min, out.d_lon_min_brake, policy);
  out.r_lat = risk_ramp(lat.d_lat, out.d_lat_min, out.d_lat_min_brake, policy);
  out.r = unified_risk(out.r_lon, out.r_lat, rp);
  return out;
}

}  // namespace rssrisk::core
