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

#include "rssrisk/frame_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rssrisk/errors.hpp"

namespace rssrisk::geometry
{

namespace
{

void require_finite(double value, const char * name)
{
  if (!std::isfinite(value)) {
    throw InvalidInputError(std::string(name) + " must be finite");
  }
}

double raw_lon_gap(const VehicleState & a, const VehicleState & b)
{
  return std::abs(a.x - b.x) - 0.5 * (a.length + b.length);
}

double raw_lat_gap(const VehicleState & a, const VehicleState & b)
{
  return std::abs(a.y - b.y) - 0.5 * (a.width + b.width);
}

// a takes the rear (resp. left) role; ties fall back to identifier order.
bool first_is_lower(double ca, double cb, const std::string & ida, const std::string & idb)
{
  if (ca != cb) {
    return ca < cb;
  }
  return ida < idb;
}

}  // namespace

void VehicleState::validate() const
{
  require_finite(x, "x");
  require_finite(y, "y");
  require_finite(v_x, "v_x");
  require_finite(v_y, "v_y");
  require_finite(a_x, "a_x");
  require_finite(a_y, "a_y");
  require_finite(length, "length");
  require_finite(width, "width");
  if (length <= 0.0) throw InvalidInputError("length must be > 0");
  if (width <= 0.0) throw InvalidInputError("width must be > 0");
  if (v_x < 0.0) throw InvalidInputError("v_x must be >= 0 (forward driving)");
}

PairGap pair_gap(const VehicleState & a, const VehicleState & b)
{
  a.validate();
  b.validate();

  const double lon = raw_lon_gap(a, b);
  const double lat = raw_lat_gap(a, b);

  PairGap out;
  out.d_lon = std::max(lon, 0.0);
  out.d_lat = std::max(lat, 0.0);
  out.overlapping_lon = lon <= 0.0;
  out.overlapping_lat = lat <= 0.0;

  const bool a_rear = first_is_lower(a.x, b.x, a.id, b.id);
  out.rear_id = a_rear ? a.id : b.id;
  out.front_id = a_rear ? b.id : a.id;

  const bool a_left = first_is_lower(a.y, b.y, a.id, b.id);
  out.left_id = a_left ? a.id : b.id;
  out.right_id = a_left ? b.id : a.id;
  return out;
}

bool in_collision(const VehicleState & a, const VehicleState & b)
{
  a.validate();
  b.validate();
  return raw_lon_gap(a, b) <= 0.0 && raw_lat_gap(a, b) <= 0.0;
}

PairStates pair_states(const VehicleState & a, const VehicleState & b)
{
  const PairGap gaps = pair_gap(a, b);
  const bool a_rear = gaps.rear_id == a.id;
  const bool a_left = gaps.left_id == a.id;

  PairStates out;
  out.lon.v_rear = a_rear ? a.v_x : b.v_x;
  out.lon.v_front = a_rear ? b.v_x : a.v_x;
  out.lon.d_lon = gaps.d_lon;

  // The convention axis points from the left car toward the right car, which
  // coincides with world +y once the smaller-y vehicle takes the left role.
  out.lat.v_left = a_left ? a.v_y : b.v_y;
  out.lat.v_right = a_left ? b.v_y : a.v_y;
  out.lat.d_lat = gaps.d_lat;
  return out;
}

}  // namespace rssrisk::geometry
