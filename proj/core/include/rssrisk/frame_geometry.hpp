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

#ifndef RSSRISK_FRAME_GEOMETRY_HPP_
#define RSSRISK_FRAME_GEOMETRY_HPP_

#include <string>

#include "rssrisk/risk_index.hpp"

namespace rssrisk::geometry
{

/// One vehicle on a straight road: x is longitudinal, y lateral, both for
/// the body center. The body is an axis-aligned length x width rectangle.
struct VehicleState
{
  std::string id;
  double x{0.0};
  double y{0.0};
  double v_x{0.0};
  double v_y{0.0};
  double a_x{0.0};
  double a_y{0.0};
  double length{4.8};
  double width{1.8};

  void validate() const;
};

/// Body-to-body gaps of an ordered pair and the role assignment.
/// Gaps are clamped at zero; a raw gap <= 0 sets the overlap flag.
struct PairGap
{
  std::string rear_id;
  std::string front_id;
  std::string left_id;
  std::string right_id;
  double d_lon{0.0};
  double d_lat{0.0};
  bool overlapping_lon{false};
  bool overlapping_lat{false};
};

PairGap pair_gap(const VehicleState & a, const VehicleState & b);

/// True iff the body rectangles overlap in both axes; exact touching counts.
bool in_collision(const VehicleState & a, const VehicleState & b);

/// Pair states for the risk formulas: rear/front from x ordering, left/right
/// from y ordering, lateral velocities re-signed to the left-toward-right
/// convention. Exact coordinate ties are broken by identifier order.
struct PairStates
{
  core::LongitudinalPairState lon;
  core::LateralPairState lat;
};

PairStates pair_states(const VehicleState & a, const VehicleState & b);

}  // namespace rssrisk::geometry

#endif  // RSSRISK_FRAME_GEOMETRY_HPP_
