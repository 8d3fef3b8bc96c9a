#pragma once

#include <vector>

#include "swiftnav/world.hpp"

namespace swiftnav {

// Distance membership: 0 at or below d_lo, 1 at or above d_hi, linear ramp between.
double membership(double range, double d_lo = 2.0, double d_hi = 10.0);

// Directional weight for a body-frame bearing in degrees (normalized to [0, 360)).
// Front [330, 360) u [0, 30] -> 1.0; rear [150, 210] -> 0.2; sides -> 0.5.
// Boundaries resolve as: 30 -> 1.0, 150 -> 0.2, 210 -> 0.2, 330 -> 1.0.
double sector_weight(double angle_deg);

// Weighted-mean safety score in [0, 1] over a full scan; throws on an empty scan.
double safety_score(const std::vector<RayHit>& hits, double d_lo = 2.0, double d_hi = 10.0);

}  // namespace swiftnav
