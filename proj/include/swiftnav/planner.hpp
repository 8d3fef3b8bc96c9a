#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "swiftnav/world.hpp"

namespace swiftnav {

enum class Provenance { actor, random, modified };

// Five world-frame waypoints executed from `origin`.
struct WaypointPolyline {
    std::array<Vec2, 5> waypoints{};
    Vec2 origin{};
    Provenance provenance = Provenance::actor;
};

struct ExplorationSchedule {
    double eps0 = 1.0;
    double lambda = 0.995;   // per-episode decay
    double eps_min = 0.05;
    double rho = 1.0;        // waypoint offset bound [m]
    std::int64_t episode_index = 0;

    double epsilon() const;  // max(eps_min, eps0 * lambda^episode_index)
};

struct CheckerConfig {
    double clearance_margin = 0.5;  // minimum obstacle clearance for accepted paths [m]
    double sample_step = 0.25;      // segment sampling pitch used by validation oracles [m]
    double w_goal = 1.0;
    double w_clear = 0.5;
    double w_curv = 0.2;
    int max_modify_iters = 10;
    double clear_cap = 5.0;         // clearance credited at most this much [m]
    bool enabled = true;
    double free_sector_deg = 60.0;  // escape line: minimum free-sector span
    double free_range = 12.0;       // escape line: range at/above which a ray counts as free [m]
};

enum class Verdict { keep, modify, reject };

struct CheckResult {
    WaypointPolyline polyline;
    double score;
    Verdict verdict;
};

// Interprets the 10-vector (clamped to [-3,3]) as five cumulative body-frame
// offset pairs rotated by the vehicle yaw: w_k = w_{k-1} + R(yaw)*(a[2k], a[2k+1]).
// If any resulting segment is shorter than 1e-3 m the whole proposal is replaced
// by five points at 0.5 m spacing straight along the current heading.
WaypointPolyline decode_action(const std::array<double, 10>& a, const VehicleState& state);

// Inverse of decode_action for a non-degenerate polyline: recovers the clamped
// cumulative body-frame offsets that decode to it.
std::array<double, 10> encode_action(const WaypointPolyline& polyline, double yaw);

// Geometry-space exploration: with probability epsilon() substitutes a
// parametric random proposal (heading offset, per-segment curvature blend,
// spacing decoded from three uniform [-1,1] draws); otherwise perturbs each
// waypoint by epsilon()*dw with |dw| <= rho. Deterministic under a fixed seed.
WaypointPolyline explore(const WaypointPolyline& polyline, const ExplorationSchedule& sched,
                         std::uint64_t rng_seed);

// Exact obstacle clearance of the polyline (origin->w1->...->w5): minimum
// segment-to-surface distance over all obstacles; +infinity with no obstacles.
double polyline_clearance(const WaypointPolyline& polyline, const World& world);

// Total absolute turning over the polyline's interior vertices [rad].
double polyline_turning(const WaypointPolyline& polyline);

// Keep / modify / reject decision with the score
//   w_goal*(dist(origin,goal) - dist(w5,goal)) + w_clear*min(clearance, clear_cap)
//   - w_curv*turning.
// Margin-violating waypoints are pushed along the local obstacle normal (at most
// max_modify_iters passes); candidates that still violate the margin or leave the
// bounds are ineligible, and with no eligible candidate the verdict is reject
// (score -infinity, input returned unchanged).
CheckResult check_and_score(const WaypointPolyline& polyline, const World& world,
                            const Vec2& goal, const CheckerConfig& cfg);

// If a contiguous run of free rays (range >= free_range) spans at least
// free_sector_deg, returns a five-point straight polyline along the run's
// bisector (the goal bearing when the whole scan is free), with length
// min(half the run's shortest range, distance to goal, 15 m); none otherwise.
std::optional<WaypointPolyline> escape_line(const VehicleState& state,
                                            const std::vector<RayHit>& scan, const Vec2& goal,
                                            const CheckerConfig& cfg);

}  // namespace swiftnav
