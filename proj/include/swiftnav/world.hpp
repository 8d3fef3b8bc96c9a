#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swiftnav/geometry.hpp"

namespace swiftnav {

struct Obstacle {
    Vec2 center;
    double radius = 1.0;  // [m], > 0
};

struct Bounds {
    double xmin = 0.0, ymin = 0.0;
    double xmax = 0.0, ymax = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

// Static planar scene. Immutable after load; safe to share across threads.
struct World {
    std::vector<Obstacle> obstacles;
    Bounds bounds;
    Vec2 start;
    Vec2 goal;
    double goal_altitude = 0.0;  // [m]
};

struct VehicleState {
    Vec2 position;
    double z = 0.0;              // altitude [m]
    double yaw = 0.0;            // [rad], wrapped to (-pi, pi]
    double speed = 0.0;          // [m/s], >= 0
    double yaw_rate = 0.0;       // [rad/s]
    double vertical_rate = 0.0;  // [m/s]
};

// Kinematic command; components are saturated, never rejected.
struct Command {
    double speed = 0.0;
    double yaw_rate = 0.0;
    double vertical_rate = 0.0;
};

struct KinematicLimits {
    double v_max = 3.0;      // [m/s]
    double omega_max = 1.5;  // [rad/s]
    double vz_max = 1.0;     // [m/s]
};

struct SensorConfig {
    int ray_count = 36;
    double max_range = 55.0;  // [m]

    // Evenly spaced body-relative offsets in degrees, starting at 0 (forward).
    // Degrees are kept exact so sector boundaries (30/150/210/330) resolve cleanly.
    std::vector<double> offsets_deg() const;
};

// One ray of a scan: body-relative bearing [deg] in [0, 360) and range [m].
struct RayHit {
    double angle_deg = 0.0;
    double range = 0.0;
};

// Distance along the ray to the nearest obstacle boundary or bounds exit,
// clamped to max_range. Total: returns max_range when nothing is hit.
double raycast(const World& world, const Vec2& origin, double heading, double max_range);

// One range per sensor offset; angles are body-relative (0 = vehicle forward).
std::vector<RayHit> scan(const World& world, const VehicleState& state, const SensorConfig& cfg);

// Minimum distance from `position` to any obstacle surface whose surface lies
// within R. Empty when no obstacle is that close (callers treat it as safe).
std::optional<double> min_range(const World& world, const Vec2& position, double R);

// True iff the segment a->b keeps >= clearance from every obstacle surface
// (closed inequality: a grazing tangent at exactly `clearance` passes).
bool line_of_sight(const World& world, const Vec2& a, const Vec2& b, double clearance);

// True iff `position` is within safety_radius of an obstacle surface (strict
// inequality) or outside the world bounds.
bool collides(const World& world, const Vec2& position, double safety_radius);

// Unicycle + scalar altitude integration over dt. Commands are saturated to
// `limits`; yaw stays wrapped to (-pi, pi].
VehicleState step_kinematics(const VehicleState& state, const Command& cmd, double dt,
                             const KinematicLimits& limits = {});

// Loads a world JSON file ({bounds, start, goal, goal_altitude, obstacles}).
// Validates start/goal against bounds and obstacles inflated by safety_radius.
// Throws std::runtime_error with the offending detail on malformed input.
World load_world(const std::string& path, double safety_radius = 0.5);

}  // namespace swiftnav
