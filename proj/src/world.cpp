#include "swiftnav/world.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace swiftnav {

std::vector<double> SensorConfig::offsets_deg() const {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(ray_count));
    const double step = 360.0 / static_cast<double>(ray_count);
    for (int i = 0; i < ray_count; ++i) out.push_back(step * static_cast<double>(i));
    return out;
}

namespace {

// Ray-circle intersection: smallest t >= 0 with |o + t*u - c| = r, or none.
std::optional<double> ray_circle(const Vec2& origin, const Vec2& dir, const Obstacle& ob) {
    const Vec2 oc = ob.center - origin;
    const double proj = dot(oc, dir);
    const double disc = proj * proj - (oc.norm_sq() - ob.radius * ob.radius);
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double t_in = proj - root;
    if (t_in >= 0.0) return t_in;
    const double t_out = proj + root;
    if (t_out >= 0.0) return 0.0;  // origin inside the disc
    return std::nullopt;
}

// Distance along the ray until it exits the bounds rectangle.
double ray_bounds_exit(const Bounds& b, const Vec2& origin, const Vec2& dir) {
    double t_exit = std::numeric_limits<double>::infinity();
    if (dir.x > 0.0) t_exit = std::min(t_exit, (b.xmax - origin.x) / dir.x);
    if (dir.x < 0.0) t_exit = std::min(t_exit, (b.xmin - origin.x) / dir.x);
    if (dir.y > 0.0) t_exit = std::min(t_exit, (b.ymax - origin.y) / dir.y);
    if (dir.y < 0.0) t_exit = std::min(t_exit, (b.ymin - origin.y) / dir.y);
    return std::max(t_exit, 0.0);
}

}  // namespace

double raycast(const World& world, const Vec2& origin, double heading, double max_range) {
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    double best = ray_bounds_exit(world.bounds, origin, dir);
    for (const auto& ob : world.obstacles) {
        if (auto t = ray_circle(origin, dir, ob); t && *t < best) best = *t;
    }
    return std::min(best, max_range);
}

std::vector<RayHit> scan(const World& world, const VehicleState& state, const SensorConfig& cfg) {
    std::vector<RayHit> out;
    out.reserve(static_cast<size_t>(cfg.ray_count));
    for (double off : cfg.offsets_deg()) {
        const double heading = state.yaw + deg2rad(off);
        out.push_back({off, raycast(world, state.position, heading, cfg.max_range)});
    }
    return out;
}

std::optional<double> min_range(const World& world, const Vec2& position, double R) {
    std::optional<double> best;
    for (const auto& ob : world.obstacles) {
        const double surface = distance(position, ob.center) - ob.radius;
        if (surface <= R && (!best || surface < *best)) best = surface;
    }
    return best;
}

bool line_of_sight(const World& world, const Vec2& a, const Vec2& b, double clearance) {
    for (const auto& ob : world.obstacles) {
        if (point_segment_distance(ob.center, a, b) - ob.radius < clearance) return false;
    }
    return true;
}

bool collides(const World& world, const Vec2& position, double safety_radius) {
    if (!world.bounds.contains(position)) return true;
    for (const auto& ob : world.obstacles) {
        if (distance(position, ob.center) - ob.radius < safety_radius) return true;
    }
    return false;
}

VehicleState step_kinematics(const VehicleState& state, const Command& cmd, double dt,
                             const KinematicLimits& limits) {
    const double v = std::clamp(cmd.speed, 0.0, limits.v_max);
    const double omega = std::clamp(cmd.yaw_rate, -limits.omega_max, limits.omega_max);
    const double vz = std::clamp(cmd.vertical_rate, -limits.vz_max, limits.vz_max);

    VehicleState next = state;
    next.yaw = wrap_angle(state.yaw + omega * dt);
    next.position = state.position + Vec2{std::cos(next.yaw), std::sin(next.yaw)} * (v * dt);
    next.z = state.z + vz * dt;
    next.speed = v;
    next.yaw_rate = omega;
    next.vertical_rate = vz;
    return next;
}

World load_world(const std::string& path, double safety_radius) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("world not found: " + path);

    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("world file " + path + ": " + e.what());
    }

    World w;
    try {
        const auto& b = j.at("bounds");
        w.bounds = {b.at("xmin").get<double>(), b.at("ymin").get<double>(),
                    b.at("xmax").get<double>(), b.at("ymax").get<double>()};
        w.start = {j.at("start").at(0).get<double>(), j.at("start").at(1).get<double>()};
        w.goal = {j.at("goal").at(0).get<double>(), j.at("goal").at(1).get<double>()};
        w.goal_altitude = j.at("goal_altitude").get<double>();
        for (const auto& o : j.at("obstacles")) {
            w.obstacles.push_back(
                {{o.at("x").get<double>(), o.at("y").get<double>()}, o.at("r").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("world file " + path + ": " + e.what());
    }

    if (w.bounds.xmax <= w.bounds.xmin || w.bounds.ymax <= w.bounds.ymin)
        throw std::runtime_error("world file " + path + ": degenerate bounds");
    for (const auto& ob : w.obstacles) {
        if (!(ob.radius > 0.0))
            throw std::runtime_error("world file " + path + ": obstacle radius must be > 0");
    }
    for (const auto& [name, p] : {std::pair{"start", w.start}, std::pair{"goal", w.goal}}) {
        if (!w.bounds.contains(p))
            throw std::runtime_error("world file " + path + ": " + name + " outside bounds");
        for (const auto& ob : w.obstacles) {
            if (distance(p, ob.center) - ob.radius < safety_radius)
                throw std::runtime_error("world file " + path + ": " + name +
                                         " inside inflated obstacle");
        }
    }
    return w;
}

}  // namespace swiftnav
