#include "swiftnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swiftnav/rng.hpp"

namespace swiftnav {

namespace {
constexpr double kMinSegment = 1e-3;
constexpr double kActionBound = 3.0;

std::array<Vec2, 6> chain(const WaypointPolyline& p) {
    return {p.origin, p.waypoints[0], p.waypoints[1], p.waypoints[2], p.waypoints[3],
            p.waypoints[4]};
}

bool degenerate(const WaypointPolyline& p) {
    auto pts = chain(p);
    for (int i = 0; i < 5; ++i)
        if (distance(pts[i], pts[i + 1]) < kMinSegment) return true;
    return false;
}

WaypointPolyline forward_stub(const VehicleState& state) {
    WaypointPolyline out;
    out.origin = state.position;
    out.provenance = Provenance::actor;
    const Vec2 dir{std::cos(state.yaw), std::sin(state.yaw)};
    for (int k = 0; k < 5; ++k) out.waypoints[k] = state.position + dir * (0.5 * (k + 1));
    return out;
}
}  // namespace

double ExplorationSchedule::epsilon() const {
    return std::max(eps_min, eps0 * std::pow(lambda, static_cast<double>(episode_index)));
}

WaypointPolyline decode_action(const std::array<double, 10>& a, const VehicleState& state) {
    WaypointPolyline out;
    out.origin = state.position;
    out.provenance = Provenance::actor;
    Vec2 w = state.position;
    for (int k = 0; k < 5; ++k) {
        const Vec2 body{std::clamp(a[2 * k], -kActionBound, kActionBound),
                        std::clamp(a[2 * k + 1], -kActionBound, kActionBound)};
        w = w + rotate(body, state.yaw);
        out.waypoints[k] = w;
    }
    if (degenerate(out)) return forward_stub(state);
    return out;
}

std::array<double, 10> encode_action(const WaypointPolyline& polyline, double yaw) {
    std::array<double, 10> a{};
    Vec2 prev = polyline.origin;
    for (int k = 0; k < 5; ++k) {
        const Vec2 body = rotate(polyline.waypoints[k] - prev, -yaw);
        a[2 * k] = std::clamp(body.x, -kActionBound, kActionBound);
        a[2 * k + 1] = std::clamp(body.y, -kActionBound, kActionBound);
        prev = polyline.waypoints[k];
    }
    return a;
}

WaypointPolyline explore(const WaypointPolyline& polyline, const ExplorationSchedule& sched,
                         std::uint64_t rng_seed) {
    const double eps = sched.epsilon();
    if (eps <= 0.0) return polyline;
    Rng rng(rng_seed);

    if (rng.uniform01() < eps) {
        // Parametric random proposal: the first two dimensions are scaled to
        // diversify heading and curvature, the third sets waypoint spacing.
        const double u0 = rng.uniform(-1.0, 1.0);
        const double u1 = rng.uniform(-1.0, 1.0);
        const double u2 = rng.uniform(-1.0, 1.0);
        const double heading_offset = u0 * 1.5;           // detour side / heading [rad]
        const double curvature = u1 * 0.6;                // blend per segment [rad]
        const double spacing = 1.75 + 1.25 * u2;          // in [0.5, 3.0] m

        const Vec2 first = polyline.waypoints[0] - polyline.origin;
        const double base = std::atan2(first.y, first.x) + heading_offset;
        WaypointPolyline out;
        out.origin = polyline.origin;
        out.provenance = Provenance::random;
        Vec2 w = polyline.origin;
        for (int k = 0; k < 5; ++k) {
            const double theta = base + curvature * k;
            w = w + Vec2{std::cos(theta), std::sin(theta)} * spacing;
            out.waypoints[k] = w;
        }
        return out;
    }

    WaypointPolyline out = polyline;
    for (auto& w : out.waypoints) w = w + rng.in_disc(sched.rho) * eps;
    if (degenerate(out)) return polyline;  // keep the proposal when jitter collapses a segment
    return out;
}

double polyline_clearance(const WaypointPolyline& polyline, const World& world) {
    if (world.obstacles.empty()) return std::numeric_limits<double>::infinity();
    const auto pts = chain(polyline);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ob : world.obstacles)
        for (int i = 0; i < 5; ++i)
            best = std::min(best,
                            point_segment_distance(ob.center, pts[i], pts[i + 1]) - ob.radius);
    return best;
}

double polyline_turning(const WaypointPolyline& polyline) {
    const auto pts = chain(polyline);
    double total = 0.0;
    for (int i = 0; i + 2 < 6; ++i) {
        const Vec2 d0 = pts[i + 1] - pts[i];
        const Vec2 d1 = pts[i + 2] - pts[i + 1];
        total += std::abs(wrap_angle(std::atan2(d1.y, d1.x) - std::atan2(d0.y, d0.x)));
    }
    return total;
}

namespace {

bool inside_bounds(const WaypointPolyline& p, const World& world) {
    for (const auto& w : p.waypoints)
        if (!world.bounds.contains(w)) return false;
    return true;
}

double score_of(const WaypointPolyline& p, const World& world, const Vec2& goal,
                const CheckerConfig& cfg) {
    const double progress = distance(p.origin, goal) - distance(p.waypoints[4], goal);
    const double clear = std::min(polyline_clearance(p, world), cfg.clear_cap);
    return cfg.w_goal * progress + cfg.w_clear * clear - cfg.w_curv * polyline_turning(p);
}

bool eligible(const WaypointPolyline& p, const World& world, const CheckerConfig& cfg) {
    return inside_bounds(p, world) && polyline_clearance(p, world) >= cfg.clearance_margin &&
           !degenerate(p);
}

// Closest point on segment ab to c.
Vec2 closest_on_segment(const Vec2& c, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq < 1e-18) return a;
    const double t = std::clamp(dot(c - a, ab) / len_sq, 0.0, 1.0);
    return a + ab * t;
}

// Pushes the endpoints of margin-violating segments along the obstacle-surface
// normal at the closest approach (lateral-left fallback when the segment crosses
// the center). Returns the repaired polyline (which may still violate) and
// whether anything moved.
std::pair<WaypointPolyline, bool> repair(WaypointPolyline p, const World& world,
                                         const CheckerConfig& cfg) {
    bool changed = false;
    for (int iter = 0; iter < cfg.max_modify_iters; ++iter) {
        const auto pts = chain(p);
        // One displacement per waypoint: the push from its worst incident violation.
        std::array<Vec2, 5> disp{};
        std::array<double, 5> worst{};
        bool any = false;
        for (const auto& ob : world.obstacles) {
            for (int i = 0; i < 5; ++i) {
                const Vec2 q = closest_on_segment(ob.center, pts[i], pts[i + 1]);
                const double surf = distance(q, ob.center) - ob.radius;
                if (surf >= cfg.clearance_margin) continue;
                any = true;
                const double deficit = cfg.clearance_margin - surf + 1e-6;
                Vec2 dir = q - ob.center;
                if (dir.norm() < 1e-9) {
                    const Vec2 seg = pts[i + 1] - pts[i];
                    dir = seg.norm() > 1e-9 ? Vec2{-seg.y, seg.x} : Vec2{1.0, 0.0};
                }
                dir = dir * (1.0 / dir.norm());
                const Vec2 delta = dir * deficit;
                // Both segment endpoints are offending; the origin stays fixed.
                for (int k : {i - 1, i}) {
                    if (k < 0) continue;
                    if (deficit > worst[k]) {
                        worst[k] = deficit;
                        disp[k] = delta;
                    }
                }
            }
        }
        if (!any) break;
        for (int k = 0; k < 5; ++k) p.waypoints[k] = p.waypoints[k] + disp[k];
        p.provenance = Provenance::modified;
        changed = true;
    }
    return {p, changed};
}

}  // namespace

CheckResult check_and_score(const WaypointPolyline& polyline, const World& world,
                            const Vec2& goal, const CheckerConfig& cfg) {
    if (!cfg.enabled)
        return {polyline, score_of(polyline, world, goal, cfg), Verdict::keep};

    const bool keep_ok = eligible(polyline, world, cfg);
    auto [repaired, changed] = repair(polyline, world, cfg);
    const bool modify_ok = changed && eligible(repaired, world, cfg);

    if (!keep_ok && !modify_ok)
        return {polyline, -std::numeric_limits<double>::infinity(), Verdict::reject};
    if (keep_ok && !modify_ok)
        return {polyline, score_of(polyline, world, goal, cfg), Verdict::keep};
    if (!keep_ok)  // only the repaired candidate qualifies
        return {repaired, score_of(repaired, world, goal, cfg), Verdict::modify};

    const double keep_score = score_of(polyline, world, goal, cfg);
    const double modify_score = score_of(repaired, world, goal, cfg);
    if (modify_score > keep_score) return {repaired, modify_score, Verdict::modify};
    return {polyline, keep_score, Verdict::keep};
}

std::optional<WaypointPolyline> escape_line(const VehicleState& state,
                                            const std::vector<RayHit>& scan, const Vec2& goal,
                                            const CheckerConfig& cfg) {
    const int n = static_cast<int>(scan.size());
    if (n < 2) return std::nullopt;
    const double spacing = 360.0 / n;

    std::vector<bool> free(n);
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
        free[i] = scan[i].range >= cfg.free_range;
        free_count += free[i] ? 1 : 0;
    }
    if (free_count == 0) return std::nullopt;

    const Vec2 to_goal = goal - state.position;
    const double dist_goal = to_goal.norm();
    const double goal_bearing_deg =
        wrap_deg(rad2deg(std::atan2(to_goal.y, to_goal.x) - state.yaw));

    double best_dir_deg = 0.0, best_min_range = 0.0;
    bool found = false;
    double best_gap = 1e300;

    if (free_count == n) {
        // Fully free scan: head straight for the goal.
        best_dir_deg = goal_bearing_deg;
        found = true;
        best_min_range = scan[0].range;
        for (const auto& h : scan) best_min_range = std::min(best_min_range, h.range);
    } else {
        // Walk circular runs of free rays, anchored at a blocked ray so no run
        // straddles the scan start.
        int z = 0;
        while (free[z]) ++z;
        for (int off = 0; off < n;) {
            const int i = (z + off) % n;
            if (!free[i]) {
                ++off;
                continue;
            }
            int len = 0;
            while (off + len < n && free[(z + off + len) % n]) ++len;
            const double span = (len - 1) * spacing;
            if (span >= cfg.free_sector_deg) {
                const double bisector = wrap_deg(scan[i].angle_deg + 0.5 * span);
                double run_min = std::numeric_limits<double>::infinity();
                for (int k = 0; k < len; ++k)
                    run_min = std::min(run_min, scan[(i + k) % n].range);
                const double gap = std::abs(wrap_deg(bisector - goal_bearing_deg));
                if (!found || gap < best_gap) {
                    found = true;
                    best_gap = gap;
                    best_dir_deg = bisector;
                    best_min_range = run_min;
                }
            }
            off += len;
        }
    }
    if (!found) return std::nullopt;

    const double length = std::min({0.5 * best_min_range, dist_goal, 15.0});
    if (length < 0.5) return std::nullopt;  // too short to be a useful escape

    const double heading = state.yaw + deg2rad(best_dir_deg);
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    WaypointPolyline out;
    out.origin = state.position;
    out.provenance = Provenance::random;
    for (int k = 0; k < 5; ++k)
        out.waypoints[k] = state.position + dir * (length * (k + 1) / 5.0);
    return out;
}

}  // namespace swiftnav
