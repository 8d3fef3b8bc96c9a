#pragma once

#include <optional>

#include "swiftnav/world.hpp"

namespace swiftnav {

// Straight guidance line from an anchor point toward a goal, frozen by the
// caller for as long as the active mode persists.
struct GuidanceLine {
    Vec2 anchor{};             // p_d, the point the line was instantiated at
    Vec2 goal{};               // p_g
    std::optional<double> k;   // slope (absent when the line is vertical)
    std::optional<double> b;   // intercept, b = y_d - k*x_d (absent when vertical)
    double heading = 0.0;      // atan2(dy, dx)
    Vec2 tangent{1.0, 0.0};    // (cos heading, sin heading)
    Vec2 normal{0.0, 1.0};     // (-sin heading, cos heading); positive side = left
    double length = 0.0;       // |goal - anchor|
};

struct TravelErrors {
    double e_perp = 0.0;  // signed cross-track, positive = left of line
    double e_psi = 0.0;   // wrapped heading error
    double s = 0.0;       // signed progress along the line from the anchor
};

struct TravelGains {
    double k_s = 1.0;        // Stanley cross-track gain
    double k_psi = 1.5;      // heading gain [1/s]
    double k_y = 0.6;        // cross-track gain [1/(m s)]
    double eps_speed = 0.1;  // Stanley low-speed regularizer [m/s]
    double v_cruise = 2.0;   // commanded travel speed [m/s]
    bool use_stanley = false;
};

struct LandingConfig {
    double delta_in = 2.0;   // landing entry distance [m]
    double delta_out = 3.0;  // landing exit distance [m], > delta_in
    double s_land = 0.7;     // minimum safety score to start/continue landing
    double d_land = 2.5;     // minimum obstacle distance to start/continue landing [m]
    double k_v = 0.8;        // approach speed gain [1/s]
    double v_min = 0.2;      // approach speed floor [m/s]
    double v_max = 1.5;      // approach speed cap [m/s]
    double k_perp = 0.8;     // lateral pull-in gain [1/s]
    double k_z = 0.5;        // descent gain [1/s]
    double vz_max = 0.5;     // descent rate cap [m/s]
    double r_desc = 1.5;     // descent gate: horizontal distance [m]
    double psi_th = 0.5;     // descent gate: heading alignment [rad]
    double r_tol = 0.3;      // touchdown position tolerance [m]
    double h_tol = 0.1;      // touchdown altitude tolerance [m]
    double v_tol = 0.1;      // touchdown planar-speed tolerance [m/s]
    double psi_tol = 0.3;    // touchdown heading tolerance [rad]
    double t_settle = 1.0;   // touchdown dwell [s]
    double k_yaw = 1.5;      // landing yaw-alignment gain [1/s]
};

// Builds the line through p_d and p_g. Throws std::invalid_argument
// ("degenerate line") when the points coincide; callers should treat that as
// "already at the goal" and hand over to landing.
GuidanceLine make_guidance_line(const Vec2& p_d, const Vec2& p_g);

// Cross-track / heading / along-track errors of a pose against the line.
TravelErrors travel_errors(const GuidanceLine& line, const Vec2& position, double yaw);

// Line-following command. Default is the saturated PD law
//   yaw_rate = -sat(k_psi*e_psi + k_y*e_perp, omega_max)
// (negated so positive e_perp = left of line steers right, back to the line);
// the Stanley form delta = e_psi + atan(k_s*e_perp/(v+eps)) is available via
// gains.use_stanley, mapped to yaw rate through k_psi.
Command travel_command(const TravelErrors& err, double v, const TravelGains& gains,
                       double omega_max = 1.5);

// Final-approach command: distance-proportional speed clip(k_v*dist, v_min, v_max)
// along the goal bearing, lateral pull toward `line` folded into the yaw command,
// and gated bounded-rate descent -clip(k_z*(z - z_g), 0, vz_max) active only when
// dist < r_desc and the goal-bearing heading error is within psi_th. Inside
// r_tol/2 the planar command holds position (speed 0, yaw still aligning) so the
// touchdown speed tolerance is reachable.
Command landing_command(const VehicleState& state, const Vec2& goal, double z_g,
                        const GuidanceLine& line, const LandingConfig& cfg,
                        double omega_max = 1.5);

// Instantaneous touchdown conditions: position within r_tol, altitude within
// h_tol, planar speed below v_tol, goal-bearing heading error below psi_tol.
bool landing_conditions_met(const VehicleState& state, const Vec2& goal, double z_g,
                            const LandingConfig& cfg);

// True once the instantaneous conditions hold and the caller-maintained settle
// clock has accumulated at least t_settle seconds.
bool touchdown_met(const VehicleState& state, const Vec2& goal, double z_g,
                   const LandingConfig& cfg, double settle_clock);

}  // namespace swiftnav
