#include "swiftnav/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swiftnav {

namespace {
constexpr double kVerticalEps = 1e-6;  // |dx| below this -> vertical line x = x_d

double sat(double x, double limit) { return std::clamp(x, -limit, limit); }
}  // namespace

GuidanceLine make_guidance_line(const Vec2& p_d, const Vec2& p_g) {
    const Vec2 d = p_g - p_d;
    if (d.x == 0.0 && d.y == 0.0) throw std::invalid_argument("degenerate line");

    GuidanceLine line;
    line.anchor = p_d;
    line.goal = p_g;
    line.heading = std::atan2(d.y, d.x);
    line.tangent = {std::cos(line.heading), std::sin(line.heading)};
    line.normal = {-std::sin(line.heading), std::cos(line.heading)};
    line.length = d.norm();
    if (std::abs(d.x) > kVerticalEps) {
        line.k = d.y / d.x;
        line.b = p_d.y - *line.k * p_d.x;
    }
    return line;
}

TravelErrors travel_errors(const GuidanceLine& line, const Vec2& position, double yaw) {
    const Vec2 rel = position - line.anchor;
    return {dot(line.normal, rel), wrap_angle(yaw - line.heading), dot(line.tangent, rel)};
}

Command travel_command(const TravelErrors& err, double v, const TravelGains& gains,
                       double omega_max) {
    double steer;
    if (gains.use_stanley) {
        steer = err.e_psi + std::atan(gains.k_s * err.e_perp / (v + gains.eps_speed));
        steer *= gains.k_psi;  // steering angle mapped to a yaw rate
    } else {
        steer = gains.k_psi * err.e_psi + gains.k_y * err.e_perp;
    }
    return {gains.v_cruise, -sat(steer, omega_max), 0.0};
}

namespace {

// Heading error against the bearing to the goal; zero when on top of the goal.
double goal_heading_error(const VehicleState& state, const Vec2& goal) {
    const Vec2 e_p = goal - state.position;
    if (e_p.norm() < 1e-9) return 0.0;
    return wrap_angle(state.yaw - std::atan2(e_p.y, e_p.x));
}

}  // namespace

Command landing_command(const VehicleState& state, const Vec2& goal, double z_g,
                        const GuidanceLine& line, const LandingConfig& cfg, double omega_max) {
    const Vec2 e_p = goal - state.position;
    const double dist = e_p.norm();
    const double e_psi = goal_heading_error(state, goal);

    Command cmd{0.0, 0.0, 0.0};
    if (dist < 0.5 * cfg.r_tol) {
        // Hold: stop translating so the touchdown speed tolerance can be met,
        // keep rotating into alignment.
        cmd.speed = 0.0;
        cmd.yaw_rate = -sat(cfg.k_yaw * e_psi, omega_max);
    } else {
        const double v_par = std::clamp(cfg.k_v * dist, cfg.v_min, cfg.v_max);
        const Vec2 t_hat = e_p * (1.0 / dist);
        const double e_perp = dot(line.normal, state.position - line.anchor);
        const Vec2 v_des = t_hat * v_par - line.normal * (cfg.k_perp * e_perp);
        const double mag = v_des.norm();
        cmd.speed = std::min(mag, cfg.v_max);
        const double heading_des =
            mag > 1e-9 ? std::atan2(v_des.y, v_des.x) : std::atan2(e_p.y, e_p.x);
        cmd.yaw_rate = -sat(cfg.k_yaw * wrap_angle(state.yaw - heading_des), omega_max);
    }

    if (dist < cfg.r_desc && std::abs(e_psi) < cfg.psi_th)
        cmd.vertical_rate = -std::clamp(cfg.k_z * (state.z - z_g), 0.0, cfg.vz_max);
    return cmd;
}

bool landing_conditions_met(const VehicleState& state, const Vec2& goal, double z_g,
                            const LandingConfig& cfg) {
    return distance(state.position, goal) < cfg.r_tol && std::abs(state.z - z_g) < cfg.h_tol &&
           std::abs(state.speed) < cfg.v_tol &&
           std::abs(goal_heading_error(state, goal)) < cfg.psi_tol;
}

bool touchdown_met(const VehicleState& state, const Vec2& goal, double z_g,
                   const LandingConfig& cfg, double settle_clock) {
    return landing_conditions_met(state, goal, z_g, cfg) && settle_clock >= cfg.t_settle;
}

}  // namespace swiftnav
