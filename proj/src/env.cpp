#include "swiftnav/env.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "swiftnav/fuzzy.hpp"
#include "swiftnav/rng.hpp"

namespace swiftnav {

namespace {

// Seed-stream tags so every random consumer draws from an independent stream.
constexpr std::uint64_t kStreamEpisode = 1;
constexpr std::uint64_t kStreamExplore = 21;
constexpr std::uint64_t kStreamSample = 31;
constexpr std::uint64_t kStreamNoise = 32;

}  // namespace

std::vector<double> encode_state(const World& world, const VehicleState& state,
                                 const SensorConfig& sensor) {
    std::vector<double> s(kStateDim, 0.0);
    s[0] = state.position.x;
    s[1] = state.position.y;
    s[2] = state.z;
    // s[3], s[4]: roll and pitch, identically zero in the planar model.
    s[5] = state.yaw;
    // s[6], s[7]: roll and pitch rates, also zero.
    s[8] = state.yaw_rate;
    s[9] = state.speed * std::cos(state.yaw);
    s[10] = state.speed * std::sin(state.yaw);
    s[11] = state.vertical_rate;

    struct Triple {
        double dx, dy, d;
    };
    std::vector<Triple> triples;
    triples.reserve(world.obstacles.size());
    for (const auto& ob : world.obstacles) {
        const double dx = ob.center.x - state.position.x;
        const double dy = ob.center.y - state.position.y;
        const double d = std::hypot(dx, dy);
        if (d <= sensor.max_range) triples.push_back({dx, dy, d});
    }
    std::stable_sort(triples.begin(), triples.end(),
                     [](const Triple& a, const Triple& b) { return a.d < b.d; });

    for (std::size_t j = 0; j < kObstacleSlots; ++j) {
        const std::size_t base = 12 + 3 * j;
        if (j < triples.size()) {
            s[base] = triples[j].dx;
            s[base + 1] = triples[j].dy;
            s[base + 2] = triples[j].d;
        } else {
            s[base] = 0.0;
            s[base + 1] = 0.0;
            s[base + 2] = sensor.max_range;
        }
    }
    return s;
}

RewardTable traj1_rewards() {
    RewardTable t;
    t.step_cost = -1.0;
    t.progress_gain = 2.0;
    t.goal_bonus = 200.0;
    t.goal_radius = 2.0;
    t.contact_terminal = true;
    t.crash_terminal = -1000.0;
    t.oob_penalty = -1000.0;  // bounds exit treated as a terminal crash
    t.line_departure_penalty = -50.0;
    t.line_departure_threshold = 3.0;
    t.bypass_bonus = 100.0;
    return t;
}

RewardTable traj2_rewards() {
    RewardTable t;
    t.step_cost = -0.5;
    t.progress_gain = 1.5;
    t.goal_bonus = 3500.0;
    t.goal_radius = 2.0;
    t.contact_terminal = false;
    t.crash_recoverable = -200.0;
    t.oob_penalty = -1500.0;
    t.no_progress_enabled = true;
    t.no_progress_penalty = -500.0;
    t.no_progress_window = 50;
    t.no_progress_dist = 0.5;
    t.proximity_gain = 1.2;
    t.proximity_radius = 5.0;
    t.switch_bonus = 500.0;
    t.zone_exit_bonus = 50.0;
    t.novelty_bonus = 20.0;
    t.revisit_penalty = -10.0;
    return t;
}

double reward_step(const StepEvents& e, const RewardTable& t) {
    double r = t.step_cost;
    r += t.progress_gain * e.progress;
    if (e.goal) r += t.goal_bonus;
    if (e.collision == CollisionClass::terminal) r += t.crash_terminal;
    if (e.collision == CollisionClass::recoverable) r += t.crash_recoverable;
    if (e.out_of_bounds) r += t.oob_penalty;
    if (e.no_progress) r += t.no_progress_penalty;
    if (e.line_departure) r += t.line_departure_penalty;
    if (t.proximity_gain != 0.0 && e.d_min && *e.d_min < t.proximity_radius)
        r -= t.proximity_gain * (t.proximity_radius - *e.d_min);
    if (e.safe_switch) r += t.switch_bonus;
    if (e.zone_exit) r += t.zone_exit_bonus;
    if (e.endpoint_novel) r += t.novelty_bonus;
    if (e.endpoint_revisit) r += t.revisit_penalty;
    if (e.bypass) r += t.bypass_bonus;
    return r;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::success: return "success";
        case Outcome::crash: return "crash";
        case Outcome::out_of_bounds: return "out_of_bounds";
        case Outcome::no_progress: return "no_progress";
        case Outcome::step_limit: return "step_limit";
    }
    return "unknown";
}

std::vector<double> moving_average(const std::vector<double>& series, std::size_t window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    std::vector<double> out(series.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= window) acc -= series[i - window];
        const std::size_t n = std::min(window, i + 1);
        out[i] = acc / static_cast<double>(n);
    }
    return out;
}

namespace {

// Waypoint-tracking state for the RL mode.
struct RlExecutor {
    bool tracking = false;
    std::array<Vec2, 6> chain{};        // origin + five waypoints
    std::array<double, 10> action{};    // encoded form of the tracked polyline
    int segment = 0;
    std::size_t steps_on_polyline = 0;
    std::uint64_t proposal_count = 0;   // exploration stream index
    bool contact_during_segment = false;

    void reset() {
        tracking = false;
        segment = 0;
        steps_on_polyline = 0;
        contact_during_segment = false;
    }
};

// Picks the next polyline: actor proposal (optionally explored), checked and
// possibly repaired, compared against an escape line through open space.
// Returns false when every candidate is rejected (caller holds position).
bool propose_polyline(RlExecutor& rl, const World& world, const EnvConfig& cfg, TD3Nets& nets,
                      const VehicleState& vs, const std::vector<double>& state_vec,
                      const std::vector<RayHit>& rays, bool exploring, std::uint64_t ep_seed) {
    const auto raw = forward(nets.actor, state_vec);
    std::array<double, 10> a{};
    std::copy_n(raw.begin(), kActionDim, a.begin());
    WaypointPolyline cand = decode_action(a, vs);
    if (exploring) {
        cand = explore(cand, cfg.explore,
                       derive_seed(ep_seed, kStreamExplore, rl.proposal_count));
    }
    ++rl.proposal_count;

    CheckResult best = check_and_score(cand, world, world.goal, cfg.checker);
    if (const auto esc = escape_line(vs, rays, world.goal, cfg.checker)) {
        const CheckResult alt = check_and_score(*esc, world, world.goal, cfg.checker);
        if (alt.verdict != Verdict::reject && alt.score > best.score) best = alt;
    }
    if (best.verdict == Verdict::reject) return false;

    rl.tracking = true;
    rl.segment = 0;
    rl.steps_on_polyline = 0;
    rl.chain[0] = best.polyline.origin;
    for (int i = 0; i < 5; ++i) rl.chain[i + 1] = best.polyline.waypoints[i];
    rl.action = encode_action(best.polyline, vs.yaw);
    return true;
}

// Line-following command for the active segment; advances past completed
// segments. Sets `completed` when the final waypoint has been passed.
Command track_polyline(RlExecutor& rl, const VehicleState& vs, const EnvConfig& cfg,
                       bool& completed) {
    completed = false;
    while (rl.segment < 5) {
        const Vec2 a = rl.chain[rl.segment];
        const Vec2 b = rl.chain[rl.segment + 1];
        if (distance(a, b) < 1e-9) {
            ++rl.segment;
            continue;
        }
        const GuidanceLine line = make_guidance_line(a, b);
        const TravelErrors err = travel_errors(line, vs.position, vs.yaw);
        if (err.s >= line.length) {
            ++rl.segment;
            continue;
        }
        return travel_command(err, vs.speed, cfg.gains, cfg.limits.omega_max);
    }
    completed = true;
    return {0.0, 0.0, 0.0};
}

// One learner step: stratified PER sample, clipped double-Q targets,
// importance-weighted critic step, priority refresh, delayed actor/targets.
void learner_step(TD3Nets& nets, const EnvConfig& cfg, LearnContext& lc) {
    if (!lc.learn || !lc.buffer || lc.buffer->size() < std::max(lc.warmup, cfg.td3.batch))
        return;
    ++*lc.learn_steps;
    const std::uint64_t k = *lc.learn_steps;
    const auto sample =
        lc.buffer->sample(cfg.td3.batch, derive_seed(lc.master_seed, kStreamSample, k));
    const auto y = compute_targets(sample.transitions, nets, cfg.td3,
                                   derive_seed(lc.master_seed, kStreamNoise, k));
    const auto deltas = update_critics(nets, sample.transitions, y, sample.is_weights, cfg.td3);
    lc.buffer->update_priorities(sample.handles, deltas);
    update_actor_and_targets(nets, sample.transitions, cfg.td3, k);
    if (lc.env_steps && lc.beta_horizon > 0) {
        lc.buffer->anneal_beta(std::min(
            1.0, static_cast<double>(*lc.env_steps) / static_cast<double>(lc.beta_horizon)));
    }
}

GuidanceLine line_toward_goal(const Vec2& position, double yaw, const Vec2& goal) {
    if (distance(position, goal) > 1e-9) return make_guidance_line(position, goal);
    // Degenerate entry exactly on the goal: anchor one meter behind the nose.
    const Vec2 behind = goal - Vec2{std::cos(yaw), std::sin(yaw)};
    return make_guidance_line(behind, goal);
}

}  // namespace

RunEpisodeOutput run_episode(const World& world, const EnvConfig& cfg, TD3Nets& nets,
                             std::uint64_t seed, bool exploring, LearnContext* learn) {
    RunEpisodeOutput out;
    EpisodeResult& res = out.result;

    VehicleState vs;
    vs.position = world.start;
    vs.z = cfg.start_altitude;
    const double goal_bearing = std::atan2(world.goal.y - world.start.y,
                                           world.goal.x - world.start.x);
    vs.yaw = distance(world.start, world.goal) > 1e-9 ? goal_bearing : 0.0;

    ArbiterState arb = make_arbiter_state(cfg.arbiter);
    GuidanceLine travel_line = line_toward_goal(vs.position, vs.yaw, world.goal);
    std::optional<GuidanceLine> landing_line;
    RlExecutor rl;
    Mode mode = cfg.rl_always_on ? Mode::RL : arb.mode;

    double d_prev = distance(vs.position, world.goal);
    bool in_contact = false;
    bool excursion = false;
    bool goal_paid = false;
    bool switch_bonus_paid = false;
    std::optional<double> d_min_initial =
        min_range(world, vs.position, cfg.sensor.max_range);
    bool prev_inside_zone =
        d_min_initial && *d_min_initial <= cfg.rewards.proximity_radius;
    double settle_clock = 0.0;
    std::deque<Vec2> rl_endpoints;
    std::deque<Vec2> position_ring;
    position_ring.push_back(vs.position);

    res.trajectory.push_back({0.0, vs.position, vs.z, mode});

    const std::uint64_t ep_seed = derive_seed(seed, kStreamEpisode);
    bool terminal = false;

    std::size_t step = 0;
    for (; step < cfg.step_limit && !terminal; ++step) {
        // --- Sense.
        const auto rays = scan(world, vs, cfg.sensor);
        const double s_fuzzy = safety_score(rays);
        const auto d_min_pre = min_range(world, vs.position, cfg.sensor.max_range);
        const double dist_goal = distance(vs.position, world.goal);
        const auto state_vec = encode_state(world, vs, cfg.sensor);

        // --- Arbitrate.
        StepEvents events;
        bool switched = false;
        const Mode prev_mode = mode;
        if (!cfg.rl_always_on) {
            ArbiterInputs in;
            in.d_min = d_min_pre;
            in.s_fuzzy = s_fuzzy;
            in.dist_to_goal = dist_goal;
            in.los_to_goal =
                line_of_sight(world, vs.position, world.goal, cfg.arbiter.los_clearance);
            const Mode desired = desired_mode(in, arb.mode, cfg.arbiter);
            switched = step_arbiter(arb, desired, cfg.arbiter);
            mode = arb.mode;
        }
        if (switched) {
            position_ring.clear();  // a fresh mode restarts the stall window
            if (mode == Mode::Travel) {
                travel_line = line_toward_goal(vs.position, vs.yaw, world.goal);
                excursion = false;
            } else if (mode == Mode::RL) {
                rl.reset();
            } else {
                landing_line = line_toward_goal(vs.position, vs.yaw, world.goal);
                settle_clock = 0.0;
            }
            if (prev_mode == Mode::RL && mode == Mode::Travel) {
                if (!switch_bonus_paid) {
                    events.safe_switch = true;
                    switch_bonus_paid = true;
                }
                if (!rl.contact_during_segment) events.bypass = true;
            }
        }

        // --- Mode-specific command.
        Command cmd{};
        bool rl_acting = false;
        double e_perp_now = 0.0;
        if (mode == Mode::Travel) {
            TravelErrors err = travel_errors(travel_line, vs.position, vs.yaw);
            if (err.s > travel_line.length && dist_goal > 1e-6) {
                travel_line = line_toward_goal(vs.position, vs.yaw, world.goal);
                err = travel_errors(travel_line, vs.position, vs.yaw);
            }
            e_perp_now = err.e_perp;
            cmd = travel_command(err, vs.speed, cfg.gains, cfg.limits.omega_max);
        } else if (mode == Mode::RL) {
            if (!rl.tracking) {
                propose_polyline(rl, world, cfg, nets, vs, state_vec, rays, exploring, ep_seed);
            }
            if (rl.tracking) {
                bool completed = false;
                cmd = track_polyline(rl, vs, cfg, completed);
                if (completed) {
                    // Endpoint bookkeeping: novelty vs. recently visited.
                    bool revisit = false;
                    for (const auto& p : rl_endpoints) {
                        if (distance(p, vs.position) < cfg.rewards.revisit_radius) {
                            revisit = true;
                            break;
                        }
                    }
                    if (revisit)
                        events.endpoint_revisit = true;
                    else
                        events.endpoint_novel = true;
                    rl_endpoints.push_back(vs.position);
                    while (rl_endpoints.size() >
                           static_cast<std::size_t>(cfg.rewards.revisit_history))
                        rl_endpoints.pop_front();

                    const bool had_contact = rl.contact_during_segment;
                    rl.reset();
                    rl.contact_during_segment = had_contact;
                    propose_polyline(rl, world, cfg, nets, vs, state_vec, rays, exploring,
                                     ep_seed);
                    if (rl.tracking) cmd = track_polyline(rl, vs, cfg, completed);
                }
                ++rl.steps_on_polyline;
                if (rl.steps_on_polyline > cfg.polyline_step_cap) {
                    const bool had_contact = rl.contact_during_segment;
                    rl.reset();  // abandoned: no endpoint event
                    rl.contact_during_segment = had_contact;
                }
            }
            if (rl.tracking) {
                rl_acting = true;
            } else {
                // No safe plan this step: hold position and slew the nose so the
                // next scan (and proposal) sees a different aspect.
                cmd = {0.0, 0.5 * cfg.limits.omega_max, 0.0};
            }
        } else {  // Landing
            if (!landing_line) landing_line = line_toward_goal(vs.position, vs.yaw, world.goal);
            cmd = landing_command(vs, world.goal, world.goal_altitude, *landing_line,
                                  cfg.landing, cfg.limits.omega_max);
        }

        // --- Integrate.
        const VehicleState vs_next = step_kinematics(vs, cmd, cfg.dt, cfg.limits);

        // --- Settle clock for touchdown.
        if (mode == Mode::Landing) {
            if (landing_conditions_met(vs_next, world.goal, world.goal_altitude, cfg.landing))
                settle_clock += cfg.dt;
            else
                settle_clock = 0.0;
        } else {
            settle_clock = 0.0;
        }

        // --- Events and termination.
        const bool oob = !world.bounds.contains(vs_next.position);
        const auto d_min_post = min_range(world, vs_next.position, cfg.sensor.max_range);
        const bool contact = d_min_post && *d_min_post < cfg.safety_radius;
        const double d_curr = distance(vs_next.position, world.goal);

        events.progress = d_prev - d_curr;
        d_prev = d_curr;
        events.d_min = d_min_post;

        if (oob) {
            events.out_of_bounds = true;
            terminal = true;
            res.outcome = Outcome::out_of_bounds;
        } else if (contact) {
            if (cfg.rewards.contact_terminal) {
                events.collision = CollisionClass::terminal;
                terminal = true;
                res.outcome = Outcome::crash;
            } else if (!in_contact) {
                events.collision = CollisionClass::recoverable;
            }
            if (mode == Mode::RL) rl.contact_during_segment = true;
        }
        in_contact = contact;

        if (!goal_paid && d_curr < cfg.rewards.goal_radius) {
            events.goal = true;
            goal_paid = true;
            if (cfg.rl_always_on && !terminal) {
                terminal = true;
                res.outcome = Outcome::success;
            }
        }

        const bool inside_zone =
            d_min_post && *d_min_post <= cfg.rewards.proximity_radius;
        if (prev_inside_zone && !inside_zone) events.zone_exit = true;
        prev_inside_zone = inside_zone;

        if (mode == Mode::Travel) {
            const double thr = cfg.rewards.line_departure_threshold;
            if (std::abs(e_perp_now) > thr) {
                if (!excursion) {
                    events.line_departure = true;
                    excursion = true;
                }
            } else {
                excursion = false;
            }
        }

        position_ring.push_back(vs_next.position);
        const std::size_t window = static_cast<std::size_t>(cfg.rewards.no_progress_window);
        while (position_ring.size() > window + 1) position_ring.pop_front();
        if (!terminal && cfg.rewards.no_progress_enabled && mode != Mode::Landing &&
            position_ring.size() == window + 1 &&
            distance(position_ring.front(), vs_next.position) < cfg.rewards.no_progress_dist) {
            events.no_progress = true;
            terminal = true;
            res.outcome = Outcome::no_progress;
        }

        if (!terminal && mode == Mode::Landing &&
            touchdown_met(vs_next, world.goal, world.goal_altitude, cfg.landing, settle_clock)) {
            terminal = true;
            res.outcome = Outcome::success;
        }

        const double reward = reward_step(events, cfg.rewards);
        res.episode_return += reward;

        // --- Transition capture (RL-mode tracked steps only).
        if (mode == Mode::RL && rl_acting) {
            Transition tr;
            tr.s = state_vec;
            tr.a.assign(rl.action.begin(), rl.action.end());
            tr.r = reward;
            tr.s_next = encode_state(world, vs_next, cfg.sensor);
            tr.done = terminal;  // step-limit truncation is not a terminal
            if (learn && learn->buffer) learn->buffer->push(tr);
            out.transitions.push_back(std::move(tr));
        }

        // --- Learner cadence: one step per environment step once warm.
        if (learn) {
            if (learn->env_steps) ++*learn->env_steps;
            learner_step(nets, cfg, *learn);
        }

        vs = vs_next;
        res.trajectory.push_back(
            {static_cast<double>(step + 1) * cfg.dt, vs.position, vs.z, mode});
    }

    res.steps = step;
    // Switch economy counts authority handoffs around the learner (Travel/
    // Landing <-> RL); the routine final-approach handoff is not a "switch".
    res.switch_count = 0;
    for (const auto& rec : arb.switch_log)
        if (rec.from == Mode::RL || rec.to == Mode::RL) ++res.switch_count;
    if (!terminal) res.outcome = Outcome::step_limit;
    return out;
}

TrainResult train(const World& world, const EnvConfig& cfg, const TrainParams& params,
                  TD3Nets& nets, PERBuffer& buffer, const EpisodeCallback& on_episode) {
    TrainResult res;
    LearnContext lc;
    lc.buffer = &buffer;
    lc.learn = true;
    lc.warmup = params.warmup;
    lc.beta_horizon = params.beta_horizon;
    lc.env_steps = &res.env_steps;
    lc.learn_steps = &res.learn_steps;
    lc.master_seed = params.seed;

    std::vector<double> returns, steps;
    for (std::size_t ep = 0; ep < params.episode_cap && res.success_count < params.success_target;
         ++ep) {
        EnvConfig ecfg = cfg;
        ecfg.explore.episode_index = static_cast<std::int64_t>(ep);
        RunEpisodeOutput out;
        try {
            out = run_episode(world, ecfg, nets, derive_seed(params.seed, kStreamEpisode, ep),
                              true, &lc);
        } catch (const std::runtime_error& e) {
            res.diverged = true;
            res.error = e.what();
            break;
        }
        EpisodeRow row;
        row.episode = ep;
        row.steps = out.result.steps;
        row.episode_return = out.result.episode_return;
        row.success = out.result.success();
        row.switches = out.result.switch_count;
        row.outcome = out.result.outcome;
        res.rows.push_back(row);
        returns.push_back(row.episode_return);
        steps.push_back(static_cast<double>(row.steps));
        if (row.success) ++res.success_count;
        res.total_switches += row.switches;
        if (on_episode) on_episode(row, out.result, nets, res.learn_steps);
    }
    res.ma_return = moving_average(returns, 15);
    res.ma_steps = moving_average(steps, 15);
    return res;
}

}  // namespace swiftnav
