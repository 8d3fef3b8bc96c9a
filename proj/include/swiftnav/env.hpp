#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swiftnav/arbiter.hpp"
#include "swiftnav/control.hpp"
#include "swiftnav/planner.hpp"
#include "swiftnav/replay.hpp"
#include "swiftnav/td3.hpp"
#include "swiftnav/world.hpp"

namespace swiftnav {

inline constexpr std::size_t kStateDim = 72;
inline constexpr std::size_t kActionDim = 10;
inline constexpr std::size_t kObstacleSlots = 20;

// 72-entry state: 12 intrinsics (x, y, z, roll, pitch, yaw, roll-rate,
// pitch-rate, yaw-rate, vx, vy, vz; the planar model keeps roll/pitch terms
// zero) followed by the 20 nearest obstacles within sensor range as
// world-frame (dx, dy, center distance) triples sorted by ascending distance,
// padded with (0, 0, max_range).
std::vector<double> encode_state(const World& world, const VehicleState& state,
                                 const SensorConfig& sensor);

enum class CollisionClass { none, recoverable, terminal };

// Events observed during one environment step, consumed by reward_step.
struct StepEvents {
    double progress = 0.0;        // goal-distance reduction d_prev - d_curr [m]
    std::optional<double> d_min;  // nearest obstacle surface distance [m]
    CollisionClass collision = CollisionClass::none;
    bool out_of_bounds = false;
    bool no_progress = false;
    bool line_departure = false;  // cross-track excursion rising edge (Travel)
    bool goal = false;            // goal radius entered (first time)
    bool safe_switch = false;     // one-shot RL->Travel switch
    bool bypass = false;          // RL->Travel with a contact-free RL segment
    bool endpoint_novel = false;  // completed segment endpoint far from recent ones
    bool endpoint_revisit = false;
    bool zone_exit = false;       // d_min rose above the proximity radius
};

// Signed per-event reward contributions; a zero entry disables its row.
struct RewardTable {
    double step_cost = 0.0;
    double progress_gain = 0.0;
    double goal_bonus = 0.0;
    double goal_radius = 2.0;            // [m]
    bool contact_terminal = true;        // obstacle contact ends the episode
    double crash_terminal = 0.0;         // on terminal contact
    double crash_recoverable = 0.0;      // on non-terminal contact (rising edge)
    double oob_penalty = 0.0;            // leaving the bounds (always terminal)
    bool no_progress_enabled = false;
    double no_progress_penalty = 0.0;
    int no_progress_window = 50;         // steps
    double no_progress_dist = 0.5;       // [m]
    double line_departure_penalty = 0.0;
    double line_departure_threshold = 3.0;  // [m]
    double proximity_gain = 0.0;         // subtracts gain*(radius - d_min) inside
    double proximity_radius = 5.0;       // [m]
    double switch_bonus = 0.0;           // one-shot RL->Travel
    double zone_exit_bonus = 0.0;
    double novelty_bonus = 0.0;
    double revisit_penalty = 0.0;        // negative
    double revisit_radius = 1.0;         // [m]
    int revisit_history = 10;            // endpoints remembered
    double bypass_bonus = 0.0;
};

// Scenario presets.
RewardTable traj1_rewards();
RewardTable traj2_rewards();

// Sum of the table rows whose events hold.
double reward_step(const StepEvents& events, const RewardTable& table);

enum class Outcome { success, crash, out_of_bounds, no_progress, step_limit };
const char* outcome_name(Outcome o);

struct TrajectoryPoint {
    double t = 0.0;
    Vec2 position{};
    double z = 0.0;
    Mode mode = Mode::Travel;
};

struct EpisodeResult {
    Outcome outcome = Outcome::step_limit;
    std::size_t steps = 0;
    double episode_return = 0.0;
    std::size_t switch_count = 0;
    std::vector<TrajectoryPoint> trajectory;  // pose per step, initial pose first
    bool success() const { return outcome == Outcome::success; }
};

// Everything an episode needs beyond the world itself.
struct EnvConfig {
    SensorConfig sensor{};
    KinematicLimits limits{};
    TravelGains gains{};
    LandingConfig landing{};
    ArbiterConfig arbiter{};
    CheckerConfig checker{};
    ExplorationSchedule explore{};
    RewardTable rewards = traj1_rewards();
    TD3Config td3{};
    double dt = 0.1;                   // [s]
    double safety_radius = 0.5;        // collision ring around obstacles [m]
    double start_altitude = 1.0;       // cruise altitude at episode start [m]
    std::size_t step_limit = 2000;
    std::size_t polyline_step_cap = 400;  // force a fresh proposal after this
    bool rl_always_on = false;  // comparator: planner drives every step, goal ends episode
};

// Learning hooks for run_episode; default-constructed means pure evaluation.
struct LearnContext {
    PERBuffer* buffer = nullptr;          // RL transitions are pushed when set
    bool learn = false;                   // run learner steps during the episode
    std::size_t warmup = 1000;            // buffer size before learning starts
    std::uint64_t beta_horizon = 200000;  // env steps to anneal beta over
    std::uint64_t* env_steps = nullptr;   // shared counters owned by the train loop
    std::uint64_t* learn_steps = nullptr;
    std::uint64_t master_seed = 0;        // stream root for sampling/noise seeds
};

struct RunEpisodeOutput {
    EpisodeResult result;
    std::vector<Transition> transitions;  // one per tracked RL-mode step, in order
};

// One episode: sense -> fuzzy score -> arbitrate -> mode control (Travel line
// following / RL waypoint propose-explore-check-track / Landing approach) ->
// integrate -> reward. exploring=false runs the deterministic policy.
// Learner errors (divergence) propagate to the caller.
RunEpisodeOutput run_episode(const World& world, const EnvConfig& cfg, TD3Nets& nets,
                             std::uint64_t seed, bool exploring, LearnContext* learn);

struct EpisodeRow {
    std::size_t episode = 0;
    std::size_t steps = 0;
    double episode_return = 0.0;
    bool success = false;
    std::size_t switches = 0;
    Outcome outcome = Outcome::step_limit;
};

struct TrainParams {
    std::uint64_t seed = 7;
    std::size_t episode_cap = 2000;
    std::size_t success_target = 100;
    std::size_t warmup = 1000;            // stored transitions before learning
    std::uint64_t beta_horizon = 200000;  // env steps for the PER beta schedule
};

struct TrainResult {
    std::vector<EpisodeRow> rows;
    std::vector<double> ma_return;  // 15-episode trailing means, per episode
    std::vector<double> ma_steps;
    std::size_t success_count = 0;
    std::uint64_t env_steps = 0;
    std::uint64_t learn_steps = 0;
    std::size_t total_switches = 0;
    bool diverged = false;   // learner aborted; rows hold the completed episodes
    std::string error;
};

// Observer for finished episodes (checkpointing / trajectory snapshots).
using EpisodeCallback = std::function<void(const EpisodeRow&, const EpisodeResult&,
                                           const TD3Nets&, std::uint64_t learn_steps)>;

// Episode loop with per-episode exploration decay and learner steps per
// environment step after warm-up; stops at success_target successes or the
// episode cap. Divergence aborts with the partial log preserved.
TrainResult train(const World& world, const EnvConfig& cfg, const TrainParams& params,
                  TD3Nets& nets, PERBuffer& buffer, const EpisodeCallback& on_episode = {});

// Trailing mean over min(window, index + 1) entries.
std::vector<double> moving_average(const std::vector<double>& series, std::size_t window = 15);

}  // namespace swiftnav
