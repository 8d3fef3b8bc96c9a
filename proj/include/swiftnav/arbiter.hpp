#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swiftnav/control.hpp"

namespace swiftnav {

enum class Mode { Travel, RL, Landing };

const char* mode_name(Mode m);

struct ArbiterConfig {
    double d_thresh = 8.0;      // RL entry: obstacle distance below this [m]
    double s_thresh = 0.6;      // RL entry: safety score below this
    double d_exit = 10.0;       // RL exit: obstacle distance above this [m]
    double s_exit = 0.7;        // RL exit: safety score above this
    int debounce_n = 3;         // consecutive requests before a switch commits
    int dwell_min = 20;         // minimum steps between switches
    double los_clearance = 0.5; // clearance for the RL-exit line-of-sight guard [m]
    double delta_in = 2.0;      // landing entry distance [m]
    double delta_out = 3.0;     // landing exit distance [m], > delta_in
    double s_land = 0.7;        // landing safety-score floor
    double d_land = 2.5;        // landing obstacle-distance floor [m]
    bool stability_enabled = true;
};

struct SwitchRecord {
    std::int64_t step;
    Mode from;
    Mode to;
};

struct ArbiterState {
    Mode mode = Mode::Travel;
    std::int64_t step_index = 0;  // total step_arbiter calls
    std::int64_t steps_in_mode = 0;
    std::optional<Mode> pending_mode;
    int pending_count = 0;
    std::vector<SwitchRecord> switch_log;
    std::optional<GuidanceLine> guidance_line;  // cleared on Travel entry
};

// Fresh state starts in Travel with the dwell requirement already satisfied,
// so the first switch is gated by debounce only.
ArbiterState make_arbiter_state(const ArbiterConfig& cfg);

struct ArbiterInputs {
    std::optional<double> d_min;  // nearest obstacle surface distance; absent = clear
    double s_fuzzy = 1.0;
    double dist_to_goal = 0.0;
    bool los_to_goal = false;
};

// Transition request for this step. Priority: Landing > RL entry > RL exit.
// While in Landing: a violated landing-safety condition requests RL (abort);
// drifting beyond delta_out requests Travel; otherwise stay.
Mode desired_mode(const ArbiterInputs& in, Mode current, const ArbiterConfig& cfg);

// Advances the FSM one step toward `desired`. With stability enabled, a switch
// commits only after debounce_n consecutive requests and once steps_in_mode
// reached dwell_min; a Landing->RL request (abort) skips the debounce but still
// honors the dwell spacing. Returns true when a switch happened this step.
bool step_arbiter(ArbiterState& state, Mode desired, const ArbiterConfig& cfg);

std::size_t switch_count(const ArbiterState& state);

}  // namespace swiftnav
