#include "swiftnav/arbiter.hpp"

namespace swiftnav {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Travel: return "Travel";
        case Mode::RL: return "RL";
        case Mode::Landing: return "Landing";
    }
    return "?";
}

ArbiterState make_arbiter_state(const ArbiterConfig& cfg) {
    ArbiterState st;
    st.steps_in_mode = cfg.dwell_min;
    return st;
}

Mode desired_mode(const ArbiterInputs& in, Mode current, const ArbiterConfig& cfg) {
    const bool landing_safe =
        in.s_fuzzy > cfg.s_land && (!in.d_min || *in.d_min > cfg.d_land);

    if (current == Mode::Landing) {
        if (!landing_safe) return Mode::RL;  // abort the descent
        if (in.dist_to_goal > cfg.delta_out) return Mode::Travel;
        return Mode::Landing;
    }
    if (in.dist_to_goal < cfg.delta_in && landing_safe) return Mode::Landing;
    if (current != Mode::RL && in.d_min && *in.d_min < cfg.d_thresh &&
        in.s_fuzzy < cfg.s_thresh)
        return Mode::RL;
    if (current == Mode::RL && in.s_fuzzy > cfg.s_exit &&
        (!in.d_min || *in.d_min > cfg.d_exit) && in.los_to_goal)
        return Mode::Travel;
    return current;
}

bool step_arbiter(ArbiterState& state, Mode desired, const ArbiterConfig& cfg) {
    state.step_index += 1;
    state.steps_in_mode += 1;

    if (desired == state.mode) {
        state.pending_mode.reset();
        state.pending_count = 0;
        return false;
    }

    bool commit;
    if (!cfg.stability_enabled) {
        commit = true;
    } else {
        if (state.pending_mode == desired) {
            state.pending_count += 1;
        } else {
            state.pending_mode = desired;
            state.pending_count = 1;
        }
        const bool abort = state.mode == Mode::Landing && desired == Mode::RL;
        commit = (abort || state.pending_count >= cfg.debounce_n) &&
                 state.steps_in_mode >= cfg.dwell_min;
    }
    if (!commit) return false;

    state.switch_log.push_back({state.step_index, state.mode, desired});
    state.mode = desired;
    state.steps_in_mode = 0;
    state.pending_mode.reset();
    state.pending_count = 0;
    if (desired == Mode::Travel) state.guidance_line.reset();
    return true;
}

std::size_t switch_count(const ArbiterState& state) { return state.switch_log.size(); }

}  // namespace swiftnav
