#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swiftnav/nn.hpp"
#include "swiftnav/replay.hpp"

namespace swiftnav {

// Hyperparameters of the twin-delayed deterministic-policy-gradient learner.
struct TD3Config {
    double gamma = 0.99;        // discount
    double tau = 0.005;         // soft-update rate
    int policy_delay = 2;       // actor/target update period (learn steps)
    double smoothing_sigma = 0.2;  // target-policy smoothing noise, action units
    double smoothing_clip = 0.5;   // clip on that noise, action units
    double actor_lr = 3e-4;
    double critic_lr = 3e-4;
    std::size_t batch = 128;
    double action_bound = 3.0;  // actor outputs live in [-bound, bound]^dim
    double grad_clip = 10.0;    // global gradient-norm ceiling per net
    std::size_t hidden = 128;   // width of both hidden layers
};

// The six networks: live actor/critics plus their slowly tracking targets.
struct TD3Nets {
    DenseNet actor, critic1, critic2;
    DenseNet actor_t, critic1_t, critic2_t;
};

// Builds actor state->action (scaled-tanh output) and critics
// (state+action)->value (linear output), with targets as exact copies.
TD3Nets make_td3_nets(std::size_t state_dim, std::size_t action_dim, const TD3Config& cfg,
                      std::uint64_t seed);

// y_i = r_i + gamma * (1 - done_i) * min(Q'_1, Q'_2)(s'_i, a~_i) where
// a~ = clip(actor_target(s') + clip(N(0, sigma), -c, c), +-action_bound).
// The noise sequence is fully determined by rng_seed.
std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const TD3Nets& nets, const TD3Config& cfg,
                                    std::uint64_t rng_seed);

// One importance-weighted squared-error descent step on each critic toward y.
// Returns delta_i = y_i - Q_1(s_i, a_i) (evaluated before the step) for
// priority write-back. Throws std::runtime_error("divergence") if the loss or
// any refreshed parameter is non-finite.
std::vector<double> update_critics(TD3Nets& nets, const std::vector<const Transition*>& batch,
                                   const std::vector<double>& y,
                                   const std::vector<double>& is_weights, const TD3Config& cfg);

// Delayed policy improvement: when step_counter is a multiple of the policy
// delay, ascends mean Q_1(s, actor(s)) by one step and then soft-updates all
// three target nets with tau. Otherwise a no-op.
void update_actor_and_targets(TD3Nets& nets, const std::vector<const Transition*>& batch,
                              const TD3Config& cfg, std::uint64_t step_counter);

// Versioned binary checkpoint of all six nets plus the learn-step counter and
// the exploration episode index. Little-endian 64-bit parameter floats.
struct Checkpoint {
    TD3Nets nets;
    std::uint64_t step_counter = 0;
    std::uint64_t episode_index = 0;
};

void save_checkpoint(const std::string& path, const TD3Nets& nets, std::uint64_t step_counter,
                     std::uint64_t episode_index);

// Throws std::runtime_error naming the path on missing file, bad magic,
// unsupported version, or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace swiftnav
