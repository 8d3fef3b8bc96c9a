#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "swiftnav/env.hpp"

namespace swiftnav {

// Bad key/value/structure in a run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/unwritable file (CLI exit code 4).
struct IOError : std::runtime_error {
    explicit IOError(const std::string& what) : std::runtime_error(what) {}
};

struct PerParams {
    std::size_t capacity = 50000;
    double alpha = 0.6;
    double beta_start = 0.4;
    double beta_end = 1.0;
    double priority_floor = 1e-3;
};

// Everything a training/evaluation run needs, loadable from a plain-text
// `key = value` file with [section] headers. Every field has a default; the
// parser rejects unknown sections/keys by name.
struct RunConfig {
    std::string world_path = "worlds/traj1.json";
    std::string rewards_preset = "traj1";  // traj1 | traj2
    std::string out_dir = "out";
    std::string ablation = "none";  // none | no_stability | no_checker | baseline_td3
    std::uint64_t seed = 7;
    std::size_t episode_cap = 2000;
    std::size_t success_target = 100;
    std::size_t checkpoint_every = 25;  // episodes between checkpoint snapshots
    std::size_t warmup = 1000;          // stored transitions before learning
    std::uint64_t beta_horizon = 200000;
    PerParams per;
    EnvConfig env;  // env.rewards follows rewards_preset
};

// Parses `text` (e.g. file contents). Throws ConfigError naming the offending
// line/section/key on any problem, including validation failures.
RunConfig parse_config_text(const std::string& text);

// Loads and parses a config file. Throws IOError when unreadable.
RunConfig load_config(const std::string& path);

// Emits the full configuration, defaults materialized, grouped by section.
// parse_config_text(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

// Applies cfg.ablation to the embedded module configs:
//   no_stability -> arbiter stability machinery off
//   no_checker   -> trajectory checker bypassed
//   baseline_td3 -> planner always in charge, checker and stability off
void apply_ablation(RunConfig& cfg);

}  // namespace swiftnav
