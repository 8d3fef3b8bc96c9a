#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swiftnav {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;      // bad config/flags/CSV content
inline constexpr int kExitDivergence = 3;  // learner diverged (logs preserved)
inline constexpr int kExitIO = 4;          // missing/unreadable/unwritable files

struct TrainOptions {
    std::string config_path;
    std::string ablation_override;  // empty = keep the config's setting
    std::optional<std::uint64_t> seed_override;
};

struct EvalOptions {
    std::string checkpoint_path;
    std::string world_path;
    std::size_t episodes = 10;
    std::uint64_t seed = 7;
    std::string config_path;  // optional: full run config for module settings
    std::string out_dir;      // empty = "out"
};

struct ReplayOptions {
    std::string trajectory_path;
    std::string world_path;
    std::string out_path;  // empty = trajectory path with .svg extension
};

struct PlotOptions {
    std::string log_path;
    std::string out_path;
    std::string world_path;  // required when trajectory overlays are given
    std::vector<std::string> trajectory_paths;
};

// Each command prints its report/errors and returns an exit code; they never
// throw. Output locations honor the SWIFTNAV_OUT environment variable.
int cmd_train(const TrainOptions& opt);
int cmd_eval(const EvalOptions& opt);
int cmd_replay(const ReplayOptions& opt);
int cmd_plot(const PlotOptions& opt);

}  // namespace swiftnav
