#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swiftnav/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"swiftnav: deterministic planar UAV navigation — training, evaluation, "
                 "replay rendering, and learning-curve plots"};
    app.require_subcommand(1);

    swiftnav::TrainOptions train_opt;
    std::int64_t seed_flag = -1;
    auto* train = app.add_subcommand("train", "Train on a world until the success target");
    train->add_option("--config", train_opt.config_path, "Run configuration file")->required();
    train->add_option("--ablation", train_opt.ablation_override,
                      "Override: none|no_stability|no_checker|baseline_td3");
    train->add_option("--seed", seed_flag, "Override the config seed");

    swiftnav::EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "Greedy rollouts from a checkpoint");
    eval->add_option("--checkpoint", eval_opt.checkpoint_path, "Checkpoint file")->required();
    eval->add_option("--world", eval_opt.world_path, "World JSON file")->required();
    eval->add_option("--episodes", eval_opt.episodes, "Episode count")->required();
    eval->add_option("--seed", eval_opt.seed, "Evaluation seed (default 7)");
    eval->add_option("--config", eval_opt.config_path, "Optional run config for module settings");
    eval->add_option("--out", eval_opt.out_dir, "Output directory");

    swiftnav::ReplayOptions replay_opt;
    auto* replay = app.add_subcommand("replay", "Render a saved trajectory over its world");
    replay->add_option("--trajectory", replay_opt.trajectory_path, "Trajectory CSV")->required();
    replay->add_option("--world", replay_opt.world_path, "World JSON file")->required();
    replay->add_option("--out", replay_opt.out_path, "Output SVG path");

    swiftnav::PlotOptions plot_opt;
    auto* plot = app.add_subcommand("plot", "Learning curves (and optional path overlays)");
    plot->add_option("--log", plot_opt.log_path, "Episode log CSV")->required();
    plot->add_option("--out", plot_opt.out_path, "Output SVG path")->required();
    plot->add_option("--world", plot_opt.world_path, "World JSON (for overlays)");
    plot->add_option("--trajectory", plot_opt.trajectory_paths, "Trajectory CSV (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : swiftnav::kExitConfig;
    }

    if (*train) {
        if (seed_flag >= 0) train_opt.seed_override = static_cast<std::uint64_t>(seed_flag);
        return swiftnav::cmd_train(train_opt);
    }
    if (*eval) return swiftnav::cmd_eval(eval_opt);
    if (*replay) return swiftnav::cmd_replay(replay_opt);
    return swiftnav::cmd_plot(plot_opt);
}
