#include "swiftnav/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "swiftnav/config.hpp"
#include "swiftnav/logio.hpp"
#include "swiftnav/rng.hpp"
#include "swiftnav/svg.hpp"

namespace swiftnav {

namespace {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::string& configured) {
    if (const char* env = std::getenv("SWIFTNAV_OUT"); env && *env) return env;
    return configured.empty() ? std::string("out") : configured;
}

World load_world_checked(const std::string& path, double safety_radius) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw IOError("world not found: " + path);
    try {
        return load_world(path, safety_radius);
    } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("world file invalid: ") + e.what());
    }
}

// Shared try/catch -> exit code mapping so every command reports identically.
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IOError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIO;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

std::string episode_tag(std::size_t episode) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%05zu", episode);
    return buf;
}

double path_length(const std::vector<TrajectoryPoint>& pts) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += distance(pts[i].position, pts[i + 1].position);
    return total;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

}  // namespace

int cmd_train(const TrainOptions& opt) {
    return guarded([&]() -> int {
        RunConfig cfg = load_config(opt.config_path);
        if (!opt.ablation_override.empty()) {
            cfg.ablation = opt.ablation_override;
            if (cfg.ablation != "none" && cfg.ablation != "no_stability" &&
                cfg.ablation != "no_checker" && cfg.ablation != "baseline_td3")
                throw ConfigError("unknown ablation '" + cfg.ablation +
                                  "' (expected none, no_stability, no_checker, baseline_td3)");
        }
        if (opt.seed_override) cfg.seed = *opt.seed_override;
        apply_ablation(cfg);

        const std::string out_dir = resolve_out_dir(cfg.out_dir);
        const World world = load_world_checked(cfg.world_path, cfg.env.safety_radius);

        TD3Nets nets = make_td3_nets(kStateDim, kActionDim, cfg.env.td3, cfg.seed);
        PERBuffer buffer(cfg.per.capacity, cfg.per.alpha, cfg.per.beta_start, cfg.per.beta_end,
                         cfg.per.priority_floor);
        TrainParams params;
        params.seed = cfg.seed;
        params.episode_cap = cfg.episode_cap;
        params.success_target = cfg.success_target;
        params.warmup = cfg.warmup;
        params.beta_horizon = cfg.beta_horizon;

        const auto on_episode = [&](const EpisodeRow& row, const EpisodeResult& result,
                                    const TD3Nets& snapshot, std::uint64_t learn_steps) {
            if ((row.episode + 1) % cfg.checkpoint_every == 0) {
                save_checkpoint(out_dir + "/ckpt_ep" + episode_tag(row.episode) + ".bin",
                                snapshot, learn_steps, row.episode);
            }
            if (row.success)
                write_trajectory(out_dir + "/traj_ep" + episode_tag(row.episode) + ".csv",
                                 result.trajectory);
        };

        const TrainResult res = train(world, cfg.env, params, nets, buffer, on_episode);

        write_episode_log(out_dir + "/log.csv", res.rows);
        save_checkpoint(out_dir + "/ckpt_final.bin", nets, res.learn_steps,
                        res.rows.empty() ? 0 : res.rows.back().episode);
        write_text_file(out_dir + "/config_resolved.cfg", serialize_config(cfg));

        std::ostringstream line;
        line << "train: episodes=" << res.rows.size() << " successes=" << res.success_count
             << " env_steps=" << res.env_steps << " learn_steps=" << res.learn_steps
             << " total_switches=" << res.total_switches;
        if (!res.ma_return.empty())
            line << " final_ma_return=" << fmt("%.3f", res.ma_return.back())
                 << " final_ma_steps=" << fmt("%.1f", res.ma_steps.back());
        line << " status="
             << (res.diverged ? "diverged"
                              : (res.success_count >= params.success_target ? "converged"
                                                                            : "capped"));
        std::cout << line.str() << "\n";
        std::cout << "train: wrote " << out_dir << "/log.csv\n";
        if (res.diverged) {
            std::cerr << "error: training diverged: " << res.error << "\n";
            return kExitDivergence;
        }
        return kExitOk;
    });
}

int cmd_eval(const EvalOptions& opt) {
    return guarded([&]() -> int {
        RunConfig cfg;
        if (!opt.config_path.empty()) cfg = load_config(opt.config_path);

        Checkpoint ck;
        try {
            ck = load_checkpoint(opt.checkpoint_path);
        } catch (const std::runtime_error& e) {
            throw IOError(e.what());
        }
        if (ck.nets.actor.input_dim() != kStateDim ||
            ck.nets.actor.output_dim() != kActionDim)
            throw ConfigError("checkpoint network shape does not match the 72-state/"
                              "10-action interface");

        const World world = load_world_checked(opt.world_path, cfg.env.safety_radius);
        const std::string out_dir =
            resolve_out_dir(opt.out_dir.empty() ? cfg.out_dir : opt.out_dir);

        std::size_t successes = 0;
        double total_steps = 0.0, total_return = 0.0, total_switches = 0.0;
        for (std::size_t ep = 0; ep < opt.episodes; ++ep) {
            const auto out = run_episode(world, cfg.env, ck.nets,
                                         derive_seed(opt.seed, 1, ep), false, nullptr);
            successes += out.result.success() ? 1 : 0;
            total_steps += static_cast<double>(out.result.steps);
            total_return += out.result.episode_return;
            total_switches += static_cast<double>(out.result.switch_count);
            write_trajectory(out_dir + "/eval_traj_ep" + episode_tag(ep) + ".csv",
                             out.result.trajectory);
        }

        std::ostringstream report;
        report << "eval: episodes=" << opt.episodes;
        if (opt.episodes > 0) {
            const double n = static_cast<double>(opt.episodes);
            report << " success_rate=" << fmt("%.3f", double(successes) / n)
                   << " mean_steps=" << fmt("%.2f", total_steps / n)
                   << " mean_return=" << fmt("%.3f", total_return / n)
                   << " mean_switches=" << fmt("%.3f", total_switches / n);
        }
        std::cout << report.str() << "\n";
        write_text_file(out_dir + "/eval_report.txt", report.str() + "\n");
        return kExitOk;
    });
}

int cmd_replay(const ReplayOptions& opt) {
    return guarded([&]() -> int {
        const auto points = read_trajectory(opt.trajectory_path);
        const World world = load_world_checked(opt.world_path, 0.5);

        std::string out_path = opt.out_path;
        if (out_path.empty()) {
            fs::path p(opt.trajectory_path);
            p.replace_extension(".svg");
            if (const char* env = std::getenv("SWIFTNAV_OUT"); env && *env)
                p = fs::path(env) / p.filename();
            out_path = p.string();
        }
        write_text_file(out_path, svg_trajectory_map(world, {points}));

        const double duration = points.empty() ? 0.0 : points.back().t;
        std::cout << "replay: wrote " << out_path << " (" << points.size() << " samples, "
                  << fmt("%.1f", duration) << " s, " << fmt("%.2f", path_length(points))
                  << " m)\n";
        return kExitOk;
    });
}

int cmd_plot(const PlotOptions& opt) {
    return guarded([&]() -> int {
        const auto rows = read_episode_log(opt.log_path);
        std::string svg;
        if (!opt.trajectory_paths.empty()) {
            if (opt.world_path.empty())
                throw ConfigError("plot: --world is required when --trajectory is given");
            const World world = load_world_checked(opt.world_path, 0.5);
            std::vector<std::vector<TrajectoryPoint>> paths;
            for (const auto& tp : opt.trajectory_paths) paths.push_back(read_trajectory(tp));
            svg = svg_combined(rows, world, paths);
        } else {
            svg = svg_learning_curves(rows);
        }
        write_text_file(opt.out_path, svg);
        std::cout << "plot: wrote " << opt.out_path << " (" << rows.size() << " episodes)\n";
        return kExitOk;
    });
}

}  // namespace swiftnav
