#include "swiftnav/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace swiftnav {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

double parse_double(const std::string& v) {
    const std::string t = trim(v);
    if (t.empty()) throw std::invalid_argument("empty value");
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw std::invalid_argument("not a number");
    return x;
}

std::int64_t parse_int(const std::string& v) {
    const std::string t = trim(v);
    if (t.empty()) throw std::invalid_argument("empty value");
    char* end = nullptr;
    const long long x = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) throw std::invalid_argument("not an integer");
    return x;
}

std::uint64_t parse_u64(const std::string& v) {
    const std::int64_t x = parse_int(v);
    if (x < 0) throw std::invalid_argument("must be non-negative");
    return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw std::invalid_argument("expected true/false");
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename F>
Field num_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) { acc(c) = parse_double(v); },
            [acc](const RunConfig& c) { return format_double(acc(const_cast<RunConfig&>(c))); }};
}

template <typename F>
Field int_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) {
                acc(c) = static_cast<int>(parse_int(v));
            },
            [acc](const RunConfig& c) {
                return std::to_string(acc(const_cast<RunConfig&>(c)));
            }};
}

template <typename F>
Field size_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) {
                acc(c) = static_cast<std::size_t>(parse_u64(v));
            },
            [acc](const RunConfig& c) {
                return std::to_string(acc(const_cast<RunConfig&>(c)));
            }};
}

template <typename F>
Field u64_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) { acc(c) = parse_u64(v); },
            [acc](const RunConfig& c) {
                return std::to_string(acc(const_cast<RunConfig&>(c)));
            }};
}

template <typename F>
Field bool_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) { acc(c) = parse_bool(v); },
            [acc](const RunConfig& c) {
                return acc(const_cast<RunConfig&>(c)) ? "true" : "false";
            }};
}

template <typename F>
Field str_field(std::string section, std::string key, F acc) {
    return {std::move(section), std::move(key),
            [acc](RunConfig& c, const std::string& v) { acc(c) = trim(v); },
            [acc](const RunConfig& c) { return acc(const_cast<RunConfig&>(c)); }};
}

const std::vector<Field>& field_table() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        // [run]
        f.push_back(str_field("run", "world", [](RunConfig& c) -> std::string& { return c.world_path; }));
        f.push_back(str_field("run", "rewards", [](RunConfig& c) -> std::string& { return c.rewards_preset; }));
        f.push_back(str_field("run", "out_dir", [](RunConfig& c) -> std::string& { return c.out_dir; }));
        f.push_back(str_field("run", "ablation", [](RunConfig& c) -> std::string& { return c.ablation; }));
        f.push_back(u64_field("run", "seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
        f.push_back(size_field("run", "episode_cap", [](RunConfig& c) -> std::size_t& { return c.episode_cap; }));
        f.push_back(size_field("run", "success_target", [](RunConfig& c) -> std::size_t& { return c.success_target; }));
        f.push_back(size_field("run", "checkpoint_every", [](RunConfig& c) -> std::size_t& { return c.checkpoint_every; }));
        f.push_back(size_field("run", "warmup", [](RunConfig& c) -> std::size_t& { return c.warmup; }));
        f.push_back(u64_field("run", "beta_horizon", [](RunConfig& c) -> std::uint64_t& { return c.beta_horizon; }));
        f.push_back(size_field("run", "step_limit", [](RunConfig& c) -> std::size_t& { return c.env.step_limit; }));
        f.push_back(size_field("run", "polyline_step_cap", [](RunConfig& c) -> std::size_t& { return c.env.polyline_step_cap; }));
        f.push_back(num_field("run", "dt", [](RunConfig& c) -> double& { return c.env.dt; }));
        f.push_back(num_field("run", "safety_radius", [](RunConfig& c) -> double& { return c.env.safety_radius; }));
        f.push_back(num_field("run", "start_altitude", [](RunConfig& c) -> double& { return c.env.start_altitude; }));
        // [sensor]
        f.push_back(int_field("sensor", "ray_count", [](RunConfig& c) -> int& { return c.env.sensor.ray_count; }));
        f.push_back(num_field("sensor", "max_range", [](RunConfig& c) -> double& { return c.env.sensor.max_range; }));
        // [limits]
        f.push_back(num_field("limits", "v_max", [](RunConfig& c) -> double& { return c.env.limits.v_max; }));
        f.push_back(num_field("limits", "omega_max", [](RunConfig& c) -> double& { return c.env.limits.omega_max; }));
        f.push_back(num_field("limits", "vz_max", [](RunConfig& c) -> double& { return c.env.limits.vz_max; }));
        // [gains]
        f.push_back(num_field("gains", "k_s", [](RunConfig& c) -> double& { return c.env.gains.k_s; }));
        f.push_back(num_field("gains", "k_psi", [](RunConfig& c) -> double& { return c.env.gains.k_psi; }));
        f.push_back(num_field("gains", "k_y", [](RunConfig& c) -> double& { return c.env.gains.k_y; }));
        f.push_back(num_field("gains", "eps_speed", [](RunConfig& c) -> double& { return c.env.gains.eps_speed; }));
        f.push_back(num_field("gains", "v_cruise", [](RunConfig& c) -> double& { return c.env.gains.v_cruise; }));
        f.push_back(bool_field("gains", "use_stanley", [](RunConfig& c) -> bool& { return c.env.gains.use_stanley; }));
        // [landing]
        f.push_back(num_field("landing", "delta_in", [](RunConfig& c) -> double& { return c.env.landing.delta_in; }));
        f.push_back(num_field("landing", "delta_out", [](RunConfig& c) -> double& { return c.env.landing.delta_out; }));
        f.push_back(num_field("landing", "s_land", [](RunConfig& c) -> double& { return c.env.landing.s_land; }));
        f.push_back(num_field("landing", "d_land", [](RunConfig& c) -> double& { return c.env.landing.d_land; }));
        f.push_back(num_field("landing", "k_v", [](RunConfig& c) -> double& { return c.env.landing.k_v; }));
        f.push_back(num_field("landing", "v_min", [](RunConfig& c) -> double& { return c.env.landing.v_min; }));
        f.push_back(num_field("landing", "v_max", [](RunConfig& c) -> double& { return c.env.landing.v_max; }));
        f.push_back(num_field("landing", "k_perp", [](RunConfig& c) -> double& { return c.env.landing.k_perp; }));
        f.push_back(num_field("landing", "k_z", [](RunConfig& c) -> double& { return c.env.landing.k_z; }));
        f.push_back(num_field("landing", "vz_max", [](RunConfig& c) -> double& { return c.env.landing.vz_max; }));
        f.push_back(num_field("landing", "r_desc", [](RunConfig& c) -> double& { return c.env.landing.r_desc; }));
        f.push_back(num_field("landing", "psi_th", [](RunConfig& c) -> double& { return c.env.landing.psi_th; }));
        f.push_back(num_field("landing", "r_tol", [](RunConfig& c) -> double& { return c.env.landing.r_tol; }));
        f.push_back(num_field("landing", "h_tol", [](RunConfig& c) -> double& { return c.env.landing.h_tol; }));
        f.push_back(num_field("landing", "v_tol", [](RunConfig& c) -> double& { return c.env.landing.v_tol; }));
        f.push_back(num_field("landing", "psi_tol", [](RunConfig& c) -> double& { return c.env.landing.psi_tol; }));
        f.push_back(num_field("landing", "t_settle", [](RunConfig& c) -> double& { return c.env.landing.t_settle; }));
        f.push_back(num_field("landing", "k_yaw", [](RunConfig& c) -> double& { return c.env.landing.k_yaw; }));
        // [arbiter]
        f.push_back(num_field("arbiter", "d_thresh", [](RunConfig& c) -> double& { return c.env.arbiter.d_thresh; }));
        f.push_back(num_field("arbiter", "s_thresh", [](RunConfig& c) -> double& { return c.env.arbiter.s_thresh; }));
        f.push_back(num_field("arbiter", "d_exit", [](RunConfig& c) -> double& { return c.env.arbiter.d_exit; }));
        f.push_back(num_field("arbiter", "s_exit", [](RunConfig& c) -> double& { return c.env.arbiter.s_exit; }));
        f.push_back(int_field("arbiter", "debounce_n", [](RunConfig& c) -> int& { return c.env.arbiter.debounce_n; }));
        f.push_back(int_field("arbiter", "dwell_min", [](RunConfig& c) -> int& { return c.env.arbiter.dwell_min; }));
        f.push_back(num_field("arbiter", "los_clearance", [](RunConfig& c) -> double& { return c.env.arbiter.los_clearance; }));
        f.push_back(num_field("arbiter", "delta_in", [](RunConfig& c) -> double& { return c.env.arbiter.delta_in; }));
        f.push_back(num_field("arbiter", "delta_out", [](RunConfig& c) -> double& { return c.env.arbiter.delta_out; }));
        f.push_back(num_field("arbiter", "s_land", [](RunConfig& c) -> double& { return c.env.arbiter.s_land; }));
        f.push_back(num_field("arbiter", "d_land", [](RunConfig& c) -> double& { return c.env.arbiter.d_land; }));
        f.push_back(bool_field("arbiter", "stability_enabled", [](RunConfig& c) -> bool& { return c.env.arbiter.stability_enabled; }));
        // [checker]
        f.push_back(num_field("checker", "clearance_margin", [](RunConfig& c) -> double& { return c.env.checker.clearance_margin; }));
        f.push_back(num_field("checker", "sample_step", [](RunConfig& c) -> double& { return c.env.checker.sample_step; }));
        f.push_back(num_field("checker", "w_goal", [](RunConfig& c) -> double& { return c.env.checker.w_goal; }));
        f.push_back(num_field("checker", "w_clear", [](RunConfig& c) -> double& { return c.env.checker.w_clear; }));
        f.push_back(num_field("checker", "w_curv", [](RunConfig& c) -> double& { return c.env.checker.w_curv; }));
        f.push_back(int_field("checker", "max_modify_iters", [](RunConfig& c) -> int& { return c.env.checker.max_modify_iters; }));
        f.push_back(num_field("checker", "clear_cap", [](RunConfig& c) -> double& { return c.env.checker.clear_cap; }));
        f.push_back(bool_field("checker", "enabled", [](RunConfig& c) -> bool& { return c.env.checker.enabled; }));
        f.push_back(num_field("checker", "free_sector_deg", [](RunConfig& c) -> double& { return c.env.checker.free_sector_deg; }));
        f.push_back(num_field("checker", "free_range", [](RunConfig& c) -> double& { return c.env.checker.free_range; }));
        // [explore]
        f.push_back(num_field("explore", "eps0", [](RunConfig& c) -> double& { return c.env.explore.eps0; }));
        f.push_back(num_field("explore", "lambda", [](RunConfig& c) -> double& { return c.env.explore.lambda; }));
        f.push_back(num_field("explore", "eps_min", [](RunConfig& c) -> double& { return c.env.explore.eps_min; }));
        f.push_back(num_field("explore", "rho", [](RunConfig& c) -> double& { return c.env.explore.rho; }));
        // [td3]
        f.push_back(num_field("td3", "gamma", [](RunConfig& c) -> double& { return c.env.td3.gamma; }));
        f.push_back(num_field("td3", "tau", [](RunConfig& c) -> double& { return c.env.td3.tau; }));
        f.push_back(int_field("td3", "policy_delay", [](RunConfig& c) -> int& { return c.env.td3.policy_delay; }));
        f.push_back(num_field("td3", "smoothing_sigma", [](RunConfig& c) -> double& { return c.env.td3.smoothing_sigma; }));
        f.push_back(num_field("td3", "smoothing_clip", [](RunConfig& c) -> double& { return c.env.td3.smoothing_clip; }));
        f.push_back(num_field("td3", "actor_lr", [](RunConfig& c) -> double& { return c.env.td3.actor_lr; }));
        f.push_back(num_field("td3", "critic_lr", [](RunConfig& c) -> double& { return c.env.td3.critic_lr; }));
        f.push_back(size_field("td3", "batch", [](RunConfig& c) -> std::size_t& { return c.env.td3.batch; }));
        f.push_back(num_field("td3", "action_bound", [](RunConfig& c) -> double& { return c.env.td3.action_bound; }));
        f.push_back(num_field("td3", "grad_clip", [](RunConfig& c) -> double& { return c.env.td3.grad_clip; }));
        f.push_back(size_field("td3", "hidden", [](RunConfig& c) -> std::size_t& { return c.env.td3.hidden; }));
        // [per]
        f.push_back(size_field("per", "capacity", [](RunConfig& c) -> std::size_t& { return c.per.capacity; }));
        f.push_back(num_field("per", "alpha", [](RunConfig& c) -> double& { return c.per.alpha; }));
        f.push_back(num_field("per", "beta_start", [](RunConfig& c) -> double& { return c.per.beta_start; }));
        f.push_back(num_field("per", "beta_end", [](RunConfig& c) -> double& { return c.per.beta_end; }));
        f.push_back(num_field("per", "priority_floor", [](RunConfig& c) -> double& { return c.per.priority_floor; }));
        return f;
    }();
    return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : field_table())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

bool known_section(const std::string& section) {
    for (const auto& f : field_table())
        if (f.section == section) return true;
    return false;
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw ConfigError("invalid config: " + key + " " + why);
    };
    if (c.rewards_preset != "traj1" && c.rewards_preset != "traj2")
        fail("run.rewards", "must be traj1 or traj2");
    if (c.ablation != "none" && c.ablation != "no_stability" && c.ablation != "no_checker" &&
        c.ablation != "baseline_td3")
        fail("run.ablation", "must be none, no_stability, no_checker, or baseline_td3");
    if (c.success_target < 1) fail("run.success_target", "must be >= 1");
    if (c.checkpoint_every < 1) fail("run.checkpoint_every", "must be >= 1");
    if (c.env.step_limit < 1) fail("run.step_limit", "must be >= 1");
    if (!(c.env.dt > 0.0)) fail("run.dt", "must be > 0");
    if (!(c.env.safety_radius >= 0.0)) fail("run.safety_radius", "must be >= 0");
    if (c.env.sensor.ray_count < 1) fail("sensor.ray_count", "must be >= 1");
    if (!(c.env.sensor.max_range > 0.0)) fail("sensor.max_range", "must be > 0");
    if (!(c.env.limits.v_max > 0.0)) fail("limits.v_max", "must be > 0");
    if (!(c.env.limits.omega_max > 0.0)) fail("limits.omega_max", "must be > 0");
    if (!(c.env.arbiter.delta_out > c.env.arbiter.delta_in))
        fail("arbiter.delta_out", "must exceed arbiter.delta_in");
    if (!(c.env.landing.delta_out > c.env.landing.delta_in))
        fail("landing.delta_out", "must exceed landing.delta_in");
    if (c.env.arbiter.debounce_n < 1) fail("arbiter.debounce_n", "must be >= 1");
    if (c.env.arbiter.dwell_min < 0) fail("arbiter.dwell_min", "must be >= 0");
    if (c.env.td3.batch < 1) fail("td3.batch", "must be >= 1");
    if (c.env.td3.hidden < 1) fail("td3.hidden", "must be >= 1");
    if (c.env.td3.policy_delay < 1) fail("td3.policy_delay", "must be >= 1");
    if (c.per.capacity < c.env.td3.batch) fail("per.capacity", "must be >= td3.batch");
    if (!(c.per.alpha >= 0.0)) fail("per.alpha", "must be >= 0");
    if (!(c.per.priority_floor > 0.0)) fail("per.priority_floor", "must be > 0");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config parse error at line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section))
                throw ConfigError("unknown section [" + section + "] at line " +
                                  std::to_string(lineno));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config parse error at line " + std::to_string(lineno) +
                              ": key '" + key + "' before any [section]");
        const Field* field = find_field(section, key);
        if (!field)
            throw ConfigError("unknown key " + section + "." + key + " at line " +
                              std::to_string(lineno));
        try {
            field->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("invalid value for " + section + "." + key + " at line " +
                              std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(cfg);
    cfg.env.rewards = cfg.rewards_preset == "traj2" ? traj2_rewards() : traj1_rewards();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("config not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& f : field_table()) {
        if (f.section != section) {
            if (!section.empty()) out << "\n";
            section = f.section;
            out << "[" << section << "]\n";
        }
        out << f.key << " = " << f.get(cfg) << "\n";
    }
    return out.str();
}

void apply_ablation(RunConfig& cfg) {
    if (cfg.ablation == "no_stability") {
        cfg.env.arbiter.stability_enabled = false;
    } else if (cfg.ablation == "no_checker") {
        cfg.env.checker.enabled = false;
    } else if (cfg.ablation == "baseline_td3") {
        cfg.env.rl_always_on = true;
        cfg.env.checker.enabled = false;
        cfg.env.arbiter.stability_enabled = false;
    }
}

}  // namespace swiftnav
