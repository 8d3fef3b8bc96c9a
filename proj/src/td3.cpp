#include "swiftnav/td3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "swiftnav/rng.hpp"

namespace swiftnav {

namespace {

constexpr char kMagic[8] = {'S', 'W', 'N', 'V', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

std::vector<double> critic_input(const std::vector<double>& s, const std::vector<double>& a) {
    std::vector<double> x;
    x.reserve(s.size() + a.size());
    x.insert(x.end(), s.begin(), s.end());
    x.insert(x.end(), a.begin(), a.end());
    return x;
}

}  // namespace

TD3Nets make_td3_nets(std::size_t state_dim, std::size_t action_dim, const TD3Config& cfg,
                      std::uint64_t seed) {
    TD3Nets nets;
    const std::vector<std::size_t> actor_dims = {state_dim, cfg.hidden, cfg.hidden, action_dim};
    const std::vector<std::size_t> critic_dims = {state_dim + action_dim, cfg.hidden, cfg.hidden, 1};
    nets.actor = make_net(actor_dims, OutputActivation::bounded, cfg.action_bound,
                          derive_seed(seed, 101));
    nets.critic1 = make_net(critic_dims, OutputActivation::linear, 1.0, derive_seed(seed, 102));
    nets.critic2 = make_net(critic_dims, OutputActivation::linear, 1.0, derive_seed(seed, 103));
    nets.actor_t = nets.actor;
    nets.critic1_t = nets.critic1;
    nets.critic2_t = nets.critic2;
    return nets;
}

std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const TD3Nets& nets, const TD3Config& cfg,
                                    std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::vector<double> y(batch.size(), 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        std::vector<double> a_next = forward(nets.actor_t, t.s_next);
        for (auto& a : a_next) {
            const double noise =
                std::clamp(rng.gaussian() * cfg.smoothing_sigma, -cfg.smoothing_clip,
                           cfg.smoothing_clip);
            a = std::clamp(a + noise, -cfg.action_bound, cfg.action_bound);
        }
        const auto x = critic_input(t.s_next, a_next);
        const double q1 = forward(nets.critic1_t, x)[0];
        const double q2 = forward(nets.critic2_t, x)[0];
        const double mask = t.done ? 0.0 : 1.0;
        y[i] = t.r + cfg.gamma * mask * std::min(q1, q2);
    }
    return y;
}

std::vector<double> update_critics(TD3Nets& nets, const std::vector<const Transition*>& batch,
                                   const std::vector<double>& y,
                                   const std::vector<double>& is_weights, const TD3Config& cfg) {
    const std::size_t n = batch.size();
    if (y.size() != n || is_weights.size() != n)
        throw std::invalid_argument("update_critics: batch, y, is_weights not aligned");

    std::vector<double> deltas(n, 0.0);
    DenseNet* critics[2] = {&nets.critic1, &nets.critic2};
    for (int ci = 0; ci < 2; ++ci) {
        DenseNet& critic = *critics[ci];
        NetGradients grads = zero_gradients(critic);
        double loss = 0.0;
        ForwardCache cache;
        for (std::size_t i = 0; i < n; ++i) {
            const Transition& t = *batch[i];
            const auto x = critic_input(t.s, t.a);
            const double q = forward_cached(critic, x, cache)[0];
            const double err = q - y[i];
            loss += is_weights[i] * err * err / static_cast<double>(n);
            if (ci == 0) deltas[i] = y[i] - q;
            const std::vector<double> out_grad = {2.0 * is_weights[i] * err /
                                                  static_cast<double>(n)};
            backward(critic, cache, out_grad, grads);
        }
        if (!std::isfinite(loss)) throw std::runtime_error("divergence");
        apply_sgd(critic, grads, cfg.critic_lr, cfg.grad_clip);
        for (const auto& layer : critic.layers) {
            for (double v : layer.w)
                if (!std::isfinite(v)) throw std::runtime_error("divergence");
            for (double v : layer.b)
                if (!std::isfinite(v)) throw std::runtime_error("divergence");
        }
    }
    return deltas;
}

void update_actor_and_targets(TD3Nets& nets, const std::vector<const Transition*>& batch,
                              const TD3Config& cfg, std::uint64_t step_counter) {
    if (cfg.policy_delay < 1 || step_counter % static_cast<std::uint64_t>(cfg.policy_delay) != 0)
        return;

    const std::size_t n = batch.size();
    const std::size_t action_dim = nets.actor.output_dim();
    NetGradients actor_grads = zero_gradients(nets.actor);
    NetGradients scratch = zero_gradients(nets.critic1);
    ForwardCache actor_cache, critic_cache;
    for (std::size_t i = 0; i < n; ++i) {
        const Transition& t = *batch[i];
        const auto a = forward_cached(nets.actor, t.s, actor_cache);
        const auto x = critic_input(t.s, a);
        forward_cached(nets.critic1, x, critic_cache);
        // Ascend mean Q: loss = -mean Q, dLoss/dQ = -1/n. The critic pass only
        // supplies dQ/da; its own parameter gradients land in scratch and are
        // discarded.
        const std::vector<double> q_grad = {-1.0 / static_cast<double>(n)};
        const auto input_grad = backward(nets.critic1, critic_cache, q_grad, scratch);
        const std::vector<double> a_grad(input_grad.end() - static_cast<std::ptrdiff_t>(action_dim),
                                         input_grad.end());
        backward(nets.actor, actor_cache, a_grad, actor_grads);
    }
    apply_sgd(nets.actor, actor_grads, cfg.actor_lr, cfg.grad_clip);

    soft_update(nets.actor, nets.actor_t, cfg.tau);
    soft_update(nets.critic1, nets.critic1_t, cfg.tau);
    soft_update(nets.critic2, nets.critic2_t, cfg.tau);
}

namespace {

void write_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    std::fwrite(b, 1, 4, f);
}

void write_u64(std::FILE* f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    std::fwrite(b, 1, 8, f);
}

void write_f64(std::FILE* f, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(f, bits);
}

std::uint32_t read_u32(std::FILE* f, const std::string& path) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) throw std::runtime_error("checkpoint truncated: " + path);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::FILE* f, const std::string& path) {
    unsigned char b[8];
    if (std::fread(b, 1, 8, f) != 8) throw std::runtime_error("checkpoint truncated: " + path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::FILE* f, const std::string& path) {
    const std::uint64_t bits = read_u64(f, path);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_net(std::FILE* f, const DenseNet& net) {
    write_u32(f, static_cast<std::uint32_t>(net.dims.size()));
    for (std::size_t d : net.dims) write_u32(f, static_cast<std::uint32_t>(d));
    write_u32(f, net.output == OutputActivation::bounded ? 1u : 0u);
    write_f64(f, net.output_scale);
    for (const auto& layer : net.layers) {
        for (double v : layer.w) write_f64(f, v);
        for (double v : layer.b) write_f64(f, v);
    }
}

DenseNet read_net(std::FILE* f, const std::string& path) {
    const std::uint32_t ndims = read_u32(f, path);
    if (ndims < 2 || ndims > 64) throw std::runtime_error("checkpoint corrupt: " + path);
    std::vector<std::size_t> dims(ndims);
    for (auto& d : dims) {
        d = read_u32(f, path);
        if (d == 0 || d > 1u << 20) throw std::runtime_error("checkpoint corrupt: " + path);
    }
    const std::uint32_t act = read_u32(f, path);
    if (act > 1) throw std::runtime_error("checkpoint corrupt: " + path);
    const double scale = read_f64(f, path);
    DenseNet net = make_net(dims, act == 1 ? OutputActivation::bounded : OutputActivation::linear,
                            scale, 0);
    for (auto& layer : net.layers) {
        for (auto& v : layer.w) v = read_f64(f, path);
        for (auto& v : layer.b) v = read_f64(f, path);
    }
    return net;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

}  // namespace

void save_checkpoint(const std::string& path, const TD3Nets& nets, std::uint64_t step_counter,
                     std::uint64_t episode_index) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
    std::fwrite(kMagic, 1, sizeof(kMagic), f.get());
    write_u32(f.get(), kVersion);
    const DenseNet* order[6] = {&nets.actor,   &nets.critic1,   &nets.critic2,
                                &nets.actor_t, &nets.critic1_t, &nets.critic2_t};
    for (const DenseNet* net : order) write_net(f.get(), *net);
    write_u64(f.get(), step_counter);
    write_u64(f.get(), episode_index);
    if (std::ferror(f.get())) throw std::runtime_error("cannot write checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    if (std::fread(magic, 1, 8, f.get()) != 8 || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    const std::uint32_t version = read_u32(f.get(), path);
    if (version != kVersion)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version) +
                                 " (expected " + std::to_string(kVersion) + "): " + path);
    Checkpoint ck;
    DenseNet* order[6] = {&ck.nets.actor,   &ck.nets.critic1,   &ck.nets.critic2,
                          &ck.nets.actor_t, &ck.nets.critic1_t, &ck.nets.critic2_t};
    for (DenseNet* net : order) *net = read_net(f.get(), path);
    ck.step_counter = read_u64(f.get(), path);
    ck.episode_index = read_u64(f.get(), path);
    return ck;
}

}  // namespace swiftnav
