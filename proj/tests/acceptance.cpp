// Acceptance gate: every release-blocking behavior of the stack, one line of
// output per criterion. Run with no arguments for all ten criteria, or pass
// criterion numbers to run a subset (the ctest entries split them by cost).
//
// Each criterion re-derives its expected values independently inside this
// file (closed-form formulas, finite differences, shadow ledgers, sampled
// geometry oracles) instead of trusting library internals.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "swiftnav/arbiter.hpp"
#include "swiftnav/cli.hpp"
#include "swiftnav/config.hpp"
#include "swiftnav/env.hpp"
#include "swiftnav/fuzzy.hpp"
#include "swiftnav/logio.hpp"
#include "swiftnav/nn.hpp"
#include "swiftnav/planner.hpp"
#include "swiftnav/replay.hpp"
#include "swiftnav/td3.hpp"
#include "swiftnav/world.hpp"

using namespace swiftnav;
namespace fs = std::filesystem;

namespace {

struct Outcome1 {
    bool pass = true;
    std::string detail;
};

using CriterionFn = std::function<Outcome1()>;

void note(Outcome1& o, bool ok, const std::string& what) {
    if (!ok) {
        o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += "FAILED " + what;
    }
}

std::string fmt1(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

double mean(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return hi > lo ? s / double(hi - lo) : 0.0;
}

// ---------------------------------------------------------------------------
// Criterion 1: fuzzy safety scores match closed-form values.

Outcome1 criterion_fuzzy() {
    Outcome1 o;
    const double tol = 1e-12;

    // Membership ramp: closed-form anchor points.
    note(o, std::abs(membership(2.0) - 0.0) <= tol, "membership(2)=0");
    note(o, std::abs(membership(10.0) - 1.0) <= tol, "membership(10)=1");
    note(o, std::abs(membership(6.0) - 0.5) <= tol, "membership(6)=0.5");
    note(o, std::abs(membership(4.0) - 0.25) <= tol, "membership(4)=0.25");
    note(o, std::abs(membership(0.0) - 0.0) <= tol, "membership(0)=0");
    note(o, std::abs(membership(55.0) - 1.0) <= tol, "membership(55)=1");
    note(o, std::abs(membership(3.7) - (3.7 - 2.0) / 8.0) <= tol, "membership(3.7)");
    // Custom ramp bounds.
    note(o, std::abs(membership(5.0, 4.0, 8.0) - 0.25) <= tol, "membership custom ramp");

    // Sector weights, including every documented boundary.
    note(o, sector_weight(0.0) == 1.0, "sector(0)=1");
    note(o, sector_weight(29.999) == 1.0, "sector(29.999)=1");
    note(o, sector_weight(30.0) == 1.0, "sector(30)=1");
    note(o, sector_weight(30.001) == 0.5, "sector(30.001)=0.5");
    note(o, sector_weight(149.999) == 0.5, "sector(149.999)=0.5");
    note(o, sector_weight(150.0) == 0.2, "sector(150)=0.2");
    note(o, sector_weight(180.0) == 0.2, "sector(180)=0.2");
    note(o, sector_weight(210.0) == 0.2, "sector(210)=0.2");
    note(o, sector_weight(210.001) == 0.5, "sector(210.001)=0.5");
    note(o, sector_weight(329.999) == 0.5, "sector(329.999)=0.5");
    note(o, sector_weight(330.0) == 1.0, "sector(330)=1");
    note(o, sector_weight(359.0) == 1.0, "sector(359)=1");
    note(o, sector_weight(360.0) == 1.0, "sector wraps at 360");
    note(o, sector_weight(-30.0) == 1.0, "sector(-30) wraps to 330");

    // Full-scan weighted mean, hand-computed: 7 front rays at 4 m, 7 rear rays
    // at 12 m, 22 side rays at 6 m ->  (7*1*0.25 + 7*0.2*1 + 22*0.5*0.5) /
    // (7*1 + 7*0.2 + 22*0.5) = 8.65 / 19.4.
    std::vector<RayHit> hits;
    for (int k = 0; k < 36; ++k) {
        const double ang = 10.0 * k;
        double range;
        if (ang <= 30.0 || ang >= 330.0)
            range = 4.0;
        else if (ang >= 150.0 && ang <= 210.0)
            range = 12.0;
        else
            range = 6.0;
        hits.push_back({ang, range});
    }
    const double expected = 8.65 / 19.4;
    note(o, std::abs(safety_score(hits) - expected) <= tol, "weighted mean 8.65/19.4");

    // A second scan with every ray contributing a distinct product, verified
    // against an explicitly re-derived accumulation.
    std::vector<RayHit> mixed;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 36; ++k) {
        const double ang = 10.0 * k;
        const double range = 1.0 + 0.37 * k;
        mixed.push_back({ang, range});
        double w;
        if (ang <= 30.0 || ang >= 330.0)
            w = 1.0;
        else if (ang >= 150.0 && ang <= 210.0)
            w = 0.2;
        else
            w = 0.5;
        double mu = (range - 2.0) / 8.0;
        mu = std::min(1.0, std::max(0.0, mu));
        num += w * mu;
        den += w;
    }
    note(o, std::abs(safety_score(mixed) - num / den) <= tol, "mixed-scan weighted mean");

    o.detail = o.pass ? "closed-form memberships, sector boundaries, and means agree to 1e-12"
                      : o.detail;
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 2: switching is dwell-bounded under adversarial flapping.

Outcome1 criterion_switch_bound() {
    Outcome1 o;
    const std::int64_t T = 100000;
    ArbiterConfig cfg;  // dwell_min = 20, debounce_n = 3

    const ArbiterInputs want_rl{5.0, 0.3, 100.0, false};
    const ArbiterInputs want_travel{20.0, 0.95, 100.0, true};
    const auto phase_wants_rl = [&](std::int64_t t) {
        if (t < T / 2) return (t & 1) == 0;  // flip every step
        return ((t - T / 2) / 25) % 2 == 0;  // hold 25-step phases
    };

    const auto run = [&](bool stability) {
        ArbiterConfig c = cfg;
        c.stability_enabled = stability;
        ArbiterState st = make_arbiter_state(c);
        for (std::int64_t t = 0; t < T; ++t) {
            const ArbiterInputs& in = phase_wants_rl(t) ? want_rl : want_travel;
            step_arbiter(st, desired_mode(in, st.mode, c), c);
        }
        return st;
    };

    const ArbiterState with = run(true);
    const ArbiterState without = run(false);
    const std::size_t bound = std::size_t(T / cfg.dwell_min) + 1;

    note(o, switch_count(with) <= bound,
         "switches " + std::to_string(switch_count(with)) + " <= " + std::to_string(bound));
    note(o, switch_count(with) > 0, "stabilized arbitration still switches when held");
    bool spacing_ok = true;
    for (std::size_t i = 1; i < with.switch_log.size(); ++i)
        spacing_ok &= (with.switch_log[i].step - with.switch_log[i - 1].step) >= cfg.dwell_min;
    note(o, spacing_ok, "minimum inter-switch spacing >= dwell");
    note(o, switch_count(without) >= 10 * switch_count(with),
         "no-stability flapping >= 10x (" + std::to_string(switch_count(without)) + " vs " +
             std::to_string(switch_count(with)) + ")");

    if (o.pass)
        o.detail = "stabilized=" + std::to_string(switch_count(with)) +
                   " (bound " + std::to_string(bound) + ", spacing >= 20), raw=" +
                   std::to_string(switch_count(without));
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 3: prioritized replay statistics.

Transition make_item(double id) {
    Transition t;
    t.s.assign(kStateDim, 0.0);
    t.a.assign(kActionDim, 0.0);
    t.s_next.assign(kStateDim, 0.0);
    t.r = id;
    return t;
}

Outcome1 criterion_per_stats() {
    Outcome1 o;
    const double alpha = 0.6, floor_p = 1e-3;

    // (a) Sampling frequencies against the alpha-weighted distribution.
    {
        PERBuffer buf(64, alpha, 0.4, 1.0, floor_p);
        const std::size_t n = 50;
        std::vector<double> target_p(n);
        for (std::size_t i = 0; i < n; ++i) {
            buf.push(make_item(double(i)));
            target_p[i] = 0.3 + 0.07 * double((i * 13) % 11) + floor_p;
        }
        // Drive every slot to its target priority through sample/update
        // rounds (deterministic seeds), then verify the tree mass.
        double expected_root = 0.0;
        for (std::size_t i = 0; i < n; ++i) expected_root += std::pow(target_p[i], alpha);
        bool settled = false;
        for (int round = 0; round < 500 && !settled; ++round) {
            auto s = buf.sample(25, 777 + std::uint64_t(round));
            std::vector<double> td(s.handles.size());
            for (std::size_t j = 0; j < s.handles.size(); ++j) {
                const std::size_t id = std::size_t(s.transitions[j]->r);
                td[j] = target_p[id] - floor_p;  // p = |td| + floor
            }
            buf.update_priorities(s.handles, td);
            settled = std::abs(buf.tree_root() - expected_root) <= 1e-9 * expected_root;
        }
        note(o, settled, "priority coverage (root == sum of p^alpha)");

        std::vector<std::uint64_t> counts(n, 0);
        const int rounds = 4000, batch = 25;  // 1e5 draws
        for (int r = 0; r < rounds; ++r) {
            auto s = buf.sample(batch, 31000 + std::uint64_t(r));
            for (const Transition* t : s.transitions) ++counts[std::size_t(t->r)];
        }
        const double total = double(rounds) * batch;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double expect = std::pow(target_p[i], alpha) / expected_root;
            worst = std::max(worst, std::abs(double(counts[i]) / total - expect));
        }
        note(o, worst <= 0.01, "sampling frequency within 0.01 (worst " + fmt1("%.4f", worst) + ")");
        o.detail = "freq err " + fmt1("%.5f", worst);

        // Importance weights are max-normalized into (0, 1].
        auto s = buf.sample(25, 4242);
        bool w_ok = !s.is_weights.empty();
        double w_max = 0.0;
        for (double w : s.is_weights) {
            w_ok &= w > 0.0 && w <= 1.0 + 1e-12;
            w_max = std::max(w_max, w);
        }
        note(o, w_ok && std::abs(w_max - 1.0) <= 1e-12, "IS weights max-normalized");
    }

    // (b) Root integrity after 1e4 interleaved pushes/updates with eviction,
    // against an independent shadow ledger keyed by item id.
    {
        const std::size_t cap = 4096;
        PERBuffer buf(cap, alpha, 0.4, 1.0, floor_p);
        std::map<double, double> shadow;  // id -> p^alpha
        std::deque<double> fifo;
        double shadow_pmax = 1.0;
        std::uint64_t next_id = 0;
        int pushes = 0, updates = 0;
        for (int op = 0; op < 10000; ++op) {
            if (op % 5 < 3 || buf.size() < 64) {
                const double id = double(next_id++);
                buf.push(make_item(id));
                shadow[id] = std::pow(shadow_pmax, alpha);
                fifo.push_back(id);
                if (fifo.size() > cap) {
                    shadow.erase(fifo.front());
                    fifo.pop_front();
                }
                ++pushes;
            } else {
                auto s = buf.sample(16, 52000 + std::uint64_t(op));
                std::vector<double> td(s.handles.size());
                for (std::size_t j = 0; j < td.size(); ++j) {
                    const double id = s.transitions[j]->r;
                    td[j] = 0.05 + double((std::uint64_t(id) + op) % 97) / 96.0;
                    const double p = td[j] + floor_p;
                    shadow[id] = std::pow(p, alpha);
                    shadow_pmax = std::max(shadow_pmax, p);
                }
                buf.update_priorities(s.handles, td);
                ++updates;
            }
        }
        double expect = 0.0;
        for (const auto& [id, mass] : shadow) expect += mass;
        const double rel = std::abs(buf.tree_root() - expect) / expect;
        note(o, rel <= 1e-6,
             "tree root after " + std::to_string(pushes) + " pushes / " +
                 std::to_string(updates) + " update batches (rel " + fmt1("%.2e", rel) + ")");
        note(o, buf.stale_skips() == 0, "no stale handles in this schedule");
        if (o.pass) o.detail += ", root rel err " + fmt1("%.2e", rel);
    }
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 4: analytic gradients vs central finite differences.

Outcome1 criterion_gradients() {
    Outcome1 o;
    const double h = 1e-5;
    double worst = 0.0;
    int nets_checked = 0;

    for (int n = 0; n < 20; ++n) {
        // Draw shapes and data; regenerate while any hidden pre-activation is
        // within 1e-3 of its rectifier kink so the finite difference stays on
        // one linear piece.
        std::mt19937_64 gen(4000 + n);
        std::uniform_int_distribution<std::size_t> in_d(2, 8), out_d(1, 4), hid_d(4, 16);
        DenseNet net;
        std::vector<double> x;
        for (int attempt = 0;; ++attempt) {
            const std::vector<std::size_t> dims{in_d(gen), hid_d(gen), hid_d(gen), out_d(gen)};
            const bool bounded = (n % 2) == 1;
            net = make_net(dims, bounded ? OutputActivation::bounded : OutputActivation::linear,
                           bounded ? 3.0 : 1.0, 11000 + 31 * n + attempt);
            std::uniform_real_distribution<double> xd(-1.5, 1.5);
            x.assign(dims.front(), 0.0);
            for (auto& v : x) v = xd(gen);
            // Probe pre-activations layer by layer.
            bool safe = true;
            std::vector<double> act = x;
            for (std::size_t l = 0; l + 1 < net.layers.size() && safe; ++l) {
                const DenseLayer& L = net.layers[l];
                std::vector<double> next(L.out);
                for (std::size_t r = 0; r < L.out; ++r) {
                    double pre = L.b[r];
                    for (std::size_t c = 0; c < L.in; ++c) pre += L.w[r * L.in + c] * act[c];
                    if (std::abs(pre) < 1e-3) safe = false;
                    next[r] = std::max(0.0, pre);
                }
                act = std::move(next);
            }
            if (safe) break;
            if (attempt > 200) {
                note(o, false, "could not find kink-free configuration");
                return o;
            }
        }

        // Loss L = sum_k c_k * y_k.
        std::mt19937_64 cg(600 + n);
        std::uniform_real_distribution<double> cd(0.5, 1.5);
        std::vector<double> c(net.output_dim());
        for (auto& v : c) v = cd(cg) * (cg() % 2 ? 1.0 : -1.0);
        const auto loss = [&](const DenseNet& m) {
            const auto y = forward(m, x);
            double L = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k) L += c[k] * y[k];
            return L;
        };

        ForwardCache cache;
        forward_cached(net, x, cache);
        NetGradients grads = zero_gradients(net);
        const std::vector<double> dx = backward(net, cache, c, grads);

        // Shape audit: one gradient entry per parameter, one per input.
        bool shapes = grads.w.size() == net.layers.size() && grads.b.size() == net.layers.size();
        for (std::size_t l = 0; shapes && l < net.layers.size(); ++l)
            shapes = grads.w[l].size() == net.layers[l].w.size() &&
                     grads.b[l].size() == net.layers[l].b.size();
        shapes = shapes && dx.size() == net.input_dim();
        note(o, shapes, "gradient shapes mirror net " + std::to_string(n));
        if (!shapes) return o;

        const auto fd_check = [&](double* slot, double analytic) {
            const double keep = *slot;
            *slot = keep + h;
            const double Lp = loss(net);
            *slot = keep - h;
            const double Lm = loss(net);
            *slot = keep;
            const double fd = (Lp - Lm) / (2.0 * h);
            const double err =
                std::abs(analytic - fd) / std::max({std::abs(fd), std::abs(analytic), 1e-6});
            worst = std::max(worst, err);
        };
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            for (std::size_t i = 0; i < net.layers[l].w.size(); ++i)
                fd_check(&net.layers[l].w[i], grads.w[l][i]);
            for (std::size_t i = 0; i < net.layers[l].b.size(); ++i)
                fd_check(&net.layers[l].b[i], grads.b[l][i]);
        }
        // Input gradient as well.
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double keep = x[i];
            x[i] = keep + h;
            const double Lp = loss(net);
            x[i] = keep - h;
            const double Lm = loss(net);
            x[i] = keep;
            const double fd = (Lp - Lm) / (2.0 * h);
            const double err =
                std::abs(dx[i] - fd) / std::max({std::abs(fd), std::abs(dx[i]), 1e-6});
            worst = std::max(worst, err);
        }
        ++nets_checked;
    }
    note(o, worst < 1e-4, "max relative gradient error " + fmt1("%.3e", worst));
    if (o.pass)
        o.detail = std::to_string(nets_checked) + " nets, worst rel err " + fmt1("%.2e", worst);
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 5: learner target value, terminal mask, and soft updates.

DenseNet constant_net(std::size_t in, double bias, OutputActivation act, double scale) {
    DenseNet n;
    n.dims = {in, 1};
    DenseLayer L;
    L.in = in;
    L.out = 1;
    L.w.assign(in, 0.0);
    L.b.assign(1, bias);
    n.layers.push_back(L);
    n.output = act;
    n.output_scale = scale;
    return n;
}

Outcome1 criterion_td3_mechanics() {
    Outcome1 o;
    TD3Config cfg;  // gamma 0.99, sigma 0.2, clip 0.5, bound 3

    // Constant critics Q'_1 = 2, Q'_2 = 3 make the smoothing noise irrelevant:
    // y = r + gamma * min = 1 + 0.99 * 2 = 2.98 exactly.
    TD3Nets nets;
    nets.actor = constant_net(2, 0.1, OutputActivation::bounded, 3.0);
    nets.actor_t = nets.actor;
    nets.critic1 = constant_net(3, 2.0, OutputActivation::linear, 1.0);
    nets.critic1_t = nets.critic1;
    nets.critic2 = constant_net(3, 3.0, OutputActivation::linear, 1.0);
    nets.critic2_t = nets.critic2;

    Transition t;
    t.s = {0.4, -0.2};
    t.a = {0.5};
    t.r = 1.0;
    t.s_next = {0.1, 0.3};
    t.done = false;
    Transition t_done = t;
    t_done.done = true;
    const std::vector<const Transition*> batch{&t, &t_done, &t};

    const auto y = compute_targets(batch, nets, cfg, 99);
    note(o, y.size() == 3, "one target per transition");
    note(o, std::abs(y[0] - 2.98) <= 1e-12, "y = r + gamma*min(Q1',Q2') = 2.98");
    note(o, std::abs(y[2] - 2.98) <= 1e-12, "repeat transition reproduces 2.98");
    note(o, y[1] == 1.0, "terminal transitions mask the bootstrap exactly");

    // Swapping the critics keeps the min.
    std::swap(nets.critic1_t, nets.critic2_t);
    const auto y2 = compute_targets(batch, nets, cfg, 99);
    note(o, std::abs(y2[0] - 2.98) <= 1e-12, "min() is symmetric in the critics");

    // Soft updates at tau in {0, 0.005, 1}.
    DenseNet live = constant_net(2, 2.0, OutputActivation::linear, 1.0);
    live.layers[0].w[0] = 1.0;
    DenseNet target = constant_net(2, 0.0, OutputActivation::linear, 1.0);

    DenseNet frozen = target;
    soft_update(live, frozen, 0.0);
    note(o, frozen.layers[0].w[0] == 0.0 && frozen.layers[0].b[0] == 0.0, "tau=0 is a no-op");

    DenseNet traced = target;
    soft_update(live, traced, 0.005);
    note(o, traced.layers[0].w[0] == 0.005 && traced.layers[0].b[0] == 0.01,
         "tau=0.005 blends exactly");

    DenseNet copied = target;
    soft_update(live, copied, 1.0);
    note(o, copied.layers[0].w[0] == 1.0 && copied.layers[0].b[0] == 2.0, "tau=1 copies live");

    if (o.pass) o.detail = "y=2.98 exact, terminal mask exact, tau in {0, 0.005, 1} exact";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 6: checker safety over 1000 seeded scenes.

Outcome1 criterion_checker_safety() {
    Outcome1 o;
    CheckerConfig cfg;  // clearance_margin 0.5, sample_step 0.25
    int kept = 0, modified = 0, rejected = 0;
    double worst_clearance = 1e18;

    for (int scene = 0; scene < 1000; ++scene) {
        std::mt19937_64 gen(9000 + scene);
        std::uniform_real_distribution<double> coord(5.0, 35.0), rad(0.5, 2.5),
            act(-3.0, 3.0), yaw(-3.14159, 3.14159);

        World w;
        w.bounds = {0.0, 0.0, 40.0, 40.0};
        const int n_obs = 3 + int(gen() % 10);
        for (int i = 0; i < n_obs; ++i) w.obstacles.push_back({{coord(gen), coord(gen)}, rad(gen)});

        const auto free_point = [&]() {
            for (;;) {
                Vec2 p{coord(gen), coord(gen)};
                bool ok = true;
                for (const auto& ob : w.obstacles)
                    ok &= distance(p, ob.center) - ob.radius > 0.6;
                if (ok) return p;
            }
        };
        VehicleState state;
        state.position = free_point();
        state.yaw = yaw(gen);
        const Vec2 goal = free_point();
        w.start = state.position;
        w.goal = goal;

        std::array<double, 10> a{};
        for (auto& v : a) v = act(gen);
        const WaypointPolyline proposal = decode_action(a, state);
        const CheckResult res = check_and_score(proposal, w, goal, cfg);

        if (res.verdict == Verdict::reject) {
            ++rejected;
            continue;
        }
        (res.verdict == Verdict::keep ? kept : modified)++;

        // Sampled oracle: walk every segment at the 0.25 m pitch (endpoints
        // included) and measure true obstacle clearance and containment.
        Vec2 prev = res.polyline.origin;
        for (const Vec2& wp : res.polyline.waypoints) {
            const double len = distance(prev, wp);
            const int steps = std::max(1, int(std::ceil(len / cfg.sample_step)));
            for (int k = 0; k <= steps; ++k) {
                const double u = double(k) / steps;
                const Vec2 q{prev.x + u * (wp.x - prev.x), prev.y + u * (wp.y - prev.y)};
                double clear = 1e18;
                for (const auto& ob : w.obstacles)
                    clear = std::min(clear, distance(q, ob.center) - ob.radius);
                worst_clearance = std::min(worst_clearance, clear);
                if (clear < cfg.clearance_margin - 1e-9) {
                    note(o, false,
                         "scene " + std::to_string(scene) + " clearance " + fmt1("%.4f", clear));
                    return o;
                }
                if (!w.bounds.contains(q)) {
                    note(o, false, "scene " + std::to_string(scene) + " out of bounds");
                    return o;
                }
            }
            prev = wp;
        }
    }
    note(o, kept + modified > 100, "enough accepted plans to be meaningful");
    note(o, rejected > 0, "some proposals rejected");
    if (o.pass)
        o.detail = "kept=" + std::to_string(kept) + " modified=" + std::to_string(modified) +
                   " rejected=" + std::to_string(rejected) +
                   ", min sampled clearance " + fmt1("%.3f", worst_clearance);
    return o;
}

// ---------------------------------------------------------------------------
// Shared helpers for the training criteria.

struct TrainArtifacts {
    std::vector<EpisodeRow> rows;
    fs::path dir;
    double seconds = 0.0;
    int exit_code = -1;
};

TrainArtifacts run_training(const std::string& config_path, const std::string& ablation,
                            const std::string& tag) {
    TrainArtifacts art;
    art.dir = fresh_dir("swiftnav_accept_" + tag);
    setenv("SWIFTNAV_OUT", art.dir.c_str(), 1);
    TrainOptions opt;
    opt.config_path = config_path;
    opt.ablation_override = ablation;
    const auto t0 = std::chrono::steady_clock::now();
    art.exit_code = cmd_train(opt);
    art.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    unsetenv("SWIFTNAV_OUT");
    if (art.exit_code == 0) art.rows = read_episode_log((art.dir / "log.csv").string());
    return art;
}

std::string scaled_config(const std::string& base, std::size_t episode_cap,
                          std::size_t success_target, const std::string& tag) {
    RunConfig cfg = load_config(base);
    cfg.episode_cap = episode_cap;
    cfg.success_target = success_target;
    const fs::path p = fs::temp_directory_path() / ("swiftnav_accept_" + tag + ".cfg");
    write_text_file(p.string(), serialize_config(cfg));
    return p.string();
}

std::vector<double> returns_of(const std::vector<EpisodeRow>& rows) {
    std::vector<double> r(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) r[i] = rows[i].episode_return;
    return r;
}

double path_length(const std::vector<TrajectoryPoint>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1].position, pts[i].position);
    return len;
}

// The dense-scene run is expensive; criteria 8 and 9 share it when both run in
// one invocation. Training is episode-sequential, so the first N episodes of a
// longer run are exactly what a run capped at N would have produced.
constexpr std::size_t kDenseCap = 180;
constexpr std::size_t kAblationCap = 120;
std::optional<TrainArtifacts> g_dense_full;

const TrainArtifacts& dense_full_run() {
    if (!g_dense_full) {
        const std::string cfg = scaled_config("configs/traj2.cfg", kDenseCap, 100000, "traj2cap");
        g_dense_full = run_training(cfg, "", "traj2");
    }
    return *g_dense_full;
}

std::vector<EpisodeRow> first_n(const std::vector<EpisodeRow>& rows, std::size_t n) {
    return {rows.begin(), rows.begin() + std::min(n, rows.size())};
}

// ---------------------------------------------------------------------------
// Criterion 7: sparse-scene training converges under the bundled defaults.

Outcome1 criterion_train_sparse() {
    Outcome1 o;
    const TrainArtifacts art = run_training("configs/traj1.cfg", "", "traj1");
    note(o, art.exit_code == 0, "training exit code " + std::to_string(art.exit_code));
    if (art.exit_code != 0) return o;

    const auto& rows = art.rows;
    std::size_t successes = 0;
    for (const auto& r : rows) successes += r.success ? 1 : 0;
    note(o, successes >= 100,
         "100 successes (got " + std::to_string(successes) + " in " +
             std::to_string(rows.size()) + " episodes)");
    note(o, rows.size() <= 2000, "within the 2000-episode budget");

    std::vector<double> rets = returns_of(rows), steps(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) steps[i] = double(rows[i].steps);
    const auto ma_r = moving_average(rets, 15);
    const auto ma_s = moving_average(steps, 15);
    note(o, ma_r.back() > ma_r.front(),
         "smoothed return improved (" + fmt1("%.1f", ma_r.front()) + " -> " +
             fmt1("%.1f", ma_r.back()) + ")");
    note(o, ma_s.back() < ma_s.front(),
         "smoothed steps shrank (" + fmt1("%.1f", ma_s.front()) + " -> " +
             fmt1("%.1f", ma_s.back()) + ")");

    std::size_t last50 = 0;
    const std::size_t lo = rows.size() > 50 ? rows.size() - 50 : 0;
    for (std::size_t i = lo; i < rows.size(); ++i) last50 += rows[i].success ? 1 : 0;
    const double rate = double(last50) / double(rows.size() - lo);
    note(o, rate >= 0.80, "last-50 success rate " + fmt1("%.2f", rate) + " >= 0.80");
    note(o, art.seconds <= 1200.0, "runtime " + fmt1("%.0f", art.seconds) + "s <= 1200s");

    if (o.pass)
        o.detail = std::to_string(successes) + " successes in " + std::to_string(rows.size()) +
                   " episodes, last-50 rate " + fmt1("%.2f", rate) + ", " +
                   fmt1("%.0f", art.seconds) + "s";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 8: dense-scene training trends upward and shortens flights.

Outcome1 criterion_train_dense() {
    Outcome1 o;
    const TrainArtifacts& art = dense_full_run();
    note(o, art.exit_code == 0, "training exit code " + std::to_string(art.exit_code));
    if (art.exit_code != 0) return o;

    const auto ma = moving_average(returns_of(art.rows), 15);
    const std::size_t q = ma.size() / 4;
    const double first_q = mean(ma, 0, q);
    const double last_q = mean(ma, ma.size() - q, ma.size());
    note(o, last_q > first_q,
         "final-quartile smoothed return " + fmt1("%.1f", last_q) + " > first-quartile " +
             fmt1("%.1f", first_q));

    // Saved success trajectories: late flights must be geometrically shorter
    // than the earliest saved success.
    std::vector<std::pair<std::string, double>> saved;
    for (const auto& e : fs::directory_iterator(art.dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("traj_ep", 0) == 0 && name.find(".csv") != std::string::npos)
            saved.emplace_back(e.path().string(), path_length(read_trajectory(e.path().string())));
    }
    std::sort(saved.begin(), saved.end());
    note(o, saved.size() >= 4,
         "at least 4 successful episodes saved (got " + std::to_string(saved.size()) + ")");
    if (saved.size() >= 4) {
        const double earliest = saved.front().second;
        double late = 0.0;
        for (std::size_t i = saved.size() - 3; i < saved.size(); ++i) late += saved[i].second;
        late /= 3.0;
        note(o, late < earliest,
             "late flights shorter (" + fmt1("%.1f", late) + " m < " + fmt1("%.1f", earliest) +
                 " m)");
        if (o.pass)
            o.detail = "return " + fmt1("%.1f", first_q) + " -> " + fmt1("%.1f", last_q) + ", " +
                       std::to_string(saved.size()) + " successes, path " +
                       fmt1("%.1f", earliest) + " -> " + fmt1("%.1f", late) + " m, " +
                       fmt1("%.0f", art.seconds) + "s";
    }
    note(o, art.seconds <= 2700.0, "runtime " + fmt1("%.0f", art.seconds) + "s <= 2700s");
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 9: ablations degrade the full system where expected.

Outcome1 criterion_ablations() {
    Outcome1 o;
    // All three systems run on the dense scene. The full-system episodes come
    // from the shared dense run (its first kAblationCap episodes are identical
    // to a run capped there); the ablations train at that cap directly.
    const std::string cfg =
        scaled_config("configs/traj2.cfg", kAblationCap, 100000, "traj2abl");
    const TrainArtifacts& full = dense_full_run();
    const std::vector<EpisodeRow> full_rows = first_n(full.rows, kAblationCap);
    const TrainArtifacts nochk = run_training(cfg, "no_checker", "abl_nochk");
    const TrainArtifacts nostab = run_training(cfg, "no_stability", "abl_nostab");
    note(o, full.exit_code == 0 && nochk.exit_code == 0 && nostab.exit_code == 0,
         "all three runs completed");
    if (!o.pass) return o;

    const auto quartile = [&](const std::vector<EpisodeRow>& rows) {
        const auto ma = moving_average(returns_of(rows), 15);
        const std::size_t q = std::max<std::size_t>(1, ma.size() / 4);
        return mean(ma, ma.size() - q, ma.size());
    };
    const double q_full = quartile(full_rows);
    const double q_nochk = quartile(nochk.rows);
    note(o, q_nochk <= q_full,
         "no-checker final-quartile return " + fmt1("%.1f", q_nochk) + " <= full " +
             fmt1("%.1f", q_full));

    const auto switch_ratio = [](const std::vector<EpisodeRow>& rows) {
        double sw = 0.0, succ = 0.0;
        for (const auto& r : rows) {
            sw += double(r.switches);
            succ += r.success ? 1.0 : 0.0;
        }
        return succ > 0.0 ? sw / succ : std::numeric_limits<double>::infinity();
    };
    const double r_full = switch_ratio(full_rows);
    const double r_nostab = switch_ratio(nostab.rows);
    note(o, std::isfinite(r_full), "full system logged successes");
    note(o, r_full < r_nostab,
         "switches per success: full " + fmt1("%.1f", r_full) + " < no-stability " +
             (std::isfinite(r_nostab) ? fmt1("%.1f", r_nostab) : std::string("inf")));

    if (o.pass)
        o.detail = "return " + fmt1("%.1f", q_nochk) + " (no-checker) <= " + fmt1("%.1f", q_full) +
                   " (full); switches/success " + fmt1("%.1f", r_full) + " vs " +
                   (std::isfinite(r_nostab) ? fmt1("%.1f", r_nostab) : std::string("inf"));
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism — identical runs, byte-identical logs.

Outcome1 criterion_determinism() {
    Outcome1 o;
    RunConfig cfg = load_config("configs/traj1.cfg");
    cfg.episode_cap = 10;
    cfg.success_target = 100000;
    cfg.env.step_limit = 500;
    cfg.warmup = 256;
    cfg.env.td3.hidden = 32;
    const fs::path p = fs::temp_directory_path() / "swiftnav_accept_det.cfg";
    write_text_file(p.string(), serialize_config(cfg));

    const TrainArtifacts a = run_training(p.string(), "", "det_a");
    const TrainArtifacts b = run_training(p.string(), "", "det_b");
    note(o, a.exit_code == 0 && b.exit_code == 0, "both runs completed");
    if (!o.pass) return o;

    const std::string log_a = read_text_file((a.dir / "log.csv").string());
    const std::string log_b = read_text_file((b.dir / "log.csv").string());
    note(o, log_a == log_b, "episode logs byte-identical");
    note(o, !a.rows.empty(), "log is non-empty");

    const std::string ck_a = read_text_file((a.dir / "ckpt_final.bin").string());
    const std::string ck_b = read_text_file((b.dir / "ckpt_final.bin").string());
    note(o, ck_a == ck_b, "final checkpoints byte-identical");

    if (o.pass)
        o.detail = std::to_string(a.rows.size()) + " episodes, log " +
                   std::to_string(log_a.size()) + " bytes identical across runs";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    // Training criteria resolve the bundled configs/worlds relative to the
    // project root.
    if (chdir(SWIFTNAV_SOURCE_DIR) != 0) {
        std::fprintf(stderr, "cannot chdir to %s\n", SWIFTNAV_SOURCE_DIR);
        return 1;
    }
    unsetenv("SWIFTNAV_OUT");

    struct Entry {
        int id;
        const char* summary;
        CriterionFn fn;
    };
    const std::vector<Entry> entries = {
        {1, "fuzzy safety scores match closed-form values", criterion_fuzzy},
        {2, "mode switching is dwell-bounded under flapping", criterion_switch_bound},
        {3, "prioritized sampling matches the alpha-weighted distribution", criterion_per_stats},
        {4, "analytic gradients agree with finite differences", criterion_gradients},
        {5, "learner target, terminal mask, and soft updates are exact",
         criterion_td3_mechanics},
        {6, "accepted plans keep the clearance margin in 1000 scenes",
         criterion_checker_safety},
        {7, "sparse-scene training converges with the bundled defaults",
         criterion_train_sparse},
        {8, "dense-scene training trends upward and shortens flights",
         criterion_train_dense},
        {9, "ablations degrade return (no-checker) and switch economy (no-stability)",
         criterion_ablations},
        {10, "identical training runs produce byte-identical logs", criterion_determinism},
    };

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty())
        for (const auto& e : entries) wanted.push_back(e.id);

    int failures = 0;
    for (int id : wanted) {
        const auto it = std::find_if(entries.begin(), entries.end(),
                                     [&](const Entry& e) { return e.id == id; });
        if (it == entries.end()) {
            std::printf("[FAIL] criterion-%d: unknown criterion\n", id);
            ++failures;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome1 out;
        try {
            out = it->fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion-%d: %s (%s) [%.1fs]\n", out.pass ? "PASS" : "FAIL", it->id,
                    it->summary, out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
