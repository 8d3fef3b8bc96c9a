#pragma once

#include <cstdint>
#include <vector>

namespace swiftnav {

struct Transition {
    std::vector<double> s;       // 72 entries
    std::vector<double> a;       // 10 entries
    double r = 0.0;
    std::vector<double> s_next;  // 72 entries
    bool done = false;
};

// Proportional prioritized replay over a FIFO ring with a binary sum tree of
// p_i^alpha. New transitions enter at the running max priority so they are
// sampled early; priorities are refreshed from absolute TD errors plus a floor.
class PERBuffer {
public:
    explicit PERBuffer(std::size_t capacity = 50000, double alpha = 0.6,
                       double beta_start = 0.4, double beta_end = 1.0,
                       double priority_floor = 1e-3);

    // Stores with priority p_max (FIFO eviction at capacity). Throws
    // std::invalid_argument("shape mismatch") unless dims are 72/10/72.
    void push(Transition t);

    struct Sample {
        std::vector<std::uint64_t> handles;  // for update_priorities; stale-safe
        std::vector<const Transition*> transitions;
        std::vector<double> is_weights;      // max-normalized, in (0, 1]
    };

    // Stratified proportional sampling: one uniform draw per equal-mass
    // stratum. Throws std::runtime_error("underfilled buffer") if size < batch.
    Sample sample(std::size_t batch, std::uint64_t rng_seed);

    // p_i <- |delta_i| + floor. Handles whose slot was since evicted are
    // skipped silently and counted in stale_skips().
    void update_priorities(const std::vector<std::uint64_t>& handles,
                           const std::vector<double>& td_errors);

    // Linear schedule: beta = beta_start + fraction*(beta_end - beta_start).
    void anneal_beta(double fraction_complete);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    double beta() const { return beta_; }
    double p_max() const { return p_max_; }
    double tree_root() const { return tree_[1]; }  // = sum of p_i^alpha
    std::uint64_t stale_skips() const { return stale_skips_; }
    // Probability mass currently assigned to a slot (testing aid).
    double probability(std::size_t slot) const;

private:
    void set_leaf(std::size_t slot, double value);
    std::size_t descend(double mass) const;

    std::size_t capacity_;
    std::size_t leaf_base_;  // first leaf index in tree_
    double alpha_, beta_, beta_start_, beta_end_, floor_;
    double p_max_ = 1.0;
    std::size_t size_ = 0;
    std::size_t next_slot_ = 0;
    std::uint64_t stale_skips_ = 0;
    std::vector<double> tree_;
    std::vector<Transition> data_;
    std::vector<std::uint64_t> generation_;
};

}  // namespace swiftnav
