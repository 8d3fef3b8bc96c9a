#include "swiftnav/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swiftnav/rng.hpp"

namespace swiftnav {

namespace {
std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}
}  // namespace

PERBuffer::PERBuffer(std::size_t capacity, double alpha, double beta_start, double beta_end,
                     double priority_floor)
    : capacity_(capacity),
      leaf_base_(next_pow2(capacity)),
      alpha_(alpha),
      beta_(beta_start),
      beta_start_(beta_start),
      beta_end_(beta_end),
      floor_(priority_floor) {
    tree_.assign(2 * leaf_base_, 0.0);
    data_.resize(capacity);
    generation_.assign(capacity, 0);
}

void PERBuffer::set_leaf(std::size_t slot, double value) {
    std::size_t node = leaf_base_ + slot;
    tree_[node] = value;
    for (node >>= 1; node >= 1; node >>= 1) tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
}

std::size_t PERBuffer::descend(double mass) const {
    std::size_t node = 1;
    while (node < leaf_base_) {
        const std::size_t left = 2 * node;
        if (mass <= tree_[left] && tree_[left] > 0.0) {
            node = left;
        } else {
            mass -= tree_[left];
            node = left + 1;
        }
    }
    std::size_t slot = node - leaf_base_;
    if (slot >= size_) slot = size_ - 1;  // guards float residue at the tail
    return slot;
}

void PERBuffer::push(Transition t) {
    if (t.s.size() != 72 || t.a.size() != 10 || t.s_next.size() != 72)
        throw std::invalid_argument("shape mismatch");
    const std::size_t slot = next_slot_;
    data_[slot] = std::move(t);
    generation_[slot] += 1;
    set_leaf(slot, std::pow(p_max_, alpha_));
    next_slot_ = (next_slot_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

double PERBuffer::probability(std::size_t slot) const {
    return tree_[leaf_base_ + slot] / tree_[1];
}

PERBuffer::Sample PERBuffer::sample(std::size_t batch, std::uint64_t rng_seed) {
    if (size_ < batch) throw std::runtime_error("underfilled buffer");
    Rng rng(rng_seed);
    const double total = tree_[1];
    const double n = static_cast<double>(size_);

    Sample out;
    out.handles.reserve(batch);
    out.transitions.reserve(batch);
    out.is_weights.reserve(batch);
    double w_max = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const double mass = (static_cast<double>(i) + rng.uniform01()) /
                            static_cast<double>(batch) * total;
        const std::size_t slot = descend(mass);
        out.handles.push_back(generation_[slot] * capacity_ + slot);
        out.transitions.push_back(&data_[slot]);
        const double p = tree_[leaf_base_ + slot] / total;
        const double w = std::pow(n * p, -beta_);
        out.is_weights.push_back(w);
        w_max = std::max(w_max, w);
    }
    for (auto& w : out.is_weights) w /= w_max;
    return out;
}

void PERBuffer::update_priorities(const std::vector<std::uint64_t>& handles,
                                  const std::vector<double>& td_errors) {
    for (std::size_t i = 0; i < handles.size() && i < td_errors.size(); ++i) {
        const std::size_t slot = handles[i] % capacity_;
        const std::uint64_t gen = handles[i] / capacity_;
        if (generation_[slot] != gen) {
            stale_skips_ += 1;  // the slot was overwritten since sampling
            continue;
        }
        const double p = std::abs(td_errors[i]) + floor_;
        set_leaf(slot, std::pow(p, alpha_));
        p_max_ = std::max(p_max_, p);
    }
}

void PERBuffer::anneal_beta(double fraction_complete) {
    const double f = std::clamp(fraction_complete, 0.0, 1.0);
    beta_ = beta_start_ + f * (beta_end_ - beta_start_);
}

}  // namespace swiftnav
