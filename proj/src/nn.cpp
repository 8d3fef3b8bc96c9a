#include "swiftnav/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "swiftnav/rng.hpp"

namespace swiftnav {

std::size_t DenseNet::param_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.w.size() + l.b.size();
    return n;
}

DenseNet make_net(const std::vector<std::size_t>& dims, OutputActivation output,
                  double output_scale, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("make_net: need at least two dims");
    DenseNet net;
    net.dims = dims;
    net.output = output;
    net.output_scale = output_scale;
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        DenseLayer layer;
        layer.in = dims[i];
        layer.out = dims[i + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        layer.w.resize(layer.in * layer.out);
        layer.b.resize(layer.out);
        for (auto& v : layer.w) v = rng.uniform(-bound, bound);
        for (auto& v : layer.b) v = rng.uniform(-bound, bound);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

namespace {

void layer_affine(const DenseLayer& layer, const std::vector<double>& x, std::vector<double>& z) {
    z.assign(layer.out, 0.0);
    for (std::size_t r = 0; r < layer.out; ++r) {
        const double* row = layer.w.data() + r * layer.in;
        double acc = layer.b[r];
        for (std::size_t c = 0; c < layer.in; ++c) acc += row[c] * x[c];
        z[r] = acc;
    }
}

void apply_output_activation(const DenseNet& net, std::vector<double>& z) {
    if (net.output == OutputActivation::bounded) {
        for (auto& v : z) v = net.output_scale * std::tanh(v);
    }
}

}  // namespace

std::vector<double> forward(const DenseNet& net, const std::vector<double>& input) {
    if (input.size() != net.input_dim())
        throw std::invalid_argument("forward: input length does not match first layer");
    std::vector<double> x = input;
    std::vector<double> z;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        layer_affine(net.layers[i], x, z);
        if (i + 1 < net.layers.size()) {
            for (auto& v : z)
                if (v < 0.0) v = 0.0;
        } else {
            apply_output_activation(net, z);
        }
        x.swap(z);
    }
    return x;
}

std::vector<double> forward_cached(const DenseNet& net, const std::vector<double>& input,
                                   ForwardCache& cache) {
    if (input.size() != net.input_dim())
        throw std::invalid_argument("forward: input length does not match first layer");
    cache.acts.assign(net.layers.size() + 1, {});
    cache.acts[0] = input;
    std::vector<double> z;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        layer_affine(net.layers[i], cache.acts[i], z);
        if (i + 1 < net.layers.size()) {
            for (auto& v : z)
                if (v < 0.0) v = 0.0;
        } else {
            apply_output_activation(net, z);
        }
        cache.acts[i + 1] = z;
    }
    return cache.acts.back();
}

NetGradients zero_gradients(const DenseNet& net) {
    NetGradients g;
    g.w.resize(net.layers.size());
    g.b.resize(net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        g.w[i].assign(net.layers[i].w.size(), 0.0);
        g.b[i].assign(net.layers[i].b.size(), 0.0);
    }
    return g;
}

std::vector<double> backward(const DenseNet& net, const ForwardCache& cache,
                             const std::vector<double>& output_grad, NetGradients& grads) {
    const std::size_t nl = net.layers.size();
    if (cache.acts.size() != nl + 1)
        throw std::invalid_argument("backward: cache does not match net");
    if (output_grad.size() != net.output_dim())
        throw std::invalid_argument("backward: output_grad length mismatch");

    // Gradient w.r.t. the pre-activation of the current layer, walking back.
    std::vector<double> gz = output_grad;
    if (net.output == OutputActivation::bounded) {
        const auto& y = cache.acts[nl];
        for (std::size_t r = 0; r < gz.size(); ++r) {
            const double t = y[r] / net.output_scale;
            gz[r] *= net.output_scale * (1.0 - t * t);
        }
    }
    std::vector<double> gx;
    for (std::size_t li = nl; li-- > 0;) {
        const DenseLayer& layer = net.layers[li];
        const auto& x = cache.acts[li];
        double* gw = grads.w[li].data();
        for (std::size_t r = 0; r < layer.out; ++r) {
            const double g = gz[r];
            grads.b[li][r] += g;
            double* row = gw + r * layer.in;
            for (std::size_t c = 0; c < layer.in; ++c) row[c] += g * x[c];
        }
        gx.assign(layer.in, 0.0);
        for (std::size_t r = 0; r < layer.out; ++r) {
            const double g = gz[r];
            const double* row = layer.w.data() + r * layer.in;
            for (std::size_t c = 0; c < layer.in; ++c) gx[c] += g * row[c];
        }
        if (li > 0) {
            // Rectifier derivative: the cached activation is max(0, z), so a
            // positive activation marks an active unit.
            const auto& a = cache.acts[li];
            for (std::size_t c = 0; c < layer.in; ++c)
                if (a[c] <= 0.0) gx[c] = 0.0;
        }
        gz.swap(gx);
    }
    return gz;
}

double gradient_norm(const NetGradients& grads) {
    double sq = 0.0;
    for (const auto& v : grads.w)
        for (double g : v) sq += g * g;
    for (const auto& v : grads.b)
        for (double g : v) sq += g * g;
    return std::sqrt(sq);
}

void apply_sgd(DenseNet& net, const NetGradients& grads, double lr, double clip) {
    double scale = 1.0;
    if (clip > 0.0) {
        const double norm = gradient_norm(grads);
        if (norm > clip) scale = clip / norm;
    }
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        auto& layer = net.layers[li];
        for (std::size_t i = 0; i < layer.w.size(); ++i) layer.w[i] -= lr * scale * grads.w[li][i];
        for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b[i] -= lr * scale * grads.b[li][i];
    }
}

void soft_update(const DenseNet& live, DenseNet& target, double tau) {
    if (live.dims != target.dims)
        throw std::invalid_argument("soft_update: shape mismatch");
    if (tau == 0.0) return;
    if (tau == 1.0) {
        for (std::size_t li = 0; li < live.layers.size(); ++li) {
            target.layers[li].w = live.layers[li].w;
            target.layers[li].b = live.layers[li].b;
        }
        return;
    }
    for (std::size_t li = 0; li < live.layers.size(); ++li) {
        const auto& src = live.layers[li];
        auto& dst = target.layers[li];
        for (std::size_t i = 0; i < src.w.size(); ++i)
            dst.w[i] = tau * src.w[i] + (1.0 - tau) * dst.w[i];
        for (std::size_t i = 0; i < src.b.size(); ++i)
            dst.b[i] = tau * src.b[i] + (1.0 - tau) * dst.b[i];
    }
}

std::vector<double> flatten_params(const DenseNet& net) {
    std::vector<double> flat;
    flat.reserve(net.param_count());
    for (const auto& l : net.layers) {
        flat.insert(flat.end(), l.w.begin(), l.w.end());
        flat.insert(flat.end(), l.b.begin(), l.b.end());
    }
    return flat;
}

void set_params(DenseNet& net, const std::vector<double>& flat) {
    if (flat.size() != net.param_count())
        throw std::invalid_argument("set_params: length mismatch");
    std::size_t k = 0;
    for (auto& l : net.layers) {
        for (auto& v : l.w) v = flat[k++];
        for (auto& v : l.b) v = flat[k++];
    }
}

std::vector<double> flatten_grads(const DenseNet& net, const NetGradients& grads) {
    std::vector<double> flat;
    flat.reserve(net.param_count());
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        flat.insert(flat.end(), grads.w[li].begin(), grads.w[li].end());
        flat.insert(flat.end(), grads.b[li].begin(), grads.b[li].end());
    }
    return flat;
}

}  // namespace swiftnav
