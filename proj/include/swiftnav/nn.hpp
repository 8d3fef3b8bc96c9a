#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace swiftnav {

// Output nonlinearity of a DenseNet. Hidden layers are always rectified.
enum class OutputActivation { linear, bounded };

// One fully connected layer. Weights are row-major: w[r * in + c] connects
// input c to output r.
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w;
    std::vector<double> b;
};

// Feedforward net: affine layers with ReLU between them and either a linear
// or a scaled-tanh ("bounded") output. All parameters are 64-bit reals.
struct DenseNet {
    std::vector<std::size_t> dims;
    std::vector<DenseLayer> layers;
    OutputActivation output = OutputActivation::linear;
    double output_scale = 1.0;

    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
    std::size_t param_count() const;
};

// Per-layer parameter gradients, same shapes as the net they belong to.
struct NetGradients {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;
};

// Activations recorded by forward_cached, consumed by backward.
// acts[0] is the input; acts[i] is the output of layer i-1.
struct ForwardCache {
    std::vector<std::vector<double>> acts;
};

// Fresh net with uniform fan-in initialization: every weight and bias of a
// layer is drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)), deterministically
// from the seed.
DenseNet make_net(const std::vector<std::size_t>& dims, OutputActivation output,
                  double output_scale, std::uint64_t seed);

// Single-sample forward pass. Throws std::invalid_argument on a shape
// mismatch between the input and the first layer.
std::vector<double> forward(const DenseNet& net, const std::vector<double>& input);

// Forward pass that records every activation for a later backward call.
std::vector<double> forward_cached(const DenseNet& net, const std::vector<double>& input,
                                   ForwardCache& cache);

// Zero-filled gradient holder shaped like the net.
NetGradients zero_gradients(const DenseNet& net);

// Reverse-mode pass for one sample: given dLoss/dOutput, accumulates
// dLoss/dParam into grads and returns dLoss/dInput.
std::vector<double> backward(const DenseNet& net, const ForwardCache& cache,
                             const std::vector<double>& output_grad, NetGradients& grads);

// Euclidean norm over every entry of the gradient holder.
double gradient_norm(const NetGradients& grads);

// Plain gradient-descent step p -= lr * g, after scaling the whole gradient
// so its global norm does not exceed clip (clip <= 0 disables clipping).
void apply_sgd(DenseNet& net, const NetGradients& grads, double lr, double clip);

// theta' <- tau * theta + (1 - tau) * theta'. Nets must share shapes.
void soft_update(const DenseNet& live, DenseNet& target, double tau);

// Parameter (de)serialization in layer order: for each layer, weights
// row-major then biases. Used by checkpoints and by numeric test oracles.
std::vector<double> flatten_params(const DenseNet& net);
void set_params(DenseNet& net, const std::vector<double>& flat);
std::vector<double> flatten_grads(const DenseNet& net, const NetGradients& grads);

}  // namespace swiftnav
