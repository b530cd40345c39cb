#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hswd/matrix.hpp"
#include "hswd/rng.hpp"

namespace hswd {

/// One dense layer; tanh follows every layer, including the last.
struct Layer {
  RealMatrix weight;         // out x in
  std::vector<double> bias;  // out
};

/// Small feed-forward hash function h: R^input_dim -> (-1,1)^code_dim.
struct HashNet {
  std::vector<Layer> layers;
  std::size_t input_dim = 0;
  std::size_t code_dim = 0;
};

/// Activations recorded by forward for the backward pass. post[k] is the
/// tanh output of layer k; input is the batch the pass started from.
struct ForwardCache {
  RealMatrix input;
  std::vector<RealMatrix> post;
};

/// Per-layer parameter gradients, shapes mirroring the owning HashNet.
struct GradientSet {
  std::vector<Layer> layers;
};

/// Adaptive-moment optimizer state. Moment buffers are shaped like the
/// network parameters; step counts applied updates for bias correction.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<Layer> first_moment;
  std::vector<Layer> second_moment;
};

/// Weights drawn gaussian with standard deviation sqrt(2/(fan_in+fan_out)),
/// biases zero. Layer dims chain input_dim -> hidden... -> m.
HashNet init_net(std::size_t input_dim, std::span<const std::size_t> hidden_dims,
                 std::size_t m, Rng& rng);

/// Batch forward pass; every output coordinate lies in (-1, 1). Pass a cache
/// to record activations for backward.
RealMatrix forward(const HashNet& net, const RealMatrix& x, ForwardCache* cache = nullptr);

/// Exact reverse-mode gradients of sum(upstream * output) with respect to
/// all parameters.
GradientSet backward(const HashNet& net, const ForwardCache& cache, const RealMatrix& upstream);

AdamState make_adam(const HashNet& net, double lr = 1e-3, double beta1 = 0.9,
                    double beta2 = 0.999, double eps = 1e-8);

/// Standard bias-corrected adaptive-moment update, applied in place.
void adam_step(HashNet& net, const GradientSet& grads, AdamState& state);

/// HNET checkpoint format: magic "HNET", u32 layer count, then u32 in/out
/// dims per layer (little-endian), then f64 parameters in layer order,
/// weights (row-major, out x in) before biases.
void save_net(const HashNet& net, const std::string& path);
HashNet load_net(const std::string& path);

}  // namespace hswd
