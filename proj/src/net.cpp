#include "hswd/net.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "io_util.hpp"

namespace hswd {

namespace {

void check_shapes(const HashNet& net, const GradientSet& grads) {
  if (grads.layers.size() != net.layers.size()) {
    throw std::invalid_argument("gradient set does not match network layer count");
  }
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const Layer& p = net.layers[k];
    const Layer& g = grads.layers[k];
    if (g.weight.rows() != p.weight.rows() || g.weight.cols() != p.weight.cols() ||
        g.bias.size() != p.bias.size()) {
      throw std::invalid_argument("gradient shapes do not match network parameters");
    }
  }
}

std::vector<Layer> zeros_like(const HashNet& net) {
  std::vector<Layer> out;
  out.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    out.push_back({RealMatrix(layer.weight.rows(), layer.weight.cols()),
                   std::vector<double>(layer.bias.size(), 0.0)});
  }
  return out;
}

}  // namespace

HashNet init_net(std::size_t input_dim, std::span<const std::size_t> hidden_dims,
                 std::size_t m, Rng& rng) {
  if (input_dim == 0 || m == 0) {
    throw std::invalid_argument("init_net: dimensions must be >= 1");
  }
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw std::invalid_argument("init_net: hidden dims must be >= 1");
  }

  std::vector<std::size_t> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(m);

  HashNet net;
  net.input_dim = input_dim;
  net.code_dim = m;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const std::size_t fan_in = dims[k];
    const std::size_t fan_out = dims[k + 1];
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
    Layer layer{RealMatrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0)};
    for (std::size_t i = 0; i < fan_out * fan_in; ++i) {
      layer.weight.data()[i] = sd * rng.gaussian();
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

RealMatrix forward(const HashNet& net, const RealMatrix& x, ForwardCache* cache) {
  if (x.cols() != net.input_dim) {
    throw std::invalid_argument("forward: input columns must equal input_dim");
  }
  if (cache != nullptr) {
    cache->input = x;
    cache->post.clear();
    cache->post.reserve(net.layers.size());
  }

  RealMatrix current = x;
  for (const Layer& layer : net.layers) {
    const std::size_t out_dim = layer.weight.rows();
    const std::size_t in_dim = layer.weight.cols();
    RealMatrix next(current.rows(), out_dim);
    for (std::size_t i = 0; i < current.rows(); ++i) {
      const double* in_row = current.data() + i * in_dim;
      for (std::size_t o = 0; o < out_dim; ++o) {
        const double* w_row = layer.weight.data() + o * in_dim;
        double acc = layer.bias[o];
        for (std::size_t j = 0; j < in_dim; ++j) acc += w_row[j] * in_row[j];
        next(i, o) = std::tanh(acc);
      }
    }
    if (cache != nullptr) cache->post.push_back(next);
    current = std::move(next);
  }
  return current;
}

GradientSet backward(const HashNet& net, const ForwardCache& cache, const RealMatrix& upstream) {
  if (cache.post.size() != net.layers.size()) {
    throw std::invalid_argument("backward: cache does not match network");
  }
  const RealMatrix& output = cache.post.back();
  if (upstream.rows() != output.rows() || upstream.cols() != output.cols()) {
    throw std::invalid_argument("backward: upstream shape must match forward output");
  }

  GradientSet grads;
  grads.layers = zeros_like(net);

  // delta = dLoss/d(pre-activation) of the current layer.
  RealMatrix delta(upstream.rows(), upstream.cols());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double a = output.data()[i];
    delta.data()[i] = upstream.data()[i] * (1.0 - a * a);
  }

  for (std::size_t k = net.layers.size(); k-- > 0;) {
    const Layer& layer = net.layers[k];
    const RealMatrix& input = (k == 0) ? cache.input : cache.post[k - 1];
    const std::size_t out_dim = layer.weight.rows();
    const std::size_t in_dim = layer.weight.cols();

    Layer& g = grads.layers[k];
    for (std::size_t i = 0; i < delta.rows(); ++i) {
      const double* d_row = delta.data() + i * out_dim;
      const double* in_row = input.data() + i * in_dim;
      for (std::size_t o = 0; o < out_dim; ++o) {
        const double d = d_row[o];
        g.bias[o] += d;
        double* gw_row = g.weight.data() + o * in_dim;
        for (std::size_t j = 0; j < in_dim; ++j) gw_row[j] += d * in_row[j];
      }
    }

    if (k == 0) break;
    RealMatrix prev_delta(delta.rows(), in_dim);
    for (std::size_t i = 0; i < delta.rows(); ++i) {
      const double* d_row = delta.data() + i * out_dim;
      const double* a_row = input.data() + i * in_dim;
      for (std::size_t j = 0; j < in_dim; ++j) {
        double acc = 0.0;
        for (std::size_t o = 0; o < out_dim; ++o) {
          acc += d_row[o] * layer.weight(o, j);
        }
        prev_delta(i, j) = acc * (1.0 - a_row[j] * a_row[j]);
      }
    }
    delta = std::move(prev_delta);
  }
  return grads;
}

AdamState make_adam(const HashNet& net, double lr, double beta1, double beta2, double eps) {
  AdamState state;
  state.lr = lr;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.eps = eps;
  state.first_moment = zeros_like(net);
  state.second_moment = zeros_like(net);
  return state;
}

void adam_step(HashNet& net, const GradientSet& grads, AdamState& state) {
  check_shapes(net, grads);
  if (state.first_moment.size() != net.layers.size()) {
    throw std::invalid_argument("adam_step: state does not match network");
  }

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  auto update = [&](double& param, double grad, double& m, double& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * grad;
    v = state.beta2 * v + (1.0 - state.beta2) * grad * grad;
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    param -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  };

  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    Layer& p = net.layers[k];
    const Layer& g = grads.layers[k];
    Layer& m = state.first_moment[k];
    Layer& v = state.second_moment[k];
    for (std::size_t i = 0; i < p.weight.size(); ++i) {
      update(p.weight.data()[i], g.weight.data()[i], m.weight.data()[i], v.weight.data()[i]);
    }
    for (std::size_t i = 0; i < p.bias.size(); ++i) {
      update(p.bias[i], g.bias[i], m.bias[i], v.bias[i]);
    }
  }
}

void save_net(const HashNet& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_net: cannot open " + path);
  detail::write_magic(os, "HNET");
  detail::write_u32_le(os, static_cast<std::uint32_t>(net.layers.size()));
  for (const Layer& layer : net.layers) {
    detail::write_u32_le(os, static_cast<std::uint32_t>(layer.weight.cols()));
    detail::write_u32_le(os, static_cast<std::uint32_t>(layer.weight.rows()));
  }
  for (const Layer& layer : net.layers) {
    for (std::size_t i = 0; i < layer.weight.size(); ++i) {
      detail::write_f64_le(os, layer.weight.data()[i]);
    }
    for (double b : layer.bias) detail::write_f64_le(os, b);
  }
  if (!os) throw IoError("save_net: write failed for " + path);
}

HashNet load_net(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_net: cannot open " + path);
  detail::expect_magic(is, "HNET", "load_net");
  const std::uint32_t layer_count = detail::read_u32_le(is);
  if (layer_count == 0) throw IoError("load_net: no layers");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims(layer_count);
  for (auto& [in_dim, out_dim] : dims) {
    in_dim = detail::read_u32_le(is);
    out_dim = detail::read_u32_le(is);
    if (in_dim == 0 || out_dim == 0) throw IoError("load_net: zero layer dimension");
  }
  for (std::size_t k = 1; k < dims.size(); ++k) {
    if (dims[k].first != dims[k - 1].second) {
      throw IoError("load_net: layer dimensions do not chain");
    }
  }

  HashNet net;
  net.input_dim = dims.front().first;
  net.code_dim = dims.back().second;
  for (const auto& [in_dim, out_dim] : dims) {
    Layer layer{RealMatrix(out_dim, in_dim), std::vector<double>(out_dim)};
    for (std::size_t i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = detail::read_f64_le(is);
    }
    for (double& b : layer.bias) b = detail::read_f64_le(is);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace hswd
