#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hswd/net.hpp"
#include "test_util.hpp"

using hswd::ForwardCache;
using hswd::GradientSet;
using hswd::HashNet;
using hswd::RealMatrix;
using hswd::Rng;

namespace {

HashNet small_net(std::uint64_t seed = 71) {
  Rng rng(seed);
  const std::vector<std::size_t> hidden{4};
  return hswd::init_net(2, hidden, 2, rng);
}

}  // namespace

TEST_CASE("init_net shapes, zero biases, determinism") {
  Rng rng(42);
  const std::vector<std::size_t> hidden{16};
  const auto net = hswd::init_net(2, hidden, 2, rng);
  REQUIRE(net.layers.size() == 2);
  CHECK(net.layers[0].weight.rows() == 16);
  CHECK(net.layers[0].weight.cols() == 2);
  CHECK(net.layers[0].bias.size() == 16);
  CHECK(net.layers[1].weight.rows() == 2);
  CHECK(net.layers[1].weight.cols() == 16);
  CHECK(net.layers[1].bias.size() == 2);
  for (const auto& layer : net.layers) {
    for (double b : layer.bias) CHECK(b == 0.0);
  }

  Rng r1(9), r2(9);
  const auto n1 = hswd::init_net(3, hidden, 4, r1);
  const auto n2 = hswd::init_net(3, hidden, 4, r2);
  for (std::size_t k = 0; k < n1.layers.size(); ++k) {
    CHECK(n1.layers[k].weight == n2.layers[k].weight);
  }
}

TEST_CASE("forward: zero parameters map everything to zero, outputs stay in (-1,1)") {
  HashNet net = small_net();
  for (auto& layer : net.layers) {
    std::fill(layer.weight.data(), layer.weight.data() + layer.weight.size(), 0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
  Rng rng(5);
  const auto x = hswd::gauss_matrix(rng, 3, 2);
  const auto z = hswd::forward(net, x);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z.data()[i] == 0.0);

  const HashNet live = small_net();
  const auto z2 = hswd::forward(live, x);
  for (std::size_t i = 0; i < z2.size(); ++i) CHECK(std::abs(z2.data()[i]) < 1.0);
  CHECK(hswd::forward(live, x) == z2);

  const RealMatrix bad(3, 5);
  CHECK_THROWS_AS(hswd::forward(live, bad), std::invalid_argument);
}

TEST_CASE("backward matches finite differences on a 2-4-2 net") {
  Rng rng(73);
  const HashNet net = small_net(73);
  const auto x = hswd::gauss_matrix(rng, 3, 2);
  auto upstream = hswd::gauss_matrix(rng, 3, 2);

  ForwardCache cache;
  hswd::forward(net, x, &cache);
  const GradientSet grads = hswd::backward(net, cache, upstream);

  // loss(theta) = sum(upstream * forward(theta, x)); perturb every parameter
  const double step = 1e-5;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    HashNet probe = net;
    for (std::size_t i = 0; i < net.layers[k].weight.size(); ++i) {
      auto eval = [&](double delta) {
        probe.layers[k].weight.data()[i] = net.layers[k].weight.data()[i] + delta;
        const auto out = hswd::forward(probe, x);
        double acc = 0.0;
        for (std::size_t t = 0; t < out.size(); ++t) acc += upstream.data()[t] * out.data()[t];
        return acc;
      };
      const double fd = (eval(step) - eval(-step)) / (2.0 * step);
      probe.layers[k].weight.data()[i] = net.layers[k].weight.data()[i];
      const double analytic = grads.layers[k].weight.data()[i];
      CHECK(std::abs(fd - analytic) <=
            1e-5 * std::max({std::abs(fd), std::abs(analytic), 1e-10}));
    }
    for (std::size_t i = 0; i < net.layers[k].bias.size(); ++i) {
      auto eval = [&](double delta) {
        probe.layers[k].bias[i] = net.layers[k].bias[i] + delta;
        const auto out = hswd::forward(probe, x);
        double acc = 0.0;
        for (std::size_t t = 0; t < out.size(); ++t) acc += upstream.data()[t] * out.data()[t];
        return acc;
      };
      const double fd = (eval(step) - eval(-step)) / (2.0 * step);
      probe.layers[k].bias[i] = net.layers[k].bias[i];
      const double analytic = grads.layers[k].bias[i];
      CHECK(std::abs(fd - analytic) <=
            1e-5 * std::max({std::abs(fd), std::abs(analytic), 1e-10}));
    }
  }
}

TEST_CASE("backward is linear in the upstream signal") {
  Rng rng(79);
  const HashNet net = small_net(79);
  const auto x = hswd::gauss_matrix(rng, 3, 2);
  ForwardCache cache;
  hswd::forward(net, x, &cache);

  RealMatrix zeros(3, 2);
  const auto zero_grads = hswd::backward(net, cache, zeros);
  for (const auto& layer : zero_grads.layers) {
    for (std::size_t i = 0; i < layer.weight.size(); ++i) CHECK(layer.weight.data()[i] == 0.0);
    for (double b : layer.bias) CHECK(b == 0.0);
  }

  auto upstream = hswd::gauss_matrix(rng, 3, 2);
  const auto g1 = hswd::backward(net, cache, upstream);
  RealMatrix doubled = upstream;
  for (std::size_t i = 0; i < doubled.size(); ++i) doubled.data()[i] *= 2.0;
  const auto g2 = hswd::backward(net, cache, doubled);
  for (std::size_t k = 0; k < g1.layers.size(); ++k) {
    for (std::size_t i = 0; i < g1.layers[k].weight.size(); ++i) {
      CHECK(g2.layers[k].weight.data()[i] ==
            doctest::Approx(2.0 * g1.layers[k].weight.data()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("adam first step on a scalar parameter") {
  HashNet net;
  net.input_dim = 1;
  net.code_dim = 1;
  net.layers.push_back({RealMatrix(1, 1), {0.0}});

  GradientSet grads;
  grads.layers.push_back({RealMatrix(1, 1, {1.0}), {0.0}});

  auto state = hswd::make_adam(net);
  hswd::adam_step(net, grads, state);
  // bias-corrected m_hat = 1, v_hat = 1: step = -lr / (1 + eps)
  CHECK(net.layers[0].weight(0, 0) == doctest::Approx(-0.001).epsilon(1e-7));
  CHECK(net.layers[0].bias[0] == 0.0);
  CHECK(state.step == 1);
}

TEST_CASE("adam leaves parameters alone under zero gradients") {
  HashNet net = small_net(83);
  const HashNet before = net;
  GradientSet zeros;
  for (const auto& layer : net.layers) {
    zeros.layers.push_back(
        {RealMatrix(layer.weight.rows(), layer.weight.cols()),
         std::vector<double>(layer.bias.size(), 0.0)});
  }
  auto state = hswd::make_adam(net);
  hswd::adam_step(net, zeros, state);
  CHECK(state.step == 1);
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    CHECK(net.layers[k].weight == before.layers[k].weight);
    CHECK(net.layers[k].bias == before.layers[k].bias);
  }
}

TEST_CASE("adam trajectories are deterministic") {
  auto run = [] {
    HashNet net = small_net(89);
    auto state = hswd::make_adam(net);
    Rng rng(97);
    for (int step = 0; step < 5; ++step) {
      GradientSet grads;
      for (const auto& layer : net.layers) {
        hswd::Layer g{RealMatrix(layer.weight.rows(), layer.weight.cols()),
                      std::vector<double>(layer.bias.size())};
        for (std::size_t i = 0; i < g.weight.size(); ++i) g.weight.data()[i] = rng.gaussian();
        for (auto& b : g.bias) b = rng.gaussian();
        grads.layers.push_back(std::move(g));
      }
      hswd::adam_step(net, grads, state);
    }
    return net;
  };
  const auto n1 = run();
  const auto n2 = run();
  for (std::size_t k = 0; k < n1.layers.size(); ++k) {
    CHECK(n1.layers[k].weight == n2.layers[k].weight);
    CHECK(n1.layers[k].bias == n2.layers[k].bias);
  }
}

TEST_CASE("HNET checkpoint round trip and header layout") {
  const HashNet net = small_net(101);
  const auto path = std::filesystem::temp_directory_path() / "hswd_test_model.hnet";
  hswd::save_net(net, path.string());

  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "HNET");
  // header: magic + layer count + 2 u32 dims per layer, then f64 parameters
  const std::size_t params = 4 * 2 + 4 + 2 * 4 + 2;
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 2 * 4 * 2 + params * 8);

  const auto loaded = hswd::load_net(path.string());
  CHECK(loaded.input_dim == net.input_dim);
  CHECK(loaded.code_dim == net.code_dim);
  REQUIRE(loaded.layers.size() == net.layers.size());
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    CHECK(loaded.layers[k].weight == net.layers[k].weight);
    CHECK(loaded.layers[k].bias == net.layers[k].bias);
  }
  std::filesystem::remove(path);
}
