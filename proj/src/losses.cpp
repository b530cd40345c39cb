#include "hswd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hswd {

namespace {

constexpr double kBceClamp = 1e-7;

double log1p_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

SimilarityMatrix build_similarity(std::span<const std::uint32_t> labels) {
  SimilarityMatrix sim;
  sim.n = labels.size();
  sim.s.assign(sim.n * sim.n, 0);
  for (std::size_t i = 0; i < sim.n; ++i) {
    for (std::size_t j = 0; j < sim.n; ++j) {
      sim.s[i * sim.n + j] = labels[i] == labels[j] ? 1 : 0;
    }
  }
  return sim;
}

CentroidTable hadamard_centroids(std::size_t num_classes, std::size_t m) {
  if (!is_power_of_two(m)) {
    throw std::invalid_argument("hadamard_centroids: m must be a power of two");
  }
  if (num_classes == 0 || num_classes > 2 * m) {
    throw std::invalid_argument("hadamard_centroids: num_classes must be in [1, 2m]");
  }

  // Sylvester recursion: H_{2k} = [[H, H], [H, -H]], built in place.
  RealMatrix h(m, m);
  h(0, 0) = 1.0;
  for (std::size_t size = 1; size < m; size *= 2) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        const double v = h(i, j);
        h(i, j + size) = v;
        h(i + size, j) = v;
        h(i + size, j + size) = -v;
      }
    }
  }

  RealMatrix rows(num_classes, m);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const std::size_t base = c % m;
    const double sign = c < m ? 1.0 : -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      rows(c, j) = sign * h(base, j);
    }
  }
  return CentroidTable{std::move(rows)};
}

LossResult pairwise_likelihood_loss(const RealMatrix& z, const SimilarityMatrix& s, double alpha) {
  const std::size_t n = z.rows();
  const std::size_t m = z.cols();
  if (n < 2) throw std::invalid_argument("pairwise_likelihood_loss: need N >= 2");
  if (s.n != n) throw std::invalid_argument("pairwise_likelihood_loss: similarity size mismatch");
  if (alpha <= 0.0) throw std::invalid_argument("pairwise_likelihood_loss: alpha must be > 0");

  const double pair_count = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double inv_pairs = 1.0 / pair_count;

  LossResult result;
  result.grad = RealMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* zi = z.data() + i * m;
      const double* zj = z.data() + j * m;
      double inner = 0.0;
      for (std::size_t k = 0; k < m; ++k) inner += zi[k] * zj[k];
      const double t = alpha * inner;
      const double sij = static_cast<double>(s.at(i, j));
      result.value += inv_pairs * (log1p_exp(t) - sij * t);

      const double coeff = inv_pairs * alpha * (sigmoid(t) - sij);
      double* gi = result.grad.data() + i * m;
      double* gj = result.grad.data() + j * m;
      for (std::size_t k = 0; k < m; ++k) {
        gi[k] += coeff * zj[k];
        gj[k] += coeff * zi[k];
      }
    }
  }
  return result;
}

LossResult central_similarity_loss(const RealMatrix& z, std::span<const std::uint32_t> labels,
                                   const CentroidTable& centroids) {
  const std::size_t n = z.rows();
  const std::size_t m = z.cols();
  if (labels.size() != n) {
    throw std::invalid_argument("central_similarity_loss: labels must match rows");
  }
  if (centroids.rows.cols() != m) {
    throw std::invalid_argument("central_similarity_loss: centroid width must match columns");
  }
  for (std::uint32_t label : labels) {
    if (label >= centroids.rows.rows()) {
      throw std::invalid_argument("central_similarity_loss: label out of centroid range");
    }
  }

  const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  LossResult result;
  result.grad = RealMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* c_row = centroids.rows.data() + labels[i] * m;
    for (std::size_t k = 0; k < m; ++k) {
      const double t = (c_row[k] + 1.0) / 2.0;
      const double p_raw = (z(i, k) + 1.0) / 2.0;
      const double p = std::clamp(p_raw, kBceClamp, 1.0 - kBceClamp);
      result.value += inv * (-t * std::log(p) - (1.0 - t) * std::log(1.0 - p));
      // The clamp zeroes the gradient outside (eps, 1-eps).
      if (p_raw > kBceClamp && p_raw < 1.0 - kBceClamp) {
        result.grad(i, k) = inv * 0.5 * (-t / p + (1.0 - t) / (1.0 - p));
      }
    }
  }
  return result;
}

ObjectiveResult combined_objective(const RealMatrix& z, const ObjectiveInputs& inputs) {
  if (inputs.lambda < 0.0) {
    throw std::invalid_argument("combined_objective: lambda must be >= 0");
  }

  LossResult ls;
  switch (inputs.ls_kind) {
    case SimilarityKind::pairwise_likelihood:
      if (inputs.similarity == nullptr) {
        throw std::invalid_argument("combined_objective: similarity matrix required");
      }
      ls = pairwise_likelihood_loss(z, *inputs.similarity, inputs.alpha);
      break;
    case SimilarityKind::central_similarity:
      if (inputs.centroids == nullptr) {
        throw std::invalid_argument("combined_objective: centroid table required");
      }
      ls = central_similarity_loss(z, inputs.labels, *inputs.centroids);
      break;
  }

  ObjectiveResult result;
  result.ls = ls.value;
  result.grad = std::move(ls.grad);

  if (inputs.lq_kind != QuantKind::none) {
    if (inputs.target == nullptr) {
      throw std::invalid_argument("combined_objective: target batch required");
    }
    RealMatrix lq_grad;
    if (inputs.lq_kind == QuantKind::hswd) {
      result.lq = hswd(z, *inputs.target);
      lq_grad = hswd_grad(z, *inputs.target);
    } else {
      if (inputs.slices == nullptr) {
        throw std::invalid_argument("combined_objective: slices required for swd");
      }
      result.lq = swd(z, *inputs.target, *inputs.slices);
      lq_grad = swd_grad(z, *inputs.target, *inputs.slices);
    }
    for (std::size_t i = 0; i < result.grad.size(); ++i) {
      result.grad.data()[i] += inputs.lambda * lq_grad.data()[i];
    }
  }

  result.total = result.ls + inputs.lambda * result.lq;
  return result;
}

}  // namespace hswd
