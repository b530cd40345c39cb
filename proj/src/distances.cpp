#include "hswd/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hswd {

namespace {

// Ascending stable argsort: ties keep original order, which fixes the
// subgradient at tied values.
std::vector<std::size_t> stable_order(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  return idx;
}

void check_batch_pair(const SampleBatch& z, const SampleBatch& b) {
  if (z.rows() != b.rows() || z.cols() != b.cols()) {
    throw std::invalid_argument("batch shapes must match");
  }
  if (z.rows() == 0 || z.cols() == 0) {
    throw std::invalid_argument("batches must be non-empty");
  }
}

// Projection of every row of z onto direction w (length m).
std::vector<double> project(const SampleBatch& z, std::span<const double> w) {
  std::vector<double> out(z.rows());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double* row = z.data() + i * z.cols();
    double acc = 0.0;
    for (std::size_t k = 0; k < z.cols(); ++k) acc += row[k] * w[k];
    out[i] = acc;
  }
  return out;
}

}  // namespace

SampleBatch sample_binary_target(std::size_t n, std::size_t m, Rng& rng) {
  if (n == 0 || m == 0) {
    throw std::invalid_argument("sample_binary_target: dimensions must be >= 1");
  }
  SampleBatch out(n, m);
  for (std::size_t i = 0; i < n * m; ++i) {
    out.data()[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return out;
}

SliceSet sample_slices(std::size_t count, std::size_t m, Rng& rng) {
  if (count == 0 || m == 0) {
    throw std::invalid_argument("sample_slices: dimensions must be >= 1");
  }
  RealMatrix dirs(count, m);
  for (std::size_t l = 0; l < count; ++l) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double g = rng.gaussian();
        dirs(l, k) = g;
        norm_sq += g * g;
      }
    } while (norm_sq == 0.0);  // all-zero gaussian draw has measure zero
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t k = 0; k < m; ++k) dirs(l, k) *= inv;
  }
  return SliceSet{std::move(dirs)};
}

SliceSet coordinate_axes(std::size_t m) {
  if (m == 0) throw std::invalid_argument("coordinate_axes: m must be >= 1");
  RealMatrix dirs(m, m);
  for (std::size_t l = 0; l < m; ++l) dirs(l, l) = 1.0;
  return SliceSet{std::move(dirs)};
}

double wasserstein1d_sq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wasserstein1d_sq: inputs must have equal length");
  }
  if (a.empty()) {
    throw std::invalid_argument("wasserstein1d_sq: inputs must be non-empty");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double diff = sa[i] - sb[i];
    acc += diff * diff;
  }
  return acc / static_cast<double>(sa.size());
}

std::vector<double> wasserstein1d_grad(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wasserstein1d_grad: inputs must have equal length");
  }
  if (a.empty()) {
    throw std::invalid_argument("wasserstein1d_grad: inputs must be non-empty");
  }
  const std::vector<std::size_t> order_a = stable_order(a);
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sb.begin(), sb.end());

  const double scale = 2.0 / static_cast<double>(a.size());
  std::vector<double> grad(a.size());
  for (std::size_t rank = 0; rank < a.size(); ++rank) {
    grad[order_a[rank]] = scale * (a[order_a[rank]] - sb[rank]);
  }
  return grad;
}

double swd(const SampleBatch& z, const SampleBatch& b, const SliceSet& slices) {
  check_batch_pair(z, b);
  if (slices.dim() != z.cols()) {
    throw std::invalid_argument("swd: slice dimension must match batch columns");
  }
  if (slices.count() == 0) {
    throw std::invalid_argument("swd: at least one slice required");
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < slices.count(); ++l) {
    const auto pz = project(z, slices.directions.row(l));
    const auto pb = project(b, slices.directions.row(l));
    acc += wasserstein1d_sq(pz, pb);
  }
  return std::sqrt(acc / static_cast<double>(slices.count()));
}

RealMatrix swd_grad(const SampleBatch& z, const SampleBatch& b, const SliceSet& slices) {
  const double dist = swd(z, b, slices);
  RealMatrix grad(z.rows(), z.cols());
  if (dist < kZeroDistanceEps) return grad;

  // d/dz sqrt(M) = (1/(2 sqrt(M))) dM/dz with M the mean of per-slice
  // squared 1D distances; each 1D gradient component fans out along w_l.
  const double outer = 1.0 / (2.0 * dist * static_cast<double>(slices.count()));
  for (std::size_t l = 0; l < slices.count(); ++l) {
    const auto w = slices.directions.row(l);
    const auto pz = project(z, w);
    const auto pb = project(b, w);
    const auto g = wasserstein1d_grad(pz, pb);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      const double gi = outer * g[i];
      for (std::size_t k = 0; k < z.cols(); ++k) {
        grad(i, k) += gi * w[k];
      }
    }
  }
  return grad;
}

double hswd(const SampleBatch& z, const SampleBatch& b) {
  check_batch_pair(z, b);
  double acc = 0.0;
  for (std::size_t l = 0; l < z.cols(); ++l) {
    acc += wasserstein1d_sq(z.col(l), b.col(l));
  }
  return std::sqrt(acc / static_cast<double>(z.cols()));
}

RealMatrix hswd_grad(const SampleBatch& z, const SampleBatch& b) {
  const double dist = hswd(z, b);
  RealMatrix grad(z.rows(), z.cols());
  if (dist < kZeroDistanceEps) return grad;

  const double outer = 1.0 / (2.0 * dist * static_cast<double>(z.cols()));
  for (std::size_t l = 0; l < z.cols(); ++l) {
    const auto g = wasserstein1d_grad(z.col(l), b.col(l));
    for (std::size_t i = 0; i < z.rows(); ++i) {
      grad(i, l) = outer * g[i];
    }
  }
  return grad;
}

}  // namespace hswd
