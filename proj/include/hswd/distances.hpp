#pragma once

#include <span>
#include <vector>

#include "hswd/matrix.hpp"
#include "hswd/rng.hpp"

namespace hswd {

/// A batch of N samples of m-dimensional codes, one row per sample.
using SampleBatch = RealMatrix;

/// L unit-norm projection directions, one per row.
struct SliceSet {
  RealMatrix directions;  // L x m, each row unit Euclidean norm

  std::size_t count() const { return directions.rows(); }
  std::size_t dim() const { return directions.cols(); }
};

/// Below this value a distance is treated as zero and its gradient is the
/// zero matrix (subgradient choice at the minimum of the outer square root).
inline constexpr double kZeroDistanceEps = 1e-12;

/// n x m batch with every entry drawn independently and equiprobably from
/// {-1, +1}: the target distribution of well-quantized, balanced codes.
SampleBatch sample_binary_target(std::size_t n, std::size_t m, Rng& rng);

/// L directions sampled uniformly on the unit sphere in R^m (gaussian draw,
/// normalized to unit norm).
SliceSet sample_slices(std::size_t count, std::size_t m, Rng& rng);

/// The m coordinate axes as a SliceSet; swd with these slices equals hswd.
SliceSet coordinate_axes(std::size_t m);

/// Squared empirical Wasserstein-2 distance between two one-dimensional
/// samples of equal size N:
///
///   (1/N) * sum_i (a_(i) - b_(i))^2
///
/// where a_(i), b_(i) are ascending order statistics (stable sort by value,
/// ties by original index). For equal-weight empirical measures the monotone
/// pairing is the optimal transport plan, so this is the exact squared W2.
double wasserstein1d_sq(std::span<const double> a, std::span<const double> b);

/// Gradient of wasserstein1d_sq with respect to a, scattered back to the
/// original positions: grad[index of a_(i)] = (2/N) * (a_(i) - b_(i)).
/// b is treated as constant. At ties the subgradient induced by the stable
/// sort order is returned.
std::vector<double> wasserstein1d_grad(std::span<const double> a, std::span<const double> b);

/// Sliced Wasserstein distance between equal-shape batches:
///
///   sqrt( (1/L) * sum_l wasserstein1d_sq(z w_l, b w_l) )
///
/// where z w_l projects each row of z onto direction w_l. Uses the
/// squared-then-rooted convention so that slicing along the coordinate axes
/// reproduces hswd exactly.
double swd(const SampleBatch& z, const SampleBatch& b, const SliceSet& slices);

/// Gradient of swd with respect to z (N x m). Chain rule through the outer
/// square root, the mean over slices, the per-slice 1D gradient, and the
/// projection: slice l contributes g_i * w_l to row i. Returns the zero
/// matrix when the distance is below kZeroDistanceEps.
RealMatrix swd_grad(const SampleBatch& z, const SampleBatch& b, const SliceSet& slices);

/// Coordinate-axis sliced Wasserstein distance:
///
///   sqrt( (1/m) * sum_l wasserstein1d_sq(z column l, b column l) )
///
/// The slices are the m axes of the code space itself, so no projection or
/// direction sampling is needed; cost is m column sorts of length N.
double hswd(const SampleBatch& z, const SampleBatch& b);

/// Gradient of hswd with respect to z (N x m); per-column 1D gradients scaled
/// by 1/(2 * hswd * m), zero matrix below kZeroDistanceEps.
RealMatrix hswd_grad(const SampleBatch& z, const SampleBatch& b);

}  // namespace hswd
