#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hswd/distances.hpp"
#include "hswd/matrix.hpp"

namespace hswd {

/// Pairwise label-agreement matrix: s_ij = 1 iff labels[i] == labels[j].
/// Symmetric with unit diagonal.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<std::uint8_t> s;  // n x n row-major

  std::uint8_t at(std::size_t i, std::size_t j) const { return s[i * n + j]; }
};

SimilarityMatrix build_similarity(std::span<const std::uint32_t> labels);

/// num_classes x m table of {-1,+1} target codes from the Sylvester Hadamard
/// construction: the first m rows of H_m, then their negations. Rows are
/// mutually orthogonal for classes <= m and pairwise Hamming distance m/2.
struct CentroidTable {
  RealMatrix rows;  // num_classes x m, entries in {-1,+1}
};

/// Requires m a power of two and num_classes <= 2m.
CentroidTable hadamard_centroids(std::size_t num_classes, std::size_t m);

struct LossResult {
  double value = 0.0;
  RealMatrix grad;  // same shape as the codes that produced it
};

/// Pairwise similarity-preserving loss over all i<j pairs:
///
///   (1/P) * sum_{i<j} [ log(1 + exp(t_ij)) - s_ij * t_ij ],
///   t_ij = alpha * <z_i, z_j>,  P = N(N-1)/2
///
/// computed in the overflow-safe log1p-of-exp form. Requires N >= 2.
LossResult pairwise_likelihood_loss(const RealMatrix& z, const SimilarityMatrix& s, double alpha);

/// Point-wise loss pulling each code toward its class centroid: mean over
/// samples and bits of binary cross-entropy between p = clamp((z+1)/2, eps,
/// 1-eps) with eps = 1e-7 and target t = (centroid+1)/2.
LossResult central_similarity_loss(const RealMatrix& z, std::span<const std::uint32_t> labels,
                                   const CentroidTable& centroids);

enum class SimilarityKind { pairwise_likelihood, central_similarity };
enum class QuantKind { none, hswd, swd };

/// Everything combined_objective needs beyond the codes. Pointers select the
/// active similarity loss; target/slices feed the quantization term.
struct ObjectiveInputs {
  SimilarityKind ls_kind = SimilarityKind::pairwise_likelihood;
  double alpha = 1.0;
  const SimilarityMatrix* similarity = nullptr;  // pairwise_likelihood
  std::span<const std::uint32_t> labels;         // central_similarity
  const CentroidTable* centroids = nullptr;      // central_similarity

  QuantKind lq_kind = QuantKind::none;
  double lambda = 0.0;
  const SampleBatch* target = nullptr;  // B, required unless lq_kind == none
  const SliceSet* slices = nullptr;     // required when lq_kind == swd
};

struct ObjectiveResult {
  double total = 0.0;
  double ls = 0.0;
  double lq = 0.0;
  RealMatrix grad;
};

/// L_s(z) + lambda * L_q(z, B) with the gradient summed from both parts.
ObjectiveResult combined_objective(const RealMatrix& z, const ObjectiveInputs& inputs);

}  // namespace hswd
