#pragma once

#include <cstdint>

#include "hswd/matrix.hpp"

namespace hswd {

/// Deterministic 64-bit generator (splitmix64). The state is a counter that
/// advances by a fixed odd constant; each output is a bijective mix of the
/// counter, so the stream for a given seed is identical on every platform.
/// Gaussian draws use Box-Muller with the second value cached, which makes
/// the gaussian stream part of the reproducibility contract as well.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal via Box-Muller.
  double gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// rows x cols matrix of i.i.d. standard normal entries, filled row-major.
/// Rejects zero dimensions.
RealMatrix gauss_matrix(Rng& rng, std::size_t rows, std::size_t cols);

}  // namespace hswd
