#include "hswd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hswd {

std::uint64_t Rng::next_u64() {
  // splitmix64 (Steele, Lea, Flood 2014).
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log argument positive.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RealMatrix gauss_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("gauss_matrix: dimensions must be >= 1");
  }
  RealMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    out.data()[i] = rng.gaussian();
  }
  return out;
}

}  // namespace hswd
