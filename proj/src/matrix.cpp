#include "hswd/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace hswd {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("RealMatrix: data length does not match rows * cols");
  }
  check_finite();
}

std::vector<double> RealMatrix::col(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = data_[r * cols_ + c];
  }
  return out;
}

void RealMatrix::check_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("RealMatrix: non-finite entry");
    }
  }
}

}  // namespace hswd
