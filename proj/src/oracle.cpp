#include "hswd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hswd::oracle {

double exact_assignment_cost(const CostMatrix& costs) {
  if (costs.n == 0) throw std::invalid_argument("exact_assignment_cost: empty cost matrix");
  if (costs.n > 10) throw std::invalid_argument("exact_assignment_cost: n > 10 not supported");
  if (costs.costs.size() != costs.n * costs.n) {
    throw std::invalid_argument("exact_assignment_cost: cost matrix must be n x n");
  }
  for (double c : costs.costs) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("exact_assignment_cost: costs must be finite and >= 0");
    }
  }

  std::vector<std::size_t> perm(costs.n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < costs.n; ++i) {
      total += costs.costs[i * costs.n + perm[i]];
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(costs.n);
}

double w2sq_bruteforce(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("w2sq_bruteforce: inputs must have equal length");
  }
  CostMatrix cm;
  cm.n = a.size();
  cm.costs.resize(cm.n * cm.n);
  for (std::size_t i = 0; i < cm.n; ++i) {
    for (std::size_t j = 0; j < cm.n; ++j) {
      const double diff = a[i] - b[j];
      cm.costs[i * cm.n + j] = diff * diff;
    }
  }
  return exact_assignment_cost(cm);
}

}  // namespace hswd::oracle
