#pragma once

#include <span>
#include <vector>

namespace hswd::oracle {

/// Pairwise transport costs between two equal-size point sets,
/// costs[i*n + j] = cost of matching a_i to b_j.
struct CostMatrix {
  std::size_t n = 0;
  std::vector<double> costs;  // n x n, row-major, all >= 0 and finite
};

/// Minimum over all n! permutations of (1/n) * sum_i costs[i][pi(i)].
/// Exhaustive search, guarded at n <= 10; correct by construction, which is
/// the point of an oracle.
double exact_assignment_cost(const CostMatrix& costs);

/// Squared W2 between two 1D samples via the exhaustive assignment above,
/// with costs (a_i - b_j)^2. Validates the sorted-pairing closed form.
double w2sq_bruteforce(std::span<const double> a, std::span<const double> b);

}  // namespace hswd::oracle
