#include "hswd/retrieval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "io_util.hpp"

namespace hswd {

PackedCodeSet binarize(const RealMatrix& z) {
  PackedCodeSet codes;
  codes.n = z.rows();
  codes.m = z.cols();
  codes.words.assign(codes.n * codes.words_per_code(), 0);
  for (std::size_t i = 0; i < codes.n; ++i) {
    std::uint64_t* dst = codes.words.data() + i * codes.words_per_code();
    for (std::size_t k = 0; k < codes.m; ++k) {
      if (z(i, k) >= 0.0) {
        dst[k / 64] |= std::uint64_t{1} << (k % 64);
      }
    }
  }
  return codes;
}

std::size_t hamming(const PackedCodeSet& a, std::size_t i, const PackedCodeSet& b, std::size_t j) {
  if (a.m != b.m) throw std::invalid_argument("hamming: code widths must match");
  const std::uint64_t* wa = a.words.data() + i * a.words_per_code();
  const std::uint64_t* wb = b.words.data() + j * b.words_per_code();
  std::size_t count = 0;
  for (std::size_t w = 0; w < a.words_per_code(); ++w) {
    count += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  }
  return count;
}

RankedList rank_all(const PackedCodeSet& queries, const PackedCodeSet& db) {
  if (queries.m != db.m) throw std::invalid_argument("rank_all: code widths must match");
  RankedList ranked;
  ranked.order.resize(queries.n);
  std::vector<std::size_t> dist(db.n);
  for (std::size_t q = 0; q < queries.n; ++q) {
    for (std::size_t d = 0; d < db.n; ++d) dist[d] = hamming(queries, q, db, d);
    std::vector<std::uint32_t>& order = ranked.order[q];
    order.resize(db.n);
    std::iota(order.begin(), order.end(), 0);
    // stable sort on pre-sorted indices = ties broken by ascending index
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return dist[x] < dist[y]; });
  }
  return ranked;
}

double mean_average_precision(const RankedList& ranked,
                              const std::vector<std::vector<std::uint8_t>>& relevance,
                              std::optional<std::size_t> cutoff) {
  if (relevance.size() != ranked.order.size()) {
    throw std::invalid_argument("mean_average_precision: one relevance array per query required");
  }
  if (ranked.order.empty()) return 0.0;

  double total = 0.0;
  for (std::size_t q = 0; q < ranked.order.size(); ++q) {
    const auto& order = ranked.order[q];
    const auto& rel = relevance[q];
    if (rel.size() != order.size()) {
      throw std::invalid_argument("mean_average_precision: relevance size must match db size");
    }
    const std::size_t limit = std::min(order.size(), cutoff.value_or(order.size()));
    std::size_t hits = 0;
    double ap_sum = 0.0;
    for (std::size_t r = 0; r < limit; ++r) {
      if (rel[order[r]]) {
        ++hits;
        ap_sum += static_cast<double>(hits) / static_cast<double>(r + 1);
      }
    }
    if (hits > 0) total += ap_sum / static_cast<double>(hits);
  }
  return total / static_cast<double>(ranked.order.size());
}

double precision_at_r(const RankedList& ranked,
                      const std::vector<std::vector<std::uint8_t>>& relevance, std::size_t r) {
  if (relevance.size() != ranked.order.size()) {
    throw std::invalid_argument("precision_at_r: one relevance array per query required");
  }
  if (r == 0) throw std::invalid_argument("precision_at_r: R must be >= 1");
  if (ranked.order.empty()) return 0.0;

  double total = 0.0;
  for (std::size_t q = 0; q < ranked.order.size(); ++q) {
    const auto& order = ranked.order[q];
    if (r > order.size()) throw std::invalid_argument("precision_at_r: R exceeds db size");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (relevance[q][order[i]]) ++hits;
    }
    total += static_cast<double>(hits) / static_cast<double>(r);
  }
  return total / static_cast<double>(ranked.order.size());
}

std::vector<std::vector<std::uint8_t>> relevance_from_labels(
    std::span<const std::uint32_t> query_labels, std::span<const std::uint32_t> db_labels) {
  std::vector<std::vector<std::uint8_t>> rel(query_labels.size());
  for (std::size_t q = 0; q < query_labels.size(); ++q) {
    rel[q].resize(db_labels.size());
    for (std::size_t d = 0; d < db_labels.size(); ++d) {
      rel[q][d] = query_labels[q] == db_labels[d] ? 1 : 0;
    }
  }
  return rel;
}

double bit_entropy(const PackedCodeSet& codes) {
  if (codes.n == 0) throw std::invalid_argument("bit_entropy: need at least one code");
  if (codes.m == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < codes.m; ++k) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < codes.n; ++i) ones += codes.bit(i, k) ? 1 : 0;
    const double p = static_cast<double>(ones) / static_cast<double>(codes.n);
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    total += h;
  }
  return total / static_cast<double>(codes.m);
}

double bit_correlation(const PackedCodeSet& codes) {
  if (codes.n < 2) throw std::invalid_argument("bit_correlation: need at least two codes");
  if (codes.m < 2) return 0.0;

  // Bit column as +-1 values: mean and pairwise product means fully determine
  // the Pearson correlation since x^2 = 1.
  std::vector<double> mean(codes.m, 0.0);
  for (std::size_t k = 0; k < codes.m; ++k) {
    long sum = 0;
    for (std::size_t i = 0; i < codes.n; ++i) sum += codes.bit(i, k) ? 1 : -1;
    mean[k] = static_cast<double>(sum) / static_cast<double>(codes.n);
  }

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t j = 0; j < codes.m; ++j) {
    for (std::size_t k = j + 1; k < codes.m; ++k) {
      ++pairs;
      const double var_j = 1.0 - mean[j] * mean[j];
      const double var_k = 1.0 - mean[k] * mean[k];
      if (var_j <= 0.0 || var_k <= 0.0) continue;  // constant column: counts as 0
      long agree = 0;
      for (std::size_t i = 0; i < codes.n; ++i) {
        const bool bj = codes.bit(i, j);
        const bool bk = codes.bit(i, k);
        agree += bj == bk ? 1 : -1;
      }
      const double mean_jk = static_cast<double>(agree) / static_cast<double>(codes.n);
      const double cov = mean_jk - mean[j] * mean[k];
      total += std::abs(cov / std::sqrt(var_j * var_k));
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

AngleResult quantization_angle(const RealMatrix& z) {
  if (z.rows() == 0 || z.cols() == 0) {
    throw std::invalid_argument("quantization_angle: non-empty matrix required");
  }
  const double m = static_cast<double>(z.cols());
  AngleResult result;
  double total = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    double l1 = 0.0;
    double l2_sq = 0.0;
    for (std::size_t k = 0; k < z.cols(); ++k) {
      const double v = z(i, k);
      l1 += std::abs(v);  // <z, sign(z)> = sum |z_k|
      l2_sq += v * v;
    }
    if (l2_sq == 0.0) {
      result.zero_row = true;
      total += std::numbers::pi / 2.0;
      continue;
    }
    // squared form keeps collinear rows at exactly cos = 1
    const double cosine = std::min(1.0, std::sqrt(l1 * l1 / (l2_sq * m)));
    total += std::acos(cosine);
  }
  result.radians = total / static_cast<double>(z.rows());
  return result;
}

void save_codes(const PackedCodeSet& codes, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_codes: cannot open " + path);
  detail::write_magic(os, "PKCS");
  detail::write_u32_le(os, static_cast<std::uint32_t>(codes.n));
  detail::write_u32_le(os, static_cast<std::uint32_t>(codes.m));
  for (std::uint64_t w : codes.words) detail::write_u64_le(os, w);
  if (!os) throw IoError("save_codes: write failed for " + path);
}

PackedCodeSet load_codes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_codes: cannot open " + path);
  detail::expect_magic(is, "PKCS", "load_codes");
  PackedCodeSet codes;
  codes.n = detail::read_u32_le(is);
  codes.m = detail::read_u32_le(is);
  codes.words.resize(codes.n * codes.words_per_code());
  for (std::uint64_t& w : codes.words) w = detail::read_u64_le(is);
  return codes;
}

}  // namespace hswd
