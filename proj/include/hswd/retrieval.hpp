#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hswd/matrix.hpp"

namespace hswd {

/// N binary codes of m bits packed into 64-bit words, code-major. Bit k of
/// code i is 1 iff the continuous value was >= 0 (sign(0) := +1). Padding
/// bits beyond m are zero in every code.
struct PackedCodeSet {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::uint64_t> words;  // n * words_per_code(), little-endian layout

  std::size_t words_per_code() const { return (m + 63) / 64; }
  std::span<const std::uint64_t> code(std::size_t i) const {
    return {words.data() + i * words_per_code(), words_per_code()};
  }
  bool bit(std::size_t i, std::size_t k) const {
    return (words[i * words_per_code() + k / 64] >> (k % 64)) & 1u;
  }
};

PackedCodeSet binarize(const RealMatrix& z);

/// XOR + popcount over the packed words. Requires equal code width.
std::size_t hamming(const PackedCodeSet& a, std::size_t i, const PackedCodeSet& b, std::size_t j);

/// Per query: database indices sorted ascending by Hamming distance, ties by
/// ascending index.
struct RankedList {
  std::vector<std::vector<std::uint32_t>> order;
};

RankedList rank_all(const PackedCodeSet& queries, const PackedCodeSet& db);

/// Mean over queries of average precision: per query, the mean over relevant
/// ranks r (within the cutoff; default full list) of precision at r. Queries
/// with no relevant item in range contribute 0.
double mean_average_precision(const RankedList& ranked,
                              const std::vector<std::vector<std::uint8_t>>& relevance,
                              std::optional<std::size_t> cutoff = std::nullopt);

/// Mean over queries of (relevant in top R) / R. Requires 1 <= R <= db size.
double precision_at_r(const RankedList& ranked,
                      const std::vector<std::vector<std::uint8_t>>& relevance, std::size_t r);

/// relevance[q][d] = 1 iff query q and database item d share a label.
std::vector<std::vector<std::uint8_t>> relevance_from_labels(
    std::span<const std::uint32_t> query_labels, std::span<const std::uint32_t> db_labels);

/// Mean over bits of the binary entropy of the bit's +1 frequency, in bits;
/// 1.0 means every bit is perfectly balanced.
double bit_entropy(const PackedCodeSet& codes);

/// Mean absolute Pearson correlation over all bit pairs j<k of the
/// {-1,+1}-valued bit columns; pairs involving a constant column count as 0.
double bit_correlation(const PackedCodeSet& codes);

struct AngleResult {
  double radians = 0.0;
  bool zero_row = false;  // some row was all zeros and scored as pi/2
};

/// Mean over rows of the angle between z and sign(z):
/// arccos(<z, sign(z)> / (|z| * sqrt(m))). Zero rows count as pi/2 and set
/// the warning flag.
AngleResult quantization_angle(const RealMatrix& z);

/// PKCS export format: magic "PKCS", u32 n, u32 m (little-endian), then the
/// packed words as little-endian u64.
void save_codes(const PackedCodeSet& codes, const std::string& path);
PackedCodeSet load_codes(const std::string& path);

}  // namespace hswd
