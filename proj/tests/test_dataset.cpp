#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hswd/dataset.hpp"
#include "hswd/errors.hpp"

using hswd::LabeledDataset;
using hswd::RealMatrix;
using hswd::Rng;

namespace {

LabeledDataset toy_clusters(double sigma, std::uint64_t seed = 5) {
  Rng rng(seed);
  return hswd::gen_gaussian_clusters(4, 100, 2, hswd::default_toy_centers(), sigma, rng);
}

}  // namespace

TEST_CASE("cluster generator produces a uniform label histogram") {
  const auto ds = toy_clusters(0.3);
  REQUIRE(ds.features.rows() == 400);
  REQUIRE(ds.labels.size() == 400);
  std::vector<int> counts(4, 0);
  for (auto label : ds.labels) counts[label] += 1;
  for (int c : counts) CHECK(c == 100);
}

TEST_CASE("sigma zero reproduces the centers exactly") {
  const auto ds = toy_clusters(0.0);
  const auto centers = hswd::default_toy_centers();
  for (std::size_t i = 0; i < ds.features.rows(); ++i) {
    CHECK(ds.features(i, 0) == centers(ds.labels[i], 0));
    CHECK(ds.features(i, 1) == centers(ds.labels[i], 1));
  }
}

TEST_CASE("nearly every sample lies closest to its own center") {
  const auto ds = toy_clusters(0.3);
  const auto centers = hswd::default_toy_centers();
  int correct = 0;
  for (std::size_t i = 0; i < ds.features.rows(); ++i) {
    double best = 1e300;
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < 4; ++c) {
      const double dx = ds.features(i, 0) - centers(c, 0);
      const double dy = ds.features(i, 1) - centers(c, 1);
      const double d = dx * dx + dy * dy;
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    if (best_c == ds.labels[i]) ++correct;
  }
  CHECK(correct >= 396);  // >= 99%
}

TEST_CASE("mismatched centers shape is rejected") {
  Rng rng(1);
  const RealMatrix bad(3, 2, {0, 0, 1, 1, 2, 2});
  CHECK_THROWS_AS(hswd::gen_gaussian_clusters(4, 10, 2, bad, 0.3, rng),
                  std::invalid_argument);
}

TEST_CASE("HDST round trip and header layout") {
  const auto ds = toy_clusters(0.3, 11);
  const auto path = std::filesystem::temp_directory_path() / "hswd_test_dataset.hdst";
  hswd::save_dataset(ds, path.string());

  std::ifstream is(path, std::ios::binary);
  char header[16];
  is.read(header, 16);
  REQUIRE(is.good());
  CHECK(std::string(header, 4) == "HDST");
  const auto u32 = [&](int offset) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(header[offset])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(header[offset + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(header[offset + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(header[offset + 3])) << 24);
  };
  CHECK(u32(4) == 400);
  CHECK(u32(8) == 2);
  CHECK(u32(12) == 4);
  CHECK(std::filesystem::file_size(path) == 16 + 400 * 2 * 8 + 400 * 4);

  const auto loaded = hswd::load_dataset(path.string());
  CHECK(loaded.features == ds.features);
  CHECK(loaded.labels == ds.labels);
  CHECK(loaded.num_classes == ds.num_classes);
  std::filesystem::remove(path);
}

TEST_CASE("loading a non-HDST file fails") {
  const auto path = std::filesystem::temp_directory_path() / "hswd_test_bogus.hdst";
  std::ofstream(path.string()) << "not a dataset";
  CHECK_THROWS_AS(hswd::load_dataset(path.string()), hswd::IoError);
  std::filesystem::remove(path);
}
