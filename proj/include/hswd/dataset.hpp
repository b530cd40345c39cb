#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hswd/matrix.hpp"
#include "hswd/rng.hpp"

namespace hswd {

/// Feature matrix plus one integer label per row.
struct LabeledDataset {
  RealMatrix features;                // N x d
  std::vector<std::uint32_t> labels;  // N entries, each < num_classes
  std::uint32_t num_classes = 0;
};

/// Samples per_class points around each row of centers with isotropic
/// gaussian noise of scale sigma. Sample i of class c is centers[c] plus
/// sigma * noise; rows are ordered class by class, so the label histogram is
/// exactly uniform.
LabeledDataset gen_gaussian_clusters(std::size_t num_classes, std::size_t per_class,
                                     std::size_t dim, const RealMatrix& centers,
                                     double sigma, Rng& rng);

/// Four class centers at (+-2, +-2), the default toy geometry.
RealMatrix default_toy_centers();

/// HDST file format: 16-byte header (magic "HDST", u32 N, u32 d,
/// u32 num_classes, little-endian), then N*d little-endian f64 features
/// row-major, then N little-endian u32 labels.
void save_dataset(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

}  // namespace hswd
