#include "hswd/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include "io_util.hpp"

namespace hswd {

LabeledDataset gen_gaussian_clusters(std::size_t num_classes, std::size_t per_class,
                                     std::size_t dim, const RealMatrix& centers,
                                     double sigma, Rng& rng) {
  if (centers.rows() != num_classes || centers.cols() != dim) {
    throw std::invalid_argument("gen_gaussian_clusters: centers must be num_classes x dim");
  }
  if (num_classes == 0 || per_class == 0 || dim == 0) {
    throw std::invalid_argument("gen_gaussian_clusters: dimensions must be >= 1");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("gen_gaussian_clusters: sigma must be >= 0");
  }

  const std::size_t n = num_classes * per_class;
  LabeledDataset ds;
  ds.features = RealMatrix(n, dim);
  ds.labels.resize(n);
  ds.num_classes = static_cast<std::uint32_t>(num_classes);

  std::size_t row = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t k = 0; k < per_class; ++k, ++row) {
      for (std::size_t j = 0; j < dim; ++j) {
        ds.features(row, j) = centers(c, j) + sigma * rng.gaussian();
      }
      ds.labels[row] = static_cast<std::uint32_t>(c);
    }
  }
  return ds;
}

RealMatrix default_toy_centers() {
  return RealMatrix(4, 2, {2.0, 2.0, 2.0, -2.0, -2.0, 2.0, -2.0, -2.0});
}

void save_dataset(const LabeledDataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_dataset: cannot open " + path);
  detail::write_magic(os, "HDST");
  detail::write_u32_le(os, static_cast<std::uint32_t>(ds.features.rows()));
  detail::write_u32_le(os, static_cast<std::uint32_t>(ds.features.cols()));
  detail::write_u32_le(os, ds.num_classes);
  for (std::size_t i = 0; i < ds.features.size(); ++i) {
    detail::write_f64_le(os, ds.features.data()[i]);
  }
  for (std::uint32_t label : ds.labels) {
    detail::write_u32_le(os, label);
  }
  if (!os) throw IoError("save_dataset: write failed for " + path);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_dataset: cannot open " + path);
  detail::expect_magic(is, "HDST", "load_dataset");
  const std::uint32_t n = detail::read_u32_le(is);
  const std::uint32_t d = detail::read_u32_le(is);
  const std::uint32_t num_classes = detail::read_u32_le(is);

  std::vector<double> values(static_cast<std::size_t>(n) * d);
  for (double& v : values) v = detail::read_f64_le(is);

  LabeledDataset ds;
  ds.features = RealMatrix(n, d, std::move(values));
  ds.labels.resize(n);
  for (std::uint32_t& label : ds.labels) {
    label = detail::read_u32_le(is);
    if (label >= num_classes) throw IoError("load_dataset: label out of range");
  }
  ds.num_classes = num_classes;
  return ds;
}

}  // namespace hswd
