#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hswd/losses.hpp"

namespace hswd {

/// Where the samples come from: a seeded gaussian-cluster generator or an
/// HDST file on disk.
struct DatasetSpec {
  std::string kind = "gaussian_clusters";  // or "file"
  std::size_t num_classes = 4;
  std::size_t per_class = 100;
  std::size_t dim = 2;
  double sigma = 0.3;
  std::vector<double> centers;  // flattened num_classes x dim; empty selects
                                // the (+-2, +-2) default for 4 classes in 2D
  std::string path;             // kind == "file"
};

struct ModelSpec {
  std::vector<std::size_t> hidden_dims{32};
  std::size_t code_bits = 2;  // m
};

struct LossSpec {
  std::string ls_kind = "pairwise";  // or "central"
  double alpha = 1.0;
  std::string lq_kind = "hswd";  // "none", "hswd", "swd"
  double lambda = 1.0;
  std::size_t swd_projections = 1000;  // L, used when lq_kind == "swd"
};

struct OptimizerSpec {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
};

/// Disjoint query set plus train/db sets drawn from the remaining pool (train
/// and db may overlap; db defaults to the whole pool). Zero means "derive":
/// query = 20% of N, train = db = the rest.
struct SplitSpec {
  std::size_t train = 0;
  std::size_t query = 0;
  std::size_t db = 0;
};

/// Declarative record of one experiment; the JSON file uses exactly these
/// field names, nested as written here.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  DatasetSpec dataset;
  ModelSpec model;
  LossSpec loss;
  OptimizerSpec optimizer;
  SplitSpec split;
  std::string output_dir = "out";
};

SimilarityKind parse_similarity_kind(const std::string& name);
QuantKind parse_quant_kind(const std::string& name);
std::string to_string(QuantKind kind);

/// Parses and validates; throws ConfigError naming the offending field path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Invariant checks shared by parse_config and programmatic construction.
void validate_config(const ExperimentConfig& config);

}  // namespace hswd
