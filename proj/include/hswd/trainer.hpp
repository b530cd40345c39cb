#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hswd/config.hpp"
#include "hswd/dataset.hpp"
#include "hswd/net.hpp"
#include "hswd/retrieval.hpp"

namespace hswd {

/// One row of log.csv, appended per epoch. ls/lq are means over the epoch's
/// steps; the hswd/swd columns are probe estimates on the full train set
/// against a target batch and slice set fixed at the start of the run, so
/// epoch-to-epoch changes reflect the codes, not the probes.
struct EpochRecord {
  std::size_t epoch = 0;
  double ls = 0.0;
  double lq = 0.0;
  double hswd_probe = 0.0;
  double swd_probe = 0.0;
  double bit_entropy = 0.0;
  double bit_correlation = 0.0;
  double quant_angle = 0.0;
  double map = 0.0;
};

/// Row indices for the query set (held out) and the train/db sets drawn from
/// the remaining pool. Train and db may overlap.
struct SplitIndices {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> query;
  std::vector<std::uint32_t> db;
};

SplitIndices make_split(std::size_t n, const SplitSpec& spec, Rng& rng);

struct TrainOutput {
  HashNet net;
  std::vector<EpochRecord> log;
  LabeledDataset data;
  SplitIndices split;
};

/// Full training run: deterministic given (config, seed). Writes log.csv,
/// model.hnet, codes.pkcs (database codes), and report.json under
/// config.output_dir. Throws NumericError if the loss goes non-finite.
TrainOutput run_train(const ExperimentConfig& config);

struct EvalReport {
  std::size_t num_queries = 0;
  std::size_t num_db = 0;
  double map = 0.0;
  double p_at_10 = 0.0;
  double p_at_100 = 0.0;
  double bit_entropy = 0.0;
  double bit_correlation = 0.0;
  double quant_angle = 0.0;
};

/// Re-derives the dataset and split from the config, scores the checkpoint,
/// and writes report.json, ranking.csv, and codes.pkcs under
/// config.output_dir. P@R columns clamp R to the database size.
EvalReport run_eval(const std::string& checkpoint_path, const ExperimentConfig& config);

struct BenchReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t repeats = 0;
  double hswd_seconds = 0.0;  // median over repeats
  double swd_seconds = 0.0;
  double ratio = 0.0;  // swd_seconds / hswd_seconds
  double hswd_value = 0.0;
  double swd_value = 0.0;
};

/// Times hswd(Z,B) against swd(Z,B,slices) on identical random batches.
BenchReport run_bench(std::size_t m, std::size_t n, std::size_t l, std::size_t repeats);
std::string bench_to_json(const BenchReport& report);

struct ToySummary {
  std::vector<EpochRecord> log;
  double bit_entropy = 0.0;
  double bit_correlation = 0.0;
  double quant_angle = 0.0;
  double map = 0.0;
  std::size_t distinct_dominant_codes = 0;  // over the per-class majority codes
  double min_class_purity = 0.0;            // min over classes of dominant-code share
};

/// The 4-cluster 2-bit experiment configuration.
ExperimentConfig toy_config(QuantKind variant, std::uint64_t seed, const std::string& output_dir);

/// Trains the 2-bit toy and additionally writes codes.csv (per-sample
/// continuous and binary codes) plus a per-code class histogram inside
/// report.json.
ToySummary run_toy(QuantKind variant, std::uint64_t seed, const std::string& output_dir);

}  // namespace hswd
