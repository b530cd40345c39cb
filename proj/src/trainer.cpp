#include "hswd/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hswd/distances.hpp"
#include "hswd/errors.hpp"

namespace hswd {

namespace {

namespace fs = std::filesystem;

// Round-trippable, locale-independent double formatting for CSV output.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RealMatrix gather_rows(const RealMatrix& src, std::span<const std::uint32_t> indices) {
  RealMatrix out(indices.size(), src.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const double* row = src.data() + static_cast<std::size_t>(indices[i]) * src.cols();
    std::copy(row, row + src.cols(), out.data() + i * src.cols());
  }
  return out;
}

std::vector<std::uint32_t> gather_labels(std::span<const std::uint32_t> labels,
                                         std::span<const std::uint32_t> indices) {
  std::vector<std::uint32_t> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = labels[indices[i]];
  return out;
}

LabeledDataset materialize_dataset(const DatasetSpec& spec, Rng& rng) {
  if (spec.kind == "file") return load_dataset(spec.path);
  RealMatrix centers =
      spec.centers.empty()
          ? default_toy_centers()
          : RealMatrix(spec.num_classes, spec.dim, spec.centers);
  return gen_gaussian_clusters(spec.num_classes, spec.per_class, spec.dim, centers, spec.sigma,
                               rng);
}

void write_log_csv(const std::vector<EpochRecord>& log, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string());
  os << "epoch,ls,lq,hswd,swd,bit_entropy,bit_correlation,quant_angle,map\n";
  for (const EpochRecord& r : log) {
    os << r.epoch << ',' << format_double(r.ls) << ',' << format_double(r.lq) << ','
       << format_double(r.hswd_probe) << ',' << format_double(r.swd_probe) << ','
       << format_double(r.bit_entropy) << ',' << format_double(r.bit_correlation) << ','
       << format_double(r.quant_angle) << ',' << format_double(r.map) << '\n';
  }
}

std::string code_string(const PackedCodeSet& codes, std::size_t i) {
  std::string s(codes.m, '0');
  for (std::size_t k = 0; k < codes.m; ++k) {
    if (codes.bit(i, k)) s[k] = '1';
  }
  return s;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

SplitIndices make_split(std::size_t n, const SplitSpec& spec, Rng& rng) {
  if (n < 2) throw ConfigError("config field split: dataset too small to split");
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
    std::swap(perm[i], perm[j]);
  }

  const std::size_t query_count = spec.query != 0 ? spec.query : n / 5;
  if (query_count == 0 || query_count >= n) {
    throw ConfigError("config field split.query: must leave a non-empty pool");
  }
  const std::size_t pool = n - query_count;
  const std::size_t train_count = spec.train != 0 ? spec.train : pool;
  const std::size_t db_count = spec.db != 0 ? spec.db : pool;
  if (train_count < 2) throw ConfigError("config field split.train: must be >= 2");
  if (train_count > pool) throw ConfigError("config field split.train: exceeds non-query pool");
  if (db_count == 0 || db_count > pool) {
    throw ConfigError("config field split.db: exceeds non-query pool");
  }

  SplitIndices split;
  split.query.assign(perm.begin(), perm.begin() + query_count);
  split.train.assign(perm.begin() + query_count, perm.begin() + query_count + train_count);
  split.db.assign(perm.begin() + query_count, perm.begin() + query_count + db_count);
  return split;
}

TrainOutput run_train(const ExperimentConfig& config) {
  validate_config(config);
  const std::size_t m = config.model.code_bits;
  const SimilarityKind ls_kind = parse_similarity_kind(config.loss.ls_kind);
  const QuantKind lq_kind = parse_quant_kind(config.loss.lq_kind);

  Rng rng(config.seed);
  TrainOutput out;
  out.data = materialize_dataset(config.dataset, rng);
  const std::size_t n = out.data.features.rows();
  out.split = make_split(n, config.split, rng);
  out.net = init_net(out.data.features.cols(), config.model.hidden_dims, m, rng);

  // Probe target and slices for the per-epoch distance estimates; drawn from
  // a derived stream so they stay fixed for the whole run.
  Rng probe_rng(config.seed ^ 0x70726f6265ULL);
  const SampleBatch probe_target = sample_binary_target(out.split.train.size(), m, probe_rng);
  const SliceSet probe_slices = sample_slices(config.loss.swd_projections, m, probe_rng);

  CentroidTable centroids;
  if (ls_kind == SimilarityKind::central_similarity) {
    centroids = hadamard_centroids(out.data.num_classes, m);
  }

  AdamState adam = make_adam(out.net, config.optimizer.lr, config.optimizer.beta1,
                             config.optimizer.beta2, config.optimizer.eps);

  const RealMatrix train_x = gather_rows(out.data.features, out.split.train);
  const std::vector<std::uint32_t> train_y = gather_labels(out.data.labels, out.split.train);
  const RealMatrix query_x = gather_rows(out.data.features, out.split.query);
  const std::vector<std::uint32_t> query_y = gather_labels(out.data.labels, out.split.query);
  const RealMatrix db_x = gather_rows(out.data.features, out.split.db);
  const std::vector<std::uint32_t> db_y = gather_labels(out.data.labels, out.split.db);
  const auto relevance = relevance_from_labels(query_y, db_y);

  const std::size_t n_train = out.split.train.size();
  std::vector<std::uint32_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.optimizer.epochs; ++epoch) {
    for (std::size_t i = n_train - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
      std::swap(order[i], order[j]);
    }

    double ls_sum = 0.0;
    double lq_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < n_train; start += config.optimizer.batch_size) {
      const std::size_t count = std::min(config.optimizer.batch_size, n_train - start);
      if (count < 2) break;  // a trailing single sample cannot form a batch
      const std::span<const std::uint32_t> batch_idx(order.data() + start, count);
      const RealMatrix batch_x = gather_rows(train_x, batch_idx);
      const std::vector<std::uint32_t> batch_y = gather_labels(train_y, batch_idx);

      ForwardCache cache;
      const RealMatrix z = forward(out.net, batch_x, &cache);

      ObjectiveInputs inputs;
      inputs.ls_kind = ls_kind;
      inputs.alpha = config.loss.alpha;
      inputs.lq_kind = lq_kind;
      inputs.lambda = config.loss.lambda;

      SimilarityMatrix sim;
      if (ls_kind == SimilarityKind::pairwise_likelihood) {
        sim = build_similarity(batch_y);
        inputs.similarity = &sim;
      } else {
        inputs.labels = batch_y;
        inputs.centroids = &centroids;
      }

      SampleBatch target;
      SliceSet slices;
      if (lq_kind != QuantKind::none) {
        target = sample_binary_target(count, m, rng);
        inputs.target = &target;
        if (lq_kind == QuantKind::swd) {
          slices = sample_slices(config.loss.swd_projections, m, rng);
          inputs.slices = &slices;
        }
      }

      const ObjectiveResult objective = combined_objective(z, inputs);
      if (!std::isfinite(objective.total)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(steps));
      }
      ls_sum += objective.ls;
      lq_sum += objective.lq;
      ++steps;

      const GradientSet grads = backward(out.net, cache, objective.grad);
      adam_step(out.net, grads, adam);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.ls = steps > 0 ? ls_sum / static_cast<double>(steps) : 0.0;
    record.lq = steps > 0 ? lq_sum / static_cast<double>(steps) : 0.0;

    const RealMatrix z_train = forward(out.net, train_x);
    record.hswd_probe = hswd(z_train, probe_target);
    record.swd_probe = swd(z_train, probe_target, probe_slices);
    const PackedCodeSet train_codes = binarize(z_train);
    record.bit_entropy = bit_entropy(train_codes);
    record.bit_correlation = bit_correlation(train_codes);
    record.quant_angle = quantization_angle(z_train).radians;

    const PackedCodeSet query_codes = binarize(forward(out.net, query_x));
    const PackedCodeSet db_codes = binarize(forward(out.net, db_x));
    record.map = mean_average_precision(rank_all(query_codes, db_codes), relevance);

    out.log.push_back(record);
  }

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  write_log_csv(out.log, dir / "log.csv");
  save_net(out.net, (dir / "model.hnet").string());
  save_codes(binarize(forward(out.net, db_x)), (dir / "codes.pkcs").string());

  nlohmann::json report;
  const EpochRecord& last = out.log.back();
  report["seed"] = config.seed;
  report["epochs"] = config.optimizer.epochs;
  report["lq_kind"] = config.loss.lq_kind;
  report["lambda"] = config.loss.lambda;
  report["map"] = last.map;
  report["bit_entropy"] = last.bit_entropy;
  report["bit_correlation"] = last.bit_correlation;
  report["quant_angle"] = last.quant_angle;
  report["final_ls"] = last.ls;
  report["final_lq"] = last.lq;
  std::ofstream ros(dir / "report.json");
  if (!ros) throw IoError("cannot open " + (dir / "report.json").string());
  ros << report.dump(2) << '\n';

  return out;
}

EvalReport run_eval(const std::string& checkpoint_path, const ExperimentConfig& config) {
  validate_config(config);
  const HashNet net = load_net(checkpoint_path);

  // Replays the dataset and split streams of run_train, which draws them
  // before any model initialization.
  Rng rng(config.seed);
  const LabeledDataset data = materialize_dataset(config.dataset, rng);
  if (data.features.cols() != net.input_dim) {
    throw std::invalid_argument("run_eval: checkpoint input_dim does not match dataset");
  }
  const SplitIndices split = make_split(data.features.rows(), config.split, rng);

  const RealMatrix query_x = gather_rows(data.features, split.query);
  const RealMatrix db_x = gather_rows(data.features, split.db);
  const std::vector<std::uint32_t> query_y = gather_labels(data.labels, split.query);
  const std::vector<std::uint32_t> db_y = gather_labels(data.labels, split.db);

  const RealMatrix z_query = forward(net, query_x);
  const RealMatrix z_db = forward(net, db_x);
  const PackedCodeSet query_codes = binarize(z_query);
  const PackedCodeSet db_codes = binarize(z_db);
  const RankedList ranked = rank_all(query_codes, db_codes);
  const auto relevance = relevance_from_labels(query_y, db_y);

  EvalReport report;
  report.num_queries = split.query.size();
  report.num_db = split.db.size();
  report.map = mean_average_precision(ranked, relevance);
  report.p_at_10 = precision_at_r(ranked, relevance, std::min<std::size_t>(10, split.db.size()));
  report.p_at_100 = precision_at_r(ranked, relevance, std::min<std::size_t>(100, split.db.size()));
  report.bit_entropy = bit_entropy(db_codes);
  report.bit_correlation = bit_correlation(db_codes);
  report.quant_angle = quantization_angle(z_db).radians;

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  nlohmann::json doc;
  doc["num_queries"] = report.num_queries;
  doc["num_db"] = report.num_db;
  doc["map"] = report.map;
  doc["p_at_10"] = report.p_at_10;
  doc["p_at_100"] = report.p_at_100;
  doc["bit_entropy"] = report.bit_entropy;
  doc["bit_correlation"] = report.bit_correlation;
  doc["quant_angle"] = report.quant_angle;
  std::ofstream ros(dir / "report.json");
  if (!ros) throw IoError("cannot open " + (dir / "report.json").string());
  ros << doc.dump(2) << '\n';

  std::ofstream cs(dir / "ranking.csv");
  if (!cs) throw IoError("cannot open " + (dir / "ranking.csv").string());
  cs << "query,rank,db_index,distance,relevant\n";
  for (std::size_t q = 0; q < ranked.order.size(); ++q) {
    for (std::size_t r = 0; r < ranked.order[q].size(); ++r) {
      const std::uint32_t d = ranked.order[q][r];
      cs << q << ',' << r << ',' << d << ',' << hamming(query_codes, q, db_codes, d) << ','
         << static_cast<int>(relevance[q][d]) << '\n';
    }
  }

  save_codes(db_codes, (dir / "codes.pkcs").string());
  return report;
}

BenchReport run_bench(std::size_t m, std::size_t n, std::size_t l, std::size_t repeats) {
  if (m == 0 || n == 0 || l == 0 || repeats == 0) {
    throw std::invalid_argument("run_bench: all arguments must be >= 1");
  }
  Rng rng(42);
  const SampleBatch z = gauss_matrix(rng, n, m);
  const SampleBatch b = sample_binary_target(n, m, rng);
  const SliceSet slices = sample_slices(l, m, rng);

  BenchReport report;
  report.m = m;
  report.n = n;
  report.l = l;
  report.repeats = repeats;

  using clock = std::chrono::steady_clock;
  std::vector<double> hswd_times;
  std::vector<double> swd_times;
  hswd_times.reserve(repeats);
  swd_times.reserve(repeats);
  double sink = 0.0;
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    const auto t0 = clock::now();
    report.hswd_value = hswd(z, b);
    const auto t1 = clock::now();
    report.swd_value = swd(z, b, slices);
    const auto t2 = clock::now();
    hswd_times.push_back(std::chrono::duration<double>(t1 - t0).count());
    swd_times.push_back(std::chrono::duration<double>(t2 - t1).count());
    sink += report.hswd_value + report.swd_value;
  }
  (void)sink;

  report.hswd_seconds = median(std::move(hswd_times));
  report.swd_seconds = median(std::move(swd_times));
  report.ratio = report.hswd_seconds > 0.0 ? report.swd_seconds / report.hswd_seconds : 0.0;
  return report;
}

std::string bench_to_json(const BenchReport& report) {
  nlohmann::json doc;
  doc["m"] = report.m;
  doc["n"] = report.n;
  doc["l"] = report.l;
  doc["repeats"] = report.repeats;
  doc["hswd_seconds"] = report.hswd_seconds;
  doc["swd_seconds"] = report.swd_seconds;
  doc["ratio"] = report.ratio;
  doc["hswd_value"] = report.hswd_value;
  doc["swd_value"] = report.swd_value;
  return doc.dump(2);
}

ExperimentConfig toy_config(QuantKind variant, std::uint64_t seed, const std::string& output_dir) {
  ExperimentConfig config;
  config.seed = seed;
  config.dataset = DatasetSpec{};  // 4 gaussian clusters at (+-2, +-2), sigma 0.3
  config.model.hidden_dims = {32};
  config.model.code_bits = 2;
  // The steep pairwise scale leaves the baseline (lq none) visibly short of
  // the corners, which is the regime the quantization loss is meant to fix.
  config.loss.ls_kind = "pairwise";
  config.loss.alpha = 64.0;
  config.loss.lq_kind = to_string(variant);
  config.loss.lambda = 1.0;
  config.loss.swd_projections = 1000;
  config.optimizer.epochs = 200;
  config.optimizer.batch_size = 64;
  config.split.query = 80;
  config.split.train = 320;
  config.split.db = 320;
  config.output_dir = output_dir;
  return config;
}

ToySummary run_toy(QuantKind variant, std::uint64_t seed, const std::string& output_dir) {
  const ExperimentConfig config = toy_config(variant, seed, output_dir);
  TrainOutput out = run_train(config);

  const RealMatrix z_all = forward(out.net, out.data.features);
  const PackedCodeSet codes = binarize(z_all);
  const std::size_t n = codes.n;
  const std::size_t num_classes = out.data.num_classes;

  const fs::path dir(config.output_dir);
  std::ofstream cs(dir / "codes.csv");
  if (!cs) throw IoError("cannot open " + (dir / "codes.csv").string());
  cs << "index,label";
  for (std::size_t k = 0; k < codes.m; ++k) cs << ",z" << k;
  cs << ",code\n";
  for (std::size_t i = 0; i < n; ++i) {
    cs << i << ',' << out.data.labels[i];
    for (std::size_t k = 0; k < codes.m; ++k) cs << ',' << format_double(z_all(i, k));
    cs << ',' << code_string(codes, i) << '\n';
  }

  // Per-code class histogram and per-class dominant code.
  std::map<std::string, std::vector<std::size_t>> histogram;
  for (std::size_t i = 0; i < n; ++i) {
    auto& counts = histogram[code_string(codes, i)];
    counts.resize(num_classes, 0);
    counts[out.data.labels[i]] += 1;
  }

  std::vector<std::map<std::string, std::size_t>> per_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    per_class[out.data.labels[i]][code_string(codes, i)] += 1;
  }

  ToySummary summary;
  summary.log = out.log;
  summary.map = out.log.back().map;
  summary.bit_entropy = bit_entropy(codes);
  summary.bit_correlation = bit_correlation(codes);
  summary.quant_angle = quantization_angle(z_all).radians;

  std::vector<std::string> dominant;
  summary.min_class_purity = 1.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t class_total = 0;
    std::size_t best_count = 0;
    std::string best_code;
    for (const auto& [code, count] : per_class[c]) {
      class_total += count;
      if (count > best_count) {
        best_count = count;
        best_code = code;
      }
    }
    dominant.push_back(best_code);
    if (class_total > 0) {
      summary.min_class_purity = std::min(
          summary.min_class_purity,
          static_cast<double>(best_count) / static_cast<double>(class_total));
    }
  }
  std::sort(dominant.begin(), dominant.end());
  summary.distinct_dominant_codes =
      static_cast<std::size_t>(std::distance(dominant.begin(),
                                             std::unique(dominant.begin(), dominant.end())));

  nlohmann::json doc;
  doc["variant"] = to_string(variant);
  doc["seed"] = seed;
  doc["samples"] = n;
  doc["map"] = summary.map;
  doc["bit_entropy"] = summary.bit_entropy;
  doc["bit_correlation"] = summary.bit_correlation;
  doc["quant_angle"] = summary.quant_angle;
  doc["min_class_purity"] = summary.min_class_purity;
  doc["distinct_dominant_codes"] = summary.distinct_dominant_codes;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [code, counts] : histogram) hist[code] = counts;
  doc["code_histogram"] = hist;
  std::ofstream ros(dir / "report.json");
  if (!ros) throw IoError("cannot open " + (dir / "report.json").string());
  ros << doc.dump(2) << '\n';

  return summary;
}

}  // namespace hswd
