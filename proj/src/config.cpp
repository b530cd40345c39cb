#include "hswd/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hswd/errors.hpp"

namespace hswd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError("config field " + path + ": " + why);
}

template <typename T>
T get_field(const json& obj, const std::string& parent, const std::string& name, T fallback) {
  if (!obj.contains(name)) return fallback;
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception&) {
    fail(parent.empty() ? name : parent + "." + name, "wrong type");
  }
}

json get_object(const json& obj, const std::string& name) {
  if (!obj.contains(name)) return json::object();
  if (!obj.at(name).is_object()) fail(name, "must be an object");
  return obj.at(name);
}

}  // namespace

SimilarityKind parse_similarity_kind(const std::string& name) {
  if (name == "pairwise") return SimilarityKind::pairwise_likelihood;
  if (name == "central") return SimilarityKind::central_similarity;
  throw ConfigError("config field loss.ls_kind: unknown kind '" + name + "'");
}

QuantKind parse_quant_kind(const std::string& name) {
  if (name == "none") return QuantKind::none;
  if (name == "hswd") return QuantKind::hswd;
  if (name == "swd") return QuantKind::swd;
  throw ConfigError("config field loss.lq_kind: unknown kind '" + name + "'");
}

std::string to_string(QuantKind kind) {
  switch (kind) {
    case QuantKind::none: return "none";
    case QuantKind::hswd: return "hswd";
    case QuantKind::swd: return "swd";
  }
  return "none";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig config;
  config.seed = get_field<std::uint64_t>(root, "", "seed", config.seed);
  config.output_dir = get_field<std::string>(root, "", "output_dir", config.output_dir);

  const json dataset = get_object(root, "dataset");
  config.dataset.kind = get_field<std::string>(dataset, "dataset", "kind", config.dataset.kind);
  config.dataset.num_classes =
      get_field<std::size_t>(dataset, "dataset", "num_classes", config.dataset.num_classes);
  config.dataset.per_class =
      get_field<std::size_t>(dataset, "dataset", "per_class", config.dataset.per_class);
  config.dataset.dim = get_field<std::size_t>(dataset, "dataset", "dim", config.dataset.dim);
  config.dataset.sigma = get_field<double>(dataset, "dataset", "sigma", config.dataset.sigma);
  config.dataset.path = get_field<std::string>(dataset, "dataset", "path", config.dataset.path);
  if (dataset.contains("centers")) {
    const json& centers = dataset.at("centers");
    if (!centers.is_array()) fail("dataset.centers", "must be an array of rows");
    for (const json& row : centers) {
      if (!row.is_array()) fail("dataset.centers", "must be an array of rows");
      for (const json& v : row) {
        if (!v.is_number()) fail("dataset.centers", "entries must be numbers");
        config.dataset.centers.push_back(v.get<double>());
      }
    }
  }

  const json model = get_object(root, "model");
  if (model.contains("hidden_dims")) {
    config.model.hidden_dims.clear();
    try {
      config.model.hidden_dims = model.at("hidden_dims").get<std::vector<std::size_t>>();
    } catch (const json::exception&) {
      fail("model.hidden_dims", "must be an array of positive integers");
    }
  }
  config.model.code_bits =
      get_field<std::size_t>(model, "model", "code_bits", config.model.code_bits);

  const json loss = get_object(root, "loss");
  config.loss.ls_kind = get_field<std::string>(loss, "loss", "ls_kind", config.loss.ls_kind);
  config.loss.alpha = get_field<double>(loss, "loss", "alpha", config.loss.alpha);
  config.loss.lq_kind = get_field<std::string>(loss, "loss", "lq_kind", config.loss.lq_kind);
  config.loss.lambda = get_field<double>(loss, "loss", "lambda", config.loss.lambda);
  config.loss.swd_projections =
      get_field<std::size_t>(loss, "loss", "swd_projections", config.loss.swd_projections);

  const json optimizer = get_object(root, "optimizer");
  config.optimizer.lr = get_field<double>(optimizer, "optimizer", "lr", config.optimizer.lr);
  config.optimizer.beta1 =
      get_field<double>(optimizer, "optimizer", "beta1", config.optimizer.beta1);
  config.optimizer.beta2 =
      get_field<double>(optimizer, "optimizer", "beta2", config.optimizer.beta2);
  config.optimizer.eps = get_field<double>(optimizer, "optimizer", "eps", config.optimizer.eps);
  config.optimizer.epochs =
      get_field<std::size_t>(optimizer, "optimizer", "epochs", config.optimizer.epochs);
  config.optimizer.batch_size =
      get_field<std::size_t>(optimizer, "optimizer", "batch_size", config.optimizer.batch_size);

  const json split = get_object(root, "split");
  config.split.train = get_field<std::size_t>(split, "split", "train", config.split.train);
  config.split.query = get_field<std::size_t>(split, "split", "query", config.split.query);
  config.split.db = get_field<std::size_t>(split, "split", "db", config.split.db);

  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("load_config: cannot open " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& config) {
  const DatasetSpec& ds = config.dataset;
  if (ds.kind != "gaussian_clusters" && ds.kind != "file") {
    fail("dataset.kind", "must be 'gaussian_clusters' or 'file'");
  }
  if (ds.kind == "file" && ds.path.empty()) fail("dataset.path", "required when kind is 'file'");
  if (ds.kind == "gaussian_clusters") {
    if (ds.num_classes == 0) fail("dataset.num_classes", "must be >= 1");
    if (ds.per_class == 0) fail("dataset.per_class", "must be >= 1");
    if (ds.dim == 0) fail("dataset.dim", "must be >= 1");
    if (ds.sigma < 0.0) fail("dataset.sigma", "must be >= 0");
    if (!ds.centers.empty() && ds.centers.size() != ds.num_classes * ds.dim) {
      fail("dataset.centers", "must have num_classes rows of dim entries");
    }
    if (ds.centers.empty() && !(ds.num_classes == 4 && ds.dim == 2)) {
      fail("dataset.centers", "required unless num_classes == 4 and dim == 2");
    }
  }

  if (config.model.code_bits == 0) fail("model.code_bits", "must be >= 1");
  for (std::size_t h : config.model.hidden_dims) {
    if (h == 0) fail("model.hidden_dims", "entries must be >= 1");
  }

  parse_similarity_kind(config.loss.ls_kind);
  const QuantKind lq = parse_quant_kind(config.loss.lq_kind);
  if (config.loss.alpha <= 0.0) fail("loss.alpha", "must be > 0");
  if (config.loss.lambda < 0.0) fail("loss.lambda", "must be >= 0");
  if (lq == QuantKind::swd && config.loss.swd_projections == 0) {
    fail("loss.swd_projections", "must be >= 1 when lq_kind is 'swd'");
  }
  if (config.loss.ls_kind == "central") {
    const std::size_t m = config.model.code_bits;
    if ((m & (m - 1)) != 0) fail("model.code_bits", "must be a power of two for central loss");
  }

  const OptimizerSpec& opt = config.optimizer;
  if (opt.lr <= 0.0) fail("optimizer.lr", "must be > 0");
  if (opt.beta1 < 0.0 || opt.beta1 >= 1.0) fail("optimizer.beta1", "must be in [0, 1)");
  if (opt.beta2 < 0.0 || opt.beta2 >= 1.0) fail("optimizer.beta2", "must be in [0, 1)");
  if (opt.eps <= 0.0) fail("optimizer.eps", "must be > 0");
  if (opt.epochs == 0) fail("optimizer.epochs", "must be >= 1");
  if (opt.batch_size < 2) fail("optimizer.batch_size", "must be >= 2");
}

}  // namespace hswd
