// hswd command-line runner: train / eval / bench / toy.
//
// Every failure exits nonzero after printing a single line of the form
//   error: <category>: <message>
// with category one of usage, config, io, dimension, numeric, internal.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hswd/config.hpp"
#include "hswd/errors.hpp"
#include "hswd/trainer.hpp"

namespace {

int fail(const std::string& category, const std::string& message) {
  std::cerr << "error: " << category << ": " << message << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional-matching quantization for learned binary hashing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint_path;

  CLI::App* train = app.add_subcommand("train", "Train a hash function from a JSON config");
  train->add_option("config", config_path, "Path to config.json")->required();

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the config's split");
  eval->add_option("checkpoint", checkpoint_path, "Path to model.hnet")->required();
  eval->add_option("config", config_path, "Path to config.json")->required();

  std::size_t bench_m = 64;
  std::size_t bench_n = 256;
  std::size_t bench_l = 1000;
  std::size_t bench_repeats = 21;
  CLI::App* bench = app.add_subcommand("bench", "Time hswd against swd on random batches");
  bench->add_option("--m", bench_m, "Code dimension");
  bench->add_option("--n", bench_n, "Batch size");
  bench->add_option("--l", bench_l, "Number of swd projections");
  bench->add_option("--repeats", bench_repeats, "Timing repeats (median reported)");

  std::string toy_variant = "hswd";
  std::uint64_t toy_seed = 0;
  std::string toy_out = "toy_out";
  CLI::App* toy = app.add_subcommand("toy", "Run the 4-cluster 2-bit experiment");
  toy->add_option("--variant", toy_variant, "Quantization: none, hswd, or swd");
  toy->add_option("--seed", toy_seed, "Random seed");
  toy->add_option("--out", toy_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: usage: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (train->parsed()) {
      const hswd::ExperimentConfig config = hswd::load_config(config_path);
      const hswd::TrainOutput out = hswd::run_train(config);
      std::cout << "trained " << config.optimizer.epochs << " epochs; final map "
                << out.log.back().map << "; outputs in " << config.output_dir << std::endl;
    } else if (eval->parsed()) {
      const hswd::ExperimentConfig config = hswd::load_config(config_path);
      const hswd::EvalReport report = hswd::run_eval(checkpoint_path, config);
      std::cout << "map " << report.map << "; p@10 " << report.p_at_10 << "; report in "
                << config.output_dir << std::endl;
    } else if (bench->parsed()) {
      const hswd::BenchReport report = hswd::run_bench(bench_m, bench_n, bench_l, bench_repeats);
      std::cout << hswd::bench_to_json(report) << std::endl;
    } else if (toy->parsed()) {
      const hswd::QuantKind variant = hswd::parse_quant_kind(toy_variant);
      const hswd::ToySummary summary = hswd::run_toy(variant, toy_seed, toy_out);
      std::cout << "toy " << toy_variant << " seed " << toy_seed << ": map " << summary.map
                << ", entropy " << summary.bit_entropy << ", angle " << summary.quant_angle
                << "; outputs in " << toy_out << std::endl;
    }
  } catch (const hswd::ConfigError& e) {
    return fail("config", e.what());
  } catch (const hswd::IoError& e) {
    return fail("io", e.what());
  } catch (const hswd::NumericError& e) {
    return fail("numeric", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("dimension", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
