#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "siglab/checkpoint.hpp"
#include "siglab/config.hpp"
#include "siglab/experiment.hpp"
#include "siglab/kernels.hpp"

namespace {

std::size_t thread_limit() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SGLAB_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) n = std::min<std::size_t>(n, std::size_t(v));
  }
  return n;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"siglab: contextual signaling-game simulation laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, csv_path, checkpoint_path;
  std::uint64_t seed_override = 0;
  bool seed_given = false, parallel_runs = false;

  auto* train = app.add_subcommand("train", "run a training experiment");
  train->add_option("--config", config_path, "experiment config file")
      ->required();
  train->add_option("--out", out_dir, "output directory (overrides config)");
  train
      ->add_option("--seed", seed_override, "master seed (overrides config)")
      ->each([&](const std::string&) { seed_given = true; });
  train->add_flag("--parallel-runs", parallel_runs,
                  "run independent runs concurrently");

  auto* report = app.add_subcommand("report", "summarize a metrics CSV");
  report->add_option("--csv", csv_path, "metrics CSV file")->required();

  auto* protocol =
      app.add_subcommand("protocol", "inspect a trained protocol");
  protocol->add_option("--checkpoint", checkpoint_path, "checkpoint file")
      ->required();
  protocol->add_option("--config", config_path, "experiment config file")
      ->required();

  auto* plot = app.add_subcommand("plot", "render metric curves as SVG");
  plot->add_option("--csv", csv_path, "metrics CSV file")->required();
  plot->add_option("--out", out_dir, "output directory for SVG files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      siglab::config::ExperimentConfig cfg =
          siglab::config::parse_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (seed_given) cfg.master_seed = seed_override;
      siglab::experiment::RunExperimentOptions options;
      options.threads = thread_limit();
      options.parallel_runs = parallel_runs;
      std::cerr << "[siglab] kernels: " << siglab::kernels::active().name
                << " (available: " << siglab::kernels::available_names()
                << "), threads: " << options.threads << "\n";
      return siglab::experiment::run_experiment(cfg, options);
    }
    if (report->parsed()) {
      const auto summary =
          siglab::experiment::summarize_csv(read_file(csv_path));
      std::cout << siglab::experiment::format_summary("all", summary);
      return 0;
    }
    if (protocol->parsed()) {
      const siglab::config::ExperimentConfig cfg =
          siglab::config::parse_config(config_path);
      const auto loaded = siglab::checkpoint::load(checkpoint_path);
      siglab::experiment::ProtocolOptions options;
      const auto rep =
          siglab::experiment::protocol_report(cfg, loaded.theta, options);
      std::cout << siglab::experiment::format_protocol_report(rep);
      return 0;
    }
    if (plot->parsed()) {
      if (out_dir.empty()) out_dir = "plots";
      const auto files = siglab::experiment::plot_metrics(csv_path, out_dir);
      for (const auto& f : files) std::cout << f << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
