#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "siglab/config.hpp"
#include "siglab/metrics.hpp"
#include "siglab/nn.hpp"

namespace siglab::experiment {

// Fixed, versioned CSV row schema.
extern const char* const kCsvHeader;

std::string format_csv_row(std::size_t run, std::size_t iteration,
                           const metrics::MetricRecord& m);

struct SummaryStat {
  double mean = 0.0;
  double std = 0.0;  // sample std across runs; 0 for a single run
  double min = 0.0;
  double max = 0.0;
};

// metric name (CSV column) -> stats across runs at each run's final logged
// iteration.
using Summary = std::map<std::string, SummaryStat>;

// Recomputes the summary from CSV text; this is the single code path for
// both the summary file written after training and the `report` subcommand,
// so the two always agree.
Summary summarize_csv(const std::string& csv_text);
std::string format_summary(const std::string& condition, const Summary& s);

// Label like "T", "T + 0.1pVoc".
std::string condition_label(const config::ExperimentConfig& cfg);

struct RunExperimentOptions {
  std::size_t threads = 1;
  bool parallel_runs = false;
  bool quiet = false;
};

// Executes cfg.runs training runs (run r seeds with master_seed + r), writing
// into cfg.output_dir:
//   metrics.csv                 one row per run per logged iteration
//   summary.csv                 per-metric mean/std/min/max across runs
//   run<r>_final.ckpt (+ .txt)  final checkpoint and config sidecar
//   run<r>_iter<i>.ckpt         periodic checkpoints if checkpoint_every > 0
// Returns 0 on success.
int run_experiment(const config::ExperimentConfig& cfg,
                   const RunExperimentOptions& options);

// Protocol inspection of a trained checkpoint: per-(target, context) signal
// emission distributions and per-signal referent distributions.
struct ProtocolReport {
  struct Emission {
    world::ObjectId target_id;
    std::vector<world::ObjectId> context_ids;
    std::map<std::uint32_t, double> signal_freq;  // over emission_samples
  };
  std::vector<Emission> emissions;
  // signal key -> (target id -> empirical P(T=target | signal)), from a
  // batch of full episodes at the checkpoint parameters.
  std::map<std::uint32_t, std::map<world::ObjectId, double>> referents;
};

struct ProtocolOptions {
  std::size_t emission_samples = 1000;
  std::size_t contexts_per_target = 5;
  std::size_t referent_episodes = 10000;
  std::uint64_t seed = 7;
};

ProtocolReport protocol_report(const config::ExperimentConfig& cfg,
                               const nn::ParamVec& theta,
                               const ProtocolOptions& options);
std::string format_protocol_report(const ProtocolReport& report);

// One SVG line chart per metric (runs overlaid, mean +- standard error
// band), written as <out_dir>/<metric>.svg. Returns the file paths.
std::vector<std::string> plot_metrics(const std::string& csv_path,
                                      const std::string& out_dir);

}  // namespace siglab::experiment
