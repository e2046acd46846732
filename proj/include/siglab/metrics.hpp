#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "siglab/evaluator.hpp"

namespace siglab::metrics {

enum class Var { Signal, Target, Context, Response, ContextSignal };

// Empirical joint over one batch of episodes. Contexts are canonicalized as
// sorted id tuples (presentation order carries no meaning for estimation) and
// interned to small integers.
struct EmpiricalTable {
  struct Record {
    std::uint64_t signal_key;
    std::uint64_t target_id;
    std::uint64_t context_id;  // index into `contexts`
    std::uint64_t response_id;
  };

  std::size_t n = 0;
  std::size_t signal_length = 0;
  std::vector<Record> records;
  std::vector<std::vector<world::ObjectId>> contexts;  // sorted member ids

  std::map<std::uint64_t, std::size_t> signal_counts;
  std::map<std::uint64_t, std::size_t> target_counts;
  // (signal_key, target_id) -> count; drives certainties and the
  // contextless-accuracy argmax.
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t>
      signal_target_counts;
  std::vector<std::size_t> bit_ones;  // per signal bit

  std::uint64_t value(const Record& r, Var v) const;
};

EmpiricalTable build_table(const std::vector<evaluator::EpisodeLog>& episodes,
                           std::size_t signal_length);

// Mean over episodes of max_o P(T=o | signal_i).
double target_certainty(const EmpiricalTable& table);
// Mean over episodes of max_sigma P(sigma | target_i).
double signal_certainty(const EmpiricalTable& table);
// Fraction of episodes whose target is the within-context argmax of the
// global referent posterior; ties broken toward the lowest object id.
double max_contextless_accuracy(const EmpiricalTable& table);

// Plug-in mutual information in bits, log base 2.
double mutual_information(const EmpiricalTable& table, Var x, Var y);

// I(signal; context) - I(signal; target)
double sender_context_gain(const EmpiricalTable& table);
// I(response; context, signal) - I(response; signal); equals the plug-in
// conditional MI I(response; context | signal), hence nonnegative.
double receiver_context_gain(const EmpiricalTable& table);

// Joint entropy of whole-signal keys.
double signal_entropy(const EmpiricalTable& table);
// {sum over bits of binary entropies, the same divided by m}.
std::pair<double, double> voc_size(const EmpiricalTable& table);

struct MetricRecord {
  double accuracy = 0.0;
  double fitness = 0.0;
  double voc_sum = 0.0;
  double voc_mean = 0.0;
  double signal_entropy = 0.0;
  double target_certainty = 0.0;
  double signal_certainty = 0.0;
  double max_contextless_accuracy = 0.0;
  double sender_context_gain = 0.0;
  double receiver_context_gain = 0.0;
};

MetricRecord compute_metrics(const std::vector<evaluator::EpisodeLog>& episodes,
                             std::size_t signal_length, double p_voc);

}  // namespace siglab::metrics
