#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "siglab/agents.hpp"
#include "siglab/nn.hpp"
#include "siglab/world.hpp"

namespace siglab::evaluator {

struct EpisodeLog {
  world::ObjectId target_id = 0;
  std::vector<world::ObjectId> context_ids;  // presentation order
  agents::SignalVec signal;
  world::ObjectId response_id = 0;
  int reward = 0;  // 1 iff response_id == target_id
};

struct BatchResult {
  std::vector<EpisodeLog> episodes;
  double accuracy = 0.0;
  double voc_sum = 0.0;   // sum over bits of binary entropies (used in fitness)
  double voc_mean = 0.0;  // voc_sum / m
  double fitness = 0.0;   // accuracy - p_voc * voc_sum
};

// Memoizes forward passes that recur within one batch at fixed theta: the
// T sender depends only on the target id, the receiver score only on the
// (signal, object) pair. Purely an evaluation-order-independent speedup.
struct EvalCache {
  std::vector<std::vector<double>> sender_probs_by_target;
  std::vector<std::uint8_t> sender_probs_valid;
  std::unordered_map<std::uint64_t, double> receiver_scores;

  void reset(std::size_t num_objects, std::size_t signal_length);
};

class Evaluator {
 public:
  Evaluator(const world::WorldSpec& world_spec, const agents::ArchSpec& arch);

  const world::WorldSpec& world_spec() const { return world_spec_; }
  const agents::ArchSpec& arch() const { return arch_; }
  const std::vector<world::ObjectVec>& objects() const { return objects_; }
  std::size_t param_count() const { return param_count_; }

  // One full communication episode at the loaded pair's parameters.
  EpisodeLog run_episode(const agents::AgentPair& pair, agents::Workspace& ws,
                         EvalCache& cache, Rng& rng) const;

  // n independent episodes; episode i draws its rng stream from
  // (seed, i), so results do not depend on evaluation order.
  BatchResult run_batch(const nn::ParamVec& theta, std::size_t n, double p_voc,
                        std::uint64_t seed) const;

 private:
  world::WorldSpec world_spec_;
  agents::ArchSpec arch_;
  std::vector<world::ObjectVec> objects_;
  std::size_t param_count_;
};

}  // namespace siglab::evaluator
