#include "siglab/evaluator.hpp"

#include <algorithm>

#include "siglab/entropy.hpp"

namespace siglab::evaluator {

void EvalCache::reset(std::size_t num_objects, std::size_t signal_length) {
  sender_probs_by_target.assign(num_objects,
                                std::vector<double>(signal_length, 0.0));
  sender_probs_valid.assign(num_objects, 0);
  receiver_scores.clear();
}

Evaluator::Evaluator(const world::WorldSpec& world_spec,
                     const agents::ArchSpec& arch)
    : world_spec_(world_spec), arch_(arch) {
  world_spec_.validate();
  objects_ = world::enumerate_objects(world_spec_);
  param_count_ = agents::AgentPair::layout(arch_).total;
}

EpisodeLog Evaluator::run_episode(const agents::AgentPair& pair,
                                  agents::Workspace& ws, EvalCache& cache,
                                  Rng& rng) const {
  EpisodeLog log;
  const world::Context ctx = world::sample_context(world_spec_, rng);
  log.target_id = ctx.target_id;
  log.context_ids = ctx.object_ids;

  std::vector<const double*> context_encodings(ctx.object_ids.size());
  for (std::size_t k = 0; k < ctx.object_ids.size(); ++k) {
    context_encodings[k] = objects_[ctx.object_ids[k]].encoding.data();
  }
  const double* target_encoding = objects_[ctx.target_id].encoding.data();

  const std::vector<double>* probs = nullptr;
  std::vector<double> tc_probs;
  if (pair.arch.kind == agents::SenderKind::T) {
    auto& cached = cache.sender_probs_by_target[ctx.target_id];
    if (!cache.sender_probs_valid[ctx.target_id]) {
      agents::emit_probs_T(pair, target_encoding, ws, cached.data());
      cache.sender_probs_valid[ctx.target_id] = 1;
    }
    probs = &cached;
  } else {
    tc_probs.resize(arch_.signal_length);
    agents::emit_probs_TC(pair, target_encoding, context_encodings, ws,
                          tc_probs.data());
    probs = &tc_probs;
  }
  log.signal = agents::sample_signal(*probs, rng);

  const std::uint64_t sig_key = log.signal.key();
  std::vector<double> scores(ctx.object_ids.size());
  for (std::size_t k = 0; k < ctx.object_ids.size(); ++k) {
    const std::uint64_t cache_key =
        (sig_key << 16) | std::uint64_t(ctx.object_ids[k]);
    auto it = cache.receiver_scores.find(cache_key);
    if (it == cache.receiver_scores.end()) {
      const double s =
          agents::receiver_score(pair, context_encodings[k], log.signal, ws);
      it = cache.receiver_scores.emplace(cache_key, s).first;
    }
    scores[k] = it->second;
  }

  const std::vector<double> choice_probs = nn::softmax(scores);
  double u = rng.uniform();
  std::size_t chosen = choice_probs.size() - 1;
  for (std::size_t k = 0; k + 1 < choice_probs.size(); ++k) {
    u -= choice_probs[k];
    if (u < 0.0) {
      chosen = k;
      break;
    }
  }
  log.response_id = ctx.object_ids[chosen];
  log.reward = log.response_id == log.target_id ? 1 : 0;
  return log;
}

BatchResult Evaluator::run_batch(const nn::ParamVec& theta, std::size_t n,
                                 double p_voc, std::uint64_t seed) const {
  agents::AgentPair pair = agents::AgentPair::build(arch_);
  pair.load(theta);
  agents::Workspace ws = pair.make_workspace();
  EvalCache cache;
  cache.reset(objects_.size(), arch_.signal_length);

  BatchResult result;
  result.episodes.reserve(n);
  std::size_t correct = 0;
  std::vector<std::size_t> ones_per_bit(arch_.signal_length, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    result.episodes.push_back(run_episode(pair, ws, cache, rng));
    const EpisodeLog& log = result.episodes.back();
    correct += std::size_t(log.reward);
    for (std::size_t j = 0; j < arch_.signal_length; ++j) {
      ones_per_bit[j] += log.signal.bits[j];
    }
  }
  result.accuracy = double(correct) / double(n);
  for (std::size_t j = 0; j < arch_.signal_length; ++j) {
    result.voc_sum += binary_entropy(double(ones_per_bit[j]) / double(n));
  }
  result.voc_mean = result.voc_sum / double(arch_.signal_length);
  result.fitness = result.accuracy - p_voc * result.voc_sum;
  return result;
}

}  // namespace siglab::evaluator
