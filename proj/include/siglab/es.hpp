#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "siglab/evaluator.hpp"
#include "siglab/metrics.hpp"
#include "siglab/nn.hpp"
#include "siglab/rng.hpp"

namespace siglab::es {

struct EsConfig {
  std::size_t population = 50;  // total candidate evaluations; must be even
  double noise_sigma = 0.1;
  double lr_sender = 0.02;
  double lr_receiver = 0.02;
  double weight_decay = 0.01;
  double p_voc = 0.0;
  std::size_t episodes_per_eval = 400;
  bool fitness_shaping = false;  // centered-rank transform, off by default

  void validate() const;  // throws std::invalid_argument
};

// Mirrored Gaussian population. Candidates come in antithetic pairs:
// candidate 2p is theta + sigma*eps_p, candidate 2p+1 is theta - sigma*eps_p.
struct Population {
  std::vector<std::vector<double>> noises;  // population/2 vectors
  std::vector<nn::ParamVec> candidates;     // population vectors
};

Population sample_population(const nn::ParamVec& theta, const EsConfig& cfg,
                             Rng& rng);

// g_hat = 1/(population * sigma) * sum_k eps_k * F_k, each mirrored candidate
// contributing with its own noise sign. `fitnesses` is aligned with
// Population::candidates. With fitness_shaping the raw values are first
// replaced by centered ranks in [-0.5, 0.5].
std::vector<double> estimate_gradient(const std::vector<double>& fitnesses,
                                      const std::vector<std::vector<double>>& noises,
                                      const EsConfig& cfg);

struct AdamWState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;

  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double eps = 1e-8;

  explicit AdamWState(std::size_t dim = 0) : m(dim, 0.0), v(dim, 0.0) {}
};

// One AdamW gradient-ascent step with decoupled weight decay. Indices below
// sender_slice_len use lr_sender, the rest lr_receiver.
void adamw_step(nn::ParamVec& theta, const std::vector<double>& grad,
                AdamWState& state, const EsConfig& cfg,
                std::size_t sender_slice_len);

struct TrainConfig {
  EsConfig es;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  double init_sigma = 0.1;
  std::size_t threads = 1;  // candidate-evaluation parallelism
};

// Computes metrics of a dedicated evaluation batch at the current central
// theta; invoke only when the metrics are actually wanted (it runs a fresh
// batch of episodes).
using MetricsFn = std::function<metrics::MetricRecord()>;

// Called with the initial parameters (iteration 0) and after every optimizer
// step. Returning false stops training early.
using IterationCallback =
    std::function<bool(std::size_t iteration, const nn::ParamVec& theta,
                       const AdamWState& state, const MetricsFn& metrics)>;

// Deterministic given (evaluator, cfg): candidate and episode rng streams are
// derived from (seed, iteration, pair index), independent of thread count.
void train(const evaluator::Evaluator& evaluator, const TrainConfig& cfg,
           const IterationCallback& callback);

}  // namespace siglab::es
