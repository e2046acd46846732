#include "siglab/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "siglab/agents.hpp"

namespace siglab::es {

namespace {
// Stream tags for deterministic seed derivation.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kEpisodeStream = 3;
constexpr std::uint64_t kCentralEvalStream = 4;
}  // namespace

void EsConfig::validate() const {
  if (population == 0 || population % 2 != 0) {
    throw std::invalid_argument("EsConfig: population must be positive and even");
  }
  if (noise_sigma <= 0.0) {
    throw std::invalid_argument("EsConfig: noise_sigma must be positive");
  }
  if (episodes_per_eval == 0) {
    throw std::invalid_argument("EsConfig: episodes_per_eval must be positive");
  }
}

Population sample_population(const nn::ParamVec& theta, const EsConfig& cfg,
                             Rng& rng) {
  cfg.validate();
  const std::size_t pairs = cfg.population / 2;
  const std::size_t dim = theta.size();
  Population pop;
  pop.noises.resize(pairs);
  pop.candidates.resize(cfg.population);
  for (std::size_t p = 0; p < pairs; ++p) {
    auto& eps = pop.noises[p];
    eps.resize(dim);
    for (double& e : eps) e = rng.normal();
    auto& plus = pop.candidates[2 * p];
    auto& minus = pop.candidates[2 * p + 1];
    plus.resize(dim);
    minus.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      plus[i] = theta[i] + cfg.noise_sigma * eps[i];
      minus[i] = theta[i] - cfg.noise_sigma * eps[i];
    }
  }
  return pop;
}

std::vector<double> estimate_gradient(const std::vector<double>& fitnesses,
                                      const std::vector<std::vector<double>>& noises,
                                      const EsConfig& cfg) {
  if (fitnesses.size() != cfg.population ||
      noises.size() != cfg.population / 2) {
    throw std::logic_error("estimate_gradient: misaligned fitness/noise lists");
  }
  std::vector<double> f = fitnesses;
  if (cfg.fitness_shaping) {
    // Centered ranks in [-0.5, 0.5]; ties resolved by candidate index.
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fitnesses[a] < fitnesses[b];
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      f[order[rank]] = double(rank) / double(order.size() - 1) - 0.5;
    }
  }
  const std::size_t dim = noises.front().size();
  std::vector<double> grad(dim, 0.0);
  const double scale = 1.0 / (double(cfg.population) * cfg.noise_sigma);
  for (std::size_t p = 0; p < noises.size(); ++p) {
    const double delta = f[2 * p] - f[2 * p + 1];
    const auto& eps = noises[p];
    for (std::size_t i = 0; i < dim; ++i) {
      grad[i] += scale * eps[i] * delta;
    }
  }
  return grad;
}

void adamw_step(nn::ParamVec& theta, const std::vector<double>& grad,
                AdamWState& state, const EsConfig& cfg,
                std::size_t sender_slice_len) {
  if (grad.size() != theta.size() || state.m.size() != theta.size()) {
    throw std::logic_error("adamw_step: dimension mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(AdamWState::beta1, double(state.step));
  const double bc2 = 1.0 - std::pow(AdamWState::beta2, double(state.step));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double lr = i < sender_slice_len ? cfg.lr_sender : cfg.lr_receiver;
    state.m[i] = AdamWState::beta1 * state.m[i] +
                 (1.0 - AdamWState::beta1) * grad[i];
    state.v[i] = AdamWState::beta2 * state.v[i] +
                 (1.0 - AdamWState::beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    // Ascent step, then decoupled decay.
    theta[i] += lr * m_hat / (std::sqrt(v_hat) + AdamWState::eps);
    theta[i] *= 1.0 - lr * cfg.weight_decay;
  }
}

namespace {

void evaluate_candidates(const evaluator::Evaluator& evaluator,
                         const Population& pop, const EsConfig& es_cfg,
                         std::uint64_t seed, std::size_t iteration,
                         std::size_t threads, std::vector<double>& fitnesses) {
  fitnesses.assign(pop.candidates.size(), 0.0);
  auto eval_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      // Antithetic pair members share the episode stream (common random
      // numbers); distinct pairs get distinct streams.
      const std::uint64_t pair_index = k / 2;
      const std::uint64_t batch_seed =
          derive_seed(seed, kEpisodeStream, iteration, pair_index);
      fitnesses[k] = evaluator
                         .run_batch(pop.candidates[k], es_cfg.episodes_per_eval,
                                    es_cfg.p_voc, batch_seed)
                         .fitness;
    }
  };
  const std::size_t n = pop.candidates.size();
  if (threads <= 1 || n <= 1) {
    eval_range(0, n);
    return;
  }
  const std::size_t workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back(eval_range, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void train(const evaluator::Evaluator& evaluator, const TrainConfig& cfg,
           const IterationCallback& callback) {
  cfg.es.validate();
  const agents::ArchSpec& arch = evaluator.arch();
  Rng init_rng(derive_seed(cfg.seed, kInitStream));
  nn::ParamVec theta = agents::init_params(arch, cfg.init_sigma, init_rng);
  const std::size_t sender_len =
      agents::AgentPair::build(arch).sender_param_count();
  AdamWState state(theta.size());

  auto metrics_at = [&](std::size_t iteration) -> MetricsFn {
    return [&, iteration]() {
      const std::uint64_t eval_seed =
          derive_seed(cfg.seed, kCentralEvalStream, iteration, 0);
      const evaluator::BatchResult batch = evaluator.run_batch(
          theta, cfg.es.episodes_per_eval, cfg.es.p_voc, eval_seed);
      return metrics::compute_metrics(batch.episodes, arch.signal_length,
                                      cfg.es.p_voc);
    };
  };

  if (!callback(0, theta, state, metrics_at(0))) return;

  std::vector<double> fitnesses;
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    Rng noise_rng(derive_seed(cfg.seed, kNoiseStream, it, 0));
    const Population pop = sample_population(theta, cfg.es, noise_rng);
    evaluate_candidates(evaluator, pop, cfg.es, cfg.seed, it, cfg.threads,
                        fitnesses);
    const std::vector<double> grad =
        estimate_gradient(fitnesses, pop.noises, cfg.es);
    adamw_step(theta, grad, state, cfg.es, sender_len);
    if (!callback(it, theta, state, metrics_at(it))) return;
  }
}

}  // namespace siglab::es
