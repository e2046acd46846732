#include "siglab/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "siglab/entropy.hpp"

namespace siglab::metrics {

std::uint64_t EmpiricalTable::value(const Record& r, Var v) const {
  switch (v) {
    case Var::Signal:
      return r.signal_key;
    case Var::Target:
      return r.target_id;
    case Var::Context:
      // The full context as the sender sees it: member set plus target
      // designation. With members alone, I(signal; context) could not reach
      // I(signal; target) and the sender gain would go negative for a
      // target-determined signal.
      return (r.context_id << 16) | r.target_id;
    case Var::Response:
      return r.response_id;
    case Var::ContextSignal:
      return (value(r, Var::Context) << signal_length) | r.signal_key;
  }
  throw std::logic_error("unknown variable selector");
}

EmpiricalTable build_table(const std::vector<evaluator::EpisodeLog>& episodes,
                           std::size_t signal_length) {
  if (episodes.empty()) {
    throw std::invalid_argument("build_table: empty episode list");
  }
  EmpiricalTable t;
  t.n = episodes.size();
  t.signal_length = signal_length;
  t.records.reserve(t.n);
  t.bit_ones.assign(signal_length, 0);

  std::map<std::vector<world::ObjectId>, std::uint64_t> context_ids;
  for (const auto& ep : episodes) {
    std::vector<world::ObjectId> sorted_ctx = ep.context_ids;
    std::sort(sorted_ctx.begin(), sorted_ctx.end());
    auto [it, inserted] = context_ids.emplace(sorted_ctx, t.contexts.size());
    if (inserted) t.contexts.push_back(sorted_ctx);

    EmpiricalTable::Record r;
    r.signal_key = ep.signal.key();
    r.target_id = ep.target_id;
    r.context_id = it->second;
    r.response_id = ep.response_id;
    t.records.push_back(r);

    ++t.signal_counts[r.signal_key];
    ++t.target_counts[r.target_id];
    ++t.signal_target_counts[{r.signal_key, r.target_id}];
    for (std::size_t j = 0; j < signal_length; ++j) {
      t.bit_ones[j] += ep.signal.bits[j];
    }
  }
  return t;
}

double target_certainty(const EmpiricalTable& t) {
  double acc = 0.0;
  for (const auto& r : t.records) {
    const double sig_count = double(t.signal_counts.at(r.signal_key));
    std::size_t best = 0;
    // signal_target_counts is ordered by (signal, target); scan the signal's
    // contiguous range.
    for (auto it = t.signal_target_counts.lower_bound({r.signal_key, 0});
         it != t.signal_target_counts.end() && it->first.first == r.signal_key;
         ++it) {
      best = std::max(best, it->second);
    }
    acc += double(best) / sig_count;
  }
  return acc / double(t.n);
}

double signal_certainty(const EmpiricalTable& t) {
  double acc = 0.0;
  for (const auto& r : t.records) {
    const double tgt_count = double(t.target_counts.at(r.target_id));
    std::size_t best = 0;
    for (const auto& [key, count] : t.signal_target_counts) {
      if (key.second == r.target_id) best = std::max(best, count);
    }
    acc += double(best) / tgt_count;
  }
  return acc / double(t.n);
}

double max_contextless_accuracy(const EmpiricalTable& t) {
  std::size_t correct = 0;
  for (const auto& r : t.records) {
    const auto& ctx = t.contexts[r.context_id];  // sorted ascending
    world::ObjectId best_id = ctx.front();
    std::size_t best_count = 0;
    for (world::ObjectId o : ctx) {
      auto it = t.signal_target_counts.find({r.signal_key, o});
      const std::size_t count = it == t.signal_target_counts.end() ? 0 : it->second;
      if (count > best_count) {  // strict: ties keep the lowest id
        best_count = count;
        best_id = o;
      }
    }
    if (best_id == r.target_id) ++correct;
  }
  return double(correct) / double(t.n);
}

double mutual_information(const EmpiricalTable& t, Var x, Var y) {
  std::map<std::uint64_t, std::size_t> cx, cy;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> cxy;
  for (const auto& r : t.records) {
    const std::uint64_t vx = t.value(r, x);
    const std::uint64_t vy = t.value(r, y);
    ++cx[vx];
    ++cy[vy];
    ++cxy[{vx, vy}];
  }
  const double n = double(t.n);
  double mi = 0.0;
  for (const auto& [key, count] : cxy) {
    const double pxy = double(count) / n;
    const double px = double(cx.at(key.first)) / n;
    const double py = double(cy.at(key.second)) / n;
    mi += pxy * std::log2(pxy / (px * py));
  }
  return mi;
}

double sender_context_gain(const EmpiricalTable& t) {
  return mutual_information(t, Var::Signal, Var::Context) -
         mutual_information(t, Var::Signal, Var::Target);
}

double receiver_context_gain(const EmpiricalTable& t) {
  return mutual_information(t, Var::Response, Var::ContextSignal) -
         mutual_information(t, Var::Response, Var::Signal);
}

double signal_entropy(const EmpiricalTable& t) {
  double h = 0.0;
  for (const auto& [key, count] : t.signal_counts) {
    h += entropy_term(double(count) / double(t.n));
  }
  return h;
}

std::pair<double, double> voc_size(const EmpiricalTable& t) {
  double sum = 0.0;
  for (std::size_t j = 0; j < t.signal_length; ++j) {
    sum += binary_entropy(double(t.bit_ones[j]) / double(t.n));
  }
  return {sum, sum / double(t.signal_length)};
}

MetricRecord compute_metrics(const std::vector<evaluator::EpisodeLog>& episodes,
                             std::size_t signal_length, double p_voc) {
  const EmpiricalTable t = build_table(episodes, signal_length);
  MetricRecord m;
  std::size_t correct = 0;
  for (const auto& ep : episodes) correct += std::size_t(ep.reward);
  m.accuracy = double(correct) / double(t.n);
  std::tie(m.voc_sum, m.voc_mean) = voc_size(t);
  m.fitness = m.accuracy - p_voc * m.voc_sum;
  m.signal_entropy = signal_entropy(t);
  m.target_certainty = target_certainty(t);
  m.signal_certainty = signal_certainty(t);
  m.max_contextless_accuracy = max_contextless_accuracy(t);
  m.sender_context_gain = sender_context_gain(t);
  m.receiver_context_gain = receiver_context_gain(t);
  return m;
}

}  // namespace siglab::metrics
