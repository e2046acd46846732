#include "siglab/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siglab::world {

void WorldSpec::validate() const {
  if (num_properties == 0 || values_per_property == 0) {
    throw std::invalid_argument("WorldSpec: properties and values must be positive");
  }
  if (context_size < 2) {
    throw std::invalid_argument("WorldSpec: context_size must be at least 2");
  }
  if (num_objects() < context_size) {
    throw std::invalid_argument(
        "WorldSpec: context_size exceeds the number of objects");
  }
}

std::vector<ObjectVec> enumerate_objects(const WorldSpec& spec) {
  spec.validate();
  const std::size_t n = spec.num_objects();
  std::vector<ObjectVec> objects(n);
  for (ObjectId id = 0; id < n; ++id) {
    objects[id].id = id;
    objects[id].encoding.assign(spec.encoding_length(), 0.0);
    std::size_t rem = id;
    // Most significant property first.
    for (std::size_t p = spec.num_properties; p-- > 0;) {
      const std::size_t value = rem % spec.values_per_property;
      rem /= spec.values_per_property;
      objects[id].encoding[p * spec.values_per_property + value] = 1.0;
    }
  }
  return objects;
}

Context sample_context(const WorldSpec& spec, Rng& rng) {
  const std::size_t n = spec.num_objects();
  const std::size_t k = spec.context_size;
  // Partial Fisher-Yates over object ids; the first k entries come out in
  // uniformly random order, which doubles as the presentation order.
  std::vector<ObjectId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(ids[i], ids[j]);
  }
  Context ctx;
  ctx.object_ids.assign(ids.begin(), ids.begin() + k);
  ctx.target_id = ctx.object_ids[rng.uniform_index(k)];
  return ctx;
}

std::vector<double> constrained_select(const std::vector<double>& logits,
                                       const Context& context) {
  if (context.object_ids.empty()) {
    throw std::logic_error("constrained_select: empty context");
  }
  double max_logit = -std::numeric_limits<double>::infinity();
  for (ObjectId id : context.object_ids) {
    if (id >= logits.size()) {
      throw std::invalid_argument("constrained_select: context id out of range");
    }
    max_logit = std::max(max_logit, logits[id]);
  }
  std::vector<double> probs(logits.size(), 0.0);
  double sum = 0.0;
  for (ObjectId id : context.object_ids) {
    probs[id] = std::exp(logits[id] - max_logit);
    sum += probs[id];
  }
  for (ObjectId id : context.object_ids) probs[id] /= sum;
  return probs;
}

}  // namespace siglab::world
