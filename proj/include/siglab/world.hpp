#pragma once

#include <cstddef>
#include <vector>

#include "siglab/rng.hpp"

namespace siglab::world {

using ObjectId = std::size_t;

struct WorldSpec {
  std::size_t num_properties = 2;
  std::size_t values_per_property = 3;
  std::size_t context_size = 3;

  std::size_t num_objects() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < num_properties; ++i) n *= values_per_property;
    return n;
  }
  std::size_t encoding_length() const {
    return num_properties * values_per_property;
  }
  void validate() const;  // throws std::invalid_argument
};

struct ObjectVec {
  ObjectId id = 0;
  std::vector<double> encoding;  // one-hot per property, concatenated
};

// Presentation order of `object_ids` is the order shown to the agents; it is
// randomized per episode. The target is always a member.
struct Context {
  std::vector<ObjectId> object_ids;
  ObjectId target_id = 0;
};

// All objects in canonical id order; id is the mixed-radix number over
// property values, most significant property first.
std::vector<ObjectVec> enumerate_objects(const WorldSpec& spec);

// context_size distinct objects uniformly without replacement, in random
// presentation order; target uniform over the context.
Context sample_context(const WorldSpec& spec, Rng& rng);

// The context-constrained selection over all objects: entries of z are
// treated as logits, probability mass outside the context is exactly zero and
// inside it follows softmax over the context members' logits.
std::vector<double> constrained_select(const std::vector<double>& logits,
                                       const Context& context);

}  // namespace siglab::world
