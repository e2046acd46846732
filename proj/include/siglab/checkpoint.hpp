#pragma once

#include <string>
#include <vector>

#include "siglab/es.hpp"
#include "siglab/nn.hpp"

namespace siglab::checkpoint {

// Binary layout: magic "SGLAB1\n", parameter count as 8-byte little-endian
// unsigned, theta as consecutive little-endian IEEE-754 doubles, then the
// AdamW first and second moment vectors in the same layout.
void save(const std::string& path, const nn::ParamVec& theta,
          const es::AdamWState& state);

struct Loaded {
  nn::ParamVec theta;
  std::vector<double> moment1;
  std::vector<double> moment2;
};

// Throws std::runtime_error on missing file, bad magic, or truncation.
Loaded load(const std::string& path);

}  // namespace siglab::checkpoint
