#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "siglab/agents.hpp"
#include "siglab/es.hpp"
#include "siglab/world.hpp"

namespace siglab::config {

// Full experiment description. Defaults reproduce the reference setup:
// 2 properties x 3 values, context 3, signal length 10, ES population 50,
// noise sigma 0.1, AdamW(wd 0.01) with lr 0.02 (receiver and T sender) or
// 0.05 (TC sender), 400 episodes per evaluation.
struct ExperimentConfig {
  world::WorldSpec world;
  agents::SenderKind sender_kind = agents::SenderKind::T;
  std::size_t signal_length = 10;
  es::EsConfig es;
  double init_sigma = 0.1;
  std::size_t iterations = 50000;
  std::size_t runs = 10;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::size_t checkpoint_every = 0;  // 0 = final checkpoint only
  std::size_t metric_every = 50;

  // True once `lr_sender` was given explicitly; otherwise the sender kind
  // picks the default (0.02 for T, 0.05 for TC).
  bool lr_sender_explicit = false;

  agents::ArchSpec arch() const;
  void validate() const;  // throws std::invalid_argument
};

// Line-oriented "key = value" format with '#' comments. Unknown keys and
// out-of-range values throw std::runtime_error naming the line number.
// Missing keys keep their defaults.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);

// Round-trippable echo of every setting, used for checkpoint sidecars.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace siglab::config
