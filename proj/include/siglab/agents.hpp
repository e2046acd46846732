#pragma once

#include <cstdint>
#include <vector>

#include "siglab/nn.hpp"
#include "siglab/rng.hpp"
#include "siglab/world.hpp"

namespace siglab::agents {

enum class SenderKind { T, TC };

const char* to_string(SenderKind kind);

struct SignalVec {
  std::vector<std::uint8_t> bits;  // each 0 or 1

  // Bits read as an integer, bit j of the signal = bit j of the key.
  std::uint32_t key() const {
    std::uint32_t k = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
      k |= std::uint32_t(bits[j]) << j;
    }
    return k;
  }
};

struct ArchSpec {
  SenderKind kind = SenderKind::T;
  std::size_t obj_encoding_len = 6;
  std::size_t signal_length = 10;
  std::size_t dense_width = 50;
  std::size_t lstm_hidden = 50;
};

// T sender: dense(obj -> w) relu dense(w -> w) relu dense(w -> m) sigmoid.
// TC sender: lstm(2*obj -> h) over the context sequence, then
//            dense(h -> w) relu dense(w -> m) sigmoid.
struct SenderPolicy {
  SenderKind kind = SenderKind::T;
  nn::LstmCell lstm;                  // TC only
  std::vector<nn::DenseLayer> dense;  // 3 layers for T, 2 for TC
};

// Scores one (object, signal) pair per forward pass:
// dense(obj+m -> w) relu dense(w -> w) relu dense(w -> 1).
struct ReceiverPolicy {
  std::vector<nn::DenseLayer> dense;
};

// Scratch buffers shared by all forward passes; one per evaluator thread.
struct Workspace {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> gates;
  std::vector<double> input;
  nn::LstmState state;
};

// Sender and receiver materialized together, loadable from one flat theta.
// The sender slice is [0, sender_param_count), the receiver slice the rest.
struct AgentPair {
  ArchSpec arch;
  SenderPolicy sender;
  ReceiverPolicy receiver;

  static AgentPair build(const ArchSpec& arch);
  static nn::ParamLayout layout(const ArchSpec& arch);

  std::size_t param_count() const;
  std::size_t sender_param_count() const;

  void load(const nn::ParamVec& theta);  // throws on length mismatch
  nn::ParamVec flatten() const;

  Workspace make_workspace() const;
};

// Random initial parameters: i.i.d. Normal(0, init_sigma^2).
nn::ParamVec init_params(const ArchSpec& arch, double init_sigma, Rng& rng);

// Per-bit emission probabilities. `out` must hold signal_length values.
void emit_probs_T(const AgentPair& pair, const double* target_encoding,
                  Workspace& ws, double* out);
// Context encodings in episode presentation order; each LSTM step sees
// concat(target, context member).
void emit_probs_TC(const AgentPair& pair, const double* target_encoding,
                   const std::vector<const double*>& context_encodings,
                   Workspace& ws, double* out);
// Dispatches on pair.arch.kind.
std::vector<double> emit_probs(const AgentPair& pair,
                               const world::ObjectVec& target,
                               const std::vector<const double*>& context_encodings,
                               Workspace& ws);

SignalVec sample_signal(const std::vector<double>& probs, Rng& rng);

// Alignment score of one object against a signal.
double receiver_score(const AgentPair& pair, const double* object_encoding,
                      const SignalVec& signal, Workspace& ws);

// Softmax-sampled choice over the context; returns an index into
// `context_encodings` (presentation order).
std::size_t receiver_choose(const AgentPair& pair, const SignalVec& signal,
                            const std::vector<const double*>& context_encodings,
                            Workspace& ws, Rng& rng);

}  // namespace siglab::agents
