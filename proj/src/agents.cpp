#include "siglab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siglab::agents {

const char* to_string(SenderKind kind) {
  return kind == SenderKind::T ? "T" : "TC";
}

AgentPair AgentPair::build(const ArchSpec& arch) {
  AgentPair pair;
  pair.arch = arch;
  pair.sender.kind = arch.kind;
  const std::size_t w = arch.dense_width;
  const std::size_t m = arch.signal_length;
  const std::size_t obj = arch.obj_encoding_len;
  if (arch.kind == SenderKind::T) {
    pair.sender.dense = {nn::DenseLayer(obj, w), nn::DenseLayer(w, w),
                         nn::DenseLayer(w, m)};
  } else {
    pair.sender.lstm = nn::LstmCell(2 * obj, arch.lstm_hidden);
    pair.sender.dense = {nn::DenseLayer(arch.lstm_hidden, w),
                         nn::DenseLayer(w, m)};
  }
  pair.receiver.dense = {nn::DenseLayer(obj + m, w), nn::DenseLayer(w, w),
                         nn::DenseLayer(w, 1)};
  return pair;
}

nn::ParamLayout AgentPair::layout(const ArchSpec& arch) {
  AgentPair pair = build(arch);
  nn::ParamLayout layout;
  if (arch.kind == SenderKind::TC) {
    layout.add("sender.lstm", pair.sender.lstm.param_count());
  }
  for (std::size_t i = 0; i < pair.sender.dense.size(); ++i) {
    layout.add("sender.dense" + std::to_string(i),
               pair.sender.dense[i].param_count());
  }
  for (std::size_t i = 0; i < pair.receiver.dense.size(); ++i) {
    layout.add("receiver.dense" + std::to_string(i),
               pair.receiver.dense[i].param_count());
  }
  return layout;
}

std::size_t AgentPair::sender_param_count() const {
  std::size_t n = 0;
  if (arch.kind == SenderKind::TC) n += sender.lstm.param_count();
  for (const auto& l : sender.dense) n += l.param_count();
  return n;
}

std::size_t AgentPair::param_count() const {
  std::size_t n = sender_param_count();
  for (const auto& l : receiver.dense) n += l.param_count();
  return n;
}

void AgentPair::load(const nn::ParamVec& theta) {
  if (theta.size() != param_count()) {
    throw std::runtime_error("AgentPair::load: parameter vector length " +
                             std::to_string(theta.size()) + " != expected " +
                             std::to_string(param_count()));
  }
  const double* p = theta.data();
  if (arch.kind == SenderKind::TC) {
    nn::unflatten_lstm(sender.lstm, p);
    p += sender.lstm.param_count();
  }
  for (auto& l : sender.dense) {
    nn::unflatten_dense(l, p);
    p += l.param_count();
  }
  for (auto& l : receiver.dense) {
    nn::unflatten_dense(l, p);
    p += l.param_count();
  }
}

nn::ParamVec AgentPair::flatten() const {
  nn::ParamVec theta(param_count());
  double* p = theta.data();
  if (arch.kind == SenderKind::TC) {
    nn::flatten_lstm(sender.lstm, p);
    p += sender.lstm.param_count();
  }
  for (const auto& l : sender.dense) {
    nn::flatten_dense(l, p);
    p += l.param_count();
  }
  for (const auto& l : receiver.dense) {
    nn::flatten_dense(l, p);
    p += l.param_count();
  }
  return theta;
}

Workspace AgentPair::make_workspace() const {
  Workspace ws;
  const std::size_t w = std::max(arch.dense_width,
                                 std::max(arch.lstm_hidden, arch.signal_length));
  ws.a.assign(w, 0.0);
  ws.b.assign(w, 0.0);
  ws.gates.assign(4 * arch.lstm_hidden, 0.0);
  ws.input.assign(2 * arch.obj_encoding_len + arch.signal_length, 0.0);
  ws.state.h.assign(arch.lstm_hidden, 0.0);
  ws.state.c.assign(arch.lstm_hidden, 0.0);
  return ws;
}

nn::ParamVec init_params(const ArchSpec& arch, double init_sigma, Rng& rng) {
  nn::ParamVec theta(AgentPair::layout(arch).total);
  for (double& v : theta) v = init_sigma * rng.normal();
  return theta;
}

namespace {

// Runs a relu-interleaved dense stack; final layer is left linear.
// Result ends up in ws.a.
void dense_stack(const std::vector<nn::DenseLayer>& layers, const double* x,
                 Workspace& ws) {
  const double* in = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    double* out = (i % 2 == 0) ? ws.a.data() : ws.b.data();
    nn::dense_forward(layers[i], in, out);
    if (i + 1 < layers.size()) nn::relu_inplace(out, layers[i].out_dim);
    in = out;
  }
  if (layers.size() % 2 == 0) {
    std::copy_n(ws.b.data(), layers.back().out_dim, ws.a.data());
  }
}

}  // namespace

void emit_probs_T(const AgentPair& pair, const double* target_encoding,
                  Workspace& ws, double* out) {
  dense_stack(pair.sender.dense, target_encoding, ws);
  const std::size_t m = pair.arch.signal_length;
  std::copy_n(ws.a.data(), m, out);
  nn::sigmoid_inplace(out, m);
}

void emit_probs_TC(const AgentPair& pair, const double* target_encoding,
                   const std::vector<const double*>& context_encodings,
                   Workspace& ws, double* out) {
  const std::size_t obj = pair.arch.obj_encoding_len;
  std::fill(ws.state.h.begin(), ws.state.h.end(), 0.0);
  std::fill(ws.state.c.begin(), ws.state.c.end(), 0.0);
  std::copy_n(target_encoding, obj, ws.input.data());
  for (const double* enc : context_encodings) {
    std::copy_n(enc, obj, ws.input.data() + obj);
    nn::lstm_step(pair.sender.lstm, ws.input.data(), ws.state,
                  ws.gates.data());
  }
  dense_stack(pair.sender.dense, ws.state.h.data(), ws);
  const std::size_t m = pair.arch.signal_length;
  std::copy_n(ws.a.data(), m, out);
  nn::sigmoid_inplace(out, m);
}

std::vector<double> emit_probs(const AgentPair& pair,
                               const world::ObjectVec& target,
                               const std::vector<const double*>& context_encodings,
                               Workspace& ws) {
  std::vector<double> probs(pair.arch.signal_length);
  if (pair.arch.kind == SenderKind::T) {
    emit_probs_T(pair, target.encoding.data(), ws, probs.data());
  } else {
    emit_probs_TC(pair, target.encoding.data(), context_encodings, ws,
                  probs.data());
  }
  return probs;
}

SignalVec sample_signal(const std::vector<double>& probs, Rng& rng) {
  SignalVec sig;
  sig.bits.resize(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    sig.bits[j] = rng.bernoulli(probs[j]) ? 1 : 0;
  }
  return sig;
}

double receiver_score(const AgentPair& pair, const double* object_encoding,
                      const SignalVec& signal, Workspace& ws) {
  const std::size_t obj = pair.arch.obj_encoding_len;
  const std::size_t m = pair.arch.signal_length;
  std::copy_n(object_encoding, obj, ws.input.data());
  for (std::size_t j = 0; j < m; ++j) {
    ws.input[obj + j] = double(signal.bits[j]);
  }
  dense_stack(pair.receiver.dense, ws.input.data(), ws);
  return ws.a[0];
}

std::size_t receiver_choose(const AgentPair& pair, const SignalVec& signal,
                            const std::vector<const double*>& context_encodings,
                            Workspace& ws, Rng& rng) {
  if (context_encodings.empty()) {
    throw std::logic_error("receiver_choose: empty context");
  }
  std::vector<double> scores(context_encodings.size());
  for (std::size_t k = 0; k < context_encodings.size(); ++k) {
    scores[k] = receiver_score(pair, context_encodings[k], signal, ws);
  }
  const std::vector<double> probs = nn::softmax(scores);
  double u = rng.uniform();
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
    u -= probs[k];
    if (u < 0.0) return k;
  }
  return probs.size() - 1;
}

}  // namespace siglab::agents
