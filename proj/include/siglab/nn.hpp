#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace siglab::nn {

struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weight;  // row-major, out_dim x in_dim
  std::vector<double> bias;    // out_dim

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out)
      : in_dim(in), out_dim(out), weight(in * out, 0.0), bias(out, 0.0) {}

  std::size_t param_count() const { return out_dim * (in_dim + 1); }
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};

// Single LSTM cell. Gate pre-activations are stored fused: w_input is
// (4*hidden) x in, w_hidden is (4*hidden) x hidden, bias is 4*hidden, with
// gate row blocks ordered [input, forget, candidate, output].
struct LstmCell {
  std::size_t in_dim = 0;
  std::size_t hidden_dim = 0;
  std::vector<double> w_input;
  std::vector<double> w_hidden;
  std::vector<double> bias;

  LstmCell() = default;
  LstmCell(std::size_t in, std::size_t hidden)
      : in_dim(in),
        hidden_dim(hidden),
        w_input(4 * hidden * in, 0.0),
        w_hidden(4 * hidden * hidden, 0.0),
        bias(4 * hidden, 0.0) {}

  std::size_t param_count() const {
    return 4 * hidden_dim * (in_dim + hidden_dim + 1);
  }
  LstmState fresh_state() const {
    return LstmState{std::vector<double>(hidden_dim, 0.0),
                     std::vector<double>(hidden_dim, 0.0)};
  }
};

// y = W x + b
void dense_forward(const DenseLayer& layer, const double* x, double* out);
std::vector<double> dense_forward(const DenseLayer& layer,
                                  const std::vector<double>& x);

void relu_inplace(double* x, std::size_t n);
std::vector<double> relu(std::vector<double> x);
double sigmoid(double x);
void sigmoid_inplace(double* x, std::size_t n);
std::vector<double> sigmoid(std::vector<double> x);
// Max-subtracted softmax; input must be nonempty.
std::vector<double> softmax(const std::vector<double>& logits);

// Advances the cell one step. `gates_scratch` must hold 4*hidden_dim values;
// it avoids per-step allocation in episode loops.
void lstm_step(const LstmCell& cell, const double* x, LstmState& state,
               double* gates_scratch);
std::pair<std::vector<double>, LstmState> lstm_step(const LstmCell& cell,
                                                    const std::vector<double>& x,
                                                    const LstmState& state);

// Flat parameter vector with a named slice layout, so a whole agent pair can
// be perturbed, serialized and optimized as one contiguous theta.
struct ParamLayout {
  struct Entry {
    std::string name;
    std::size_t offset;
    std::size_t count;
  };
  std::vector<Entry> entries;
  std::size_t total = 0;

  std::size_t add(const std::string& name, std::size_t count) {
    entries.push_back({name, total, count});
    total += count;
    return total - count;
  }
  const Entry& find(const std::string& name) const;
};

using ParamVec = std::vector<double>;

// Serialization order within each layer: dense = weight rows then bias;
// lstm = w_input, w_hidden, bias.
void flatten_dense(const DenseLayer& layer, double* dst);
void unflatten_dense(DenseLayer& layer, const double* src);
void flatten_lstm(const LstmCell& cell, double* dst);
void unflatten_lstm(LstmCell& cell, const double* src);

}  // namespace siglab::nn
