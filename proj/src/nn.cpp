#include "siglab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "siglab/kernels.hpp"

namespace siglab::nn {

void dense_forward(const DenseLayer& layer, const double* x, double* out) {
  kernels::active().matvec(layer.weight.data(), x, layer.bias.data(), out,
                           layer.out_dim, layer.in_dim);
}

std::vector<double> dense_forward(const DenseLayer& layer,
                                  const std::vector<double>& x) {
  if (x.size() != layer.in_dim) {
    throw std::invalid_argument("dense_forward: input length " +
                                std::to_string(x.size()) + " != in_dim " +
                                std::to_string(layer.in_dim));
  }
  std::vector<double> out(layer.out_dim);
  dense_forward(layer, x.data(), out.data());
  return out;
}

void relu_inplace(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

std::vector<double> relu(std::vector<double> x) {
  relu_inplace(x.data(), x.size());
  return x;
}

double sigmoid(double x) {
  // Symmetric form: never exponentiates a large positive argument.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void sigmoid_inplace(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = sigmoid(x[i]);
}

std::vector<double> sigmoid(std::vector<double> x) {
  sigmoid_inplace(x.data(), x.size());
  return x;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

void lstm_step(const LstmCell& cell, const double* x, LstmState& state,
               double* gates) {
  const std::size_t h = cell.hidden_dim;
  const auto& k = kernels::active();
  k.matvec(cell.w_input.data(), x, cell.bias.data(), gates, 4 * h,
           cell.in_dim);
  k.matvec_acc(cell.w_hidden.data(), state.h.data(), gates, 4 * h, h);
  double* gi = gates;
  double* gf = gates + h;
  double* gc = gates + 2 * h;
  double* go = gates + 3 * h;
  for (std::size_t j = 0; j < h; ++j) {
    const double i = sigmoid(gi[j]);
    const double f = sigmoid(gf[j]);
    const double g = std::tanh(gc[j]);
    const double o = sigmoid(go[j]);
    const double c = f * state.c[j] + i * g;
    state.c[j] = c;
    state.h[j] = o * std::tanh(c);
  }
}

std::pair<std::vector<double>, LstmState> lstm_step(
    const LstmCell& cell, const std::vector<double>& x,
    const LstmState& state) {
  if (x.size() != cell.in_dim || state.h.size() != cell.hidden_dim ||
      state.c.size() != cell.hidden_dim) {
    throw std::invalid_argument("lstm_step: dimension mismatch");
  }
  LstmState s = state;
  std::vector<double> gates(4 * cell.hidden_dim);
  lstm_step(cell, x.data(), s, gates.data());
  return {s.h, s};
}

const ParamLayout::Entry& ParamLayout::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw std::invalid_argument("ParamLayout: no slice named " + name);
}

void flatten_dense(const DenseLayer& layer, double* dst) {
  std::memcpy(dst, layer.weight.data(), layer.weight.size() * sizeof(double));
  std::memcpy(dst + layer.weight.size(), layer.bias.data(),
              layer.bias.size() * sizeof(double));
}

void unflatten_dense(DenseLayer& layer, const double* src) {
  std::memcpy(layer.weight.data(), src, layer.weight.size() * sizeof(double));
  std::memcpy(layer.bias.data(), src + layer.weight.size(),
              layer.bias.size() * sizeof(double));
}

void flatten_lstm(const LstmCell& cell, double* dst) {
  std::memcpy(dst, cell.w_input.data(), cell.w_input.size() * sizeof(double));
  dst += cell.w_input.size();
  std::memcpy(dst, cell.w_hidden.data(),
              cell.w_hidden.size() * sizeof(double));
  dst += cell.w_hidden.size();
  std::memcpy(dst, cell.bias.data(), cell.bias.size() * sizeof(double));
}

void unflatten_lstm(LstmCell& cell, const double* src) {
  std::memcpy(cell.w_input.data(), src, cell.w_input.size() * sizeof(double));
  src += cell.w_input.size();
  std::memcpy(cell.w_hidden.data(), src,
              cell.w_hidden.size() * sizeof(double));
  src += cell.w_hidden.size();
  std::memcpy(cell.bias.data(), src, cell.bias.size() * sizeof(double));
}

}  // namespace siglab::nn
