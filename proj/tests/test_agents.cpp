#include <doctest.h>

#include <cmath>
#include <vector>

#include "siglab/agents.hpp"
#include "siglab/nn.hpp"
#include "siglab/rng.hpp"

using namespace siglab;
using agents::AgentPair;
using agents::ArchSpec;
using agents::SenderKind;
using agents::SignalVec;

namespace {

ArchSpec t_arch() {
  ArchSpec a;
  a.kind = SenderKind::T;
  return a;
}

ArchSpec tc_arch() {
  ArchSpec a;
  a.kind = SenderKind::TC;
  return a;
}

// Reference T-sender forward using only the naive nn:: vector API.
std::vector<double> ref_emit_T(const AgentPair& pair,
                               const std::vector<double>& target) {
  auto h = nn::relu(nn::dense_forward(pair.sender.dense[0], target));
  h = nn::relu(nn::dense_forward(pair.sender.dense[1], h));
  return nn::sigmoid(nn::dense_forward(pair.sender.dense[2], h));
}

std::vector<double> ref_receiver_scores(
    const AgentPair& pair, const SignalVec& signal,
    const std::vector<std::vector<double>>& objects) {
  std::vector<double> scores;
  for (const auto& obj : objects) {
    std::vector<double> input = obj;
    for (auto bit : signal.bits) input.push_back(double(bit));
    auto h = nn::relu(nn::dense_forward(pair.receiver.dense[0], input));
    h = nn::relu(nn::dense_forward(pair.receiver.dense[1], h));
    scores.push_back(nn::dense_forward(pair.receiver.dense[2], h)[0]);
  }
  return scores;
}

}  // namespace

TEST_CASE("emit_probs_T zero parameters and purity") {
  AgentPair pair = AgentPair::build(t_arch());
  auto ws = pair.make_workspace();
  std::vector<double> target(6, 0.0);
  target[0] = target[3] = 1.0;
  std::vector<double> probs(10), again(10);
  agents::emit_probs_T(pair, target.data(), ws, probs.data());
  for (double p : probs) CHECK(p == doctest::Approx(0.5));
  agents::emit_probs_T(pair, target.data(), ws, again.data());
  for (std::size_t j = 0; j < 10; ++j) CHECK(probs[j] == again[j]);
}

TEST_CASE("emit_probs_T matches reference forward pass") {
  Rng rng(21);
  AgentPair pair = AgentPair::build(t_arch());
  pair.load(agents::init_params(t_arch(), 0.5, rng));
  auto ws = pair.make_workspace();
  std::vector<double> target{0, 1, 0, 0, 0, 1};
  std::vector<double> probs(10);
  agents::emit_probs_T(pair, target.data(), ws, probs.data());
  const auto ref = ref_emit_T(pair, target);
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(std::abs(probs[j] - ref[j]) <= 1e-12);
    CHECK(probs[j] > 0.0);
    CHECK(probs[j] < 1.0);
  }
}

TEST_CASE("emit_probs_TC zero parameters and target-only context") {
  AgentPair pair = AgentPair::build(tc_arch());
  auto ws = pair.make_workspace();
  std::vector<double> target{1, 0, 0, 1, 0, 0};
  std::vector<const double*> ctx{target.data(), target.data(), target.data()};
  std::vector<double> probs(10);
  agents::emit_probs_TC(pair, target.data(), ctx, ws, probs.data());
  for (double p : probs) CHECK(p == doctest::Approx(0.5));

  // constant input sequence: output depends on the target alone
  Rng rng(31);
  pair.load(agents::init_params(tc_arch(), 0.3, rng));
  std::vector<double> a(10), b(10);
  agents::emit_probs_TC(pair, target.data(), ctx, ws, a.data());
  agents::emit_probs_TC(pair, target.data(), ctx, ws, b.data());
  for (std::size_t j = 0; j < 10; ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("emit_probs_TC presentation order sensitivity is measurable") {
  Rng rng(32);
  AgentPair pair = AgentPair::build(tc_arch());
  pair.load(agents::init_params(tc_arch(), 0.5, rng));
  auto ws = pair.make_workspace();
  std::vector<double> target{1, 0, 0, 1, 0, 0};
  std::vector<double> other1{0, 1, 0, 0, 1, 0};
  std::vector<double> other2{0, 0, 1, 0, 0, 1};
  std::vector<const double*> order_a{target.data(), other1.data(), other2.data()};
  std::vector<const double*> order_b{target.data(), other2.data(), other1.data()};
  std::vector<double> pa(10), pb(10);
  agents::emit_probs_TC(pair, target.data(), order_a, ws, pa.data());
  agents::emit_probs_TC(pair, target.data(), order_b, ws, pb.data());
  // Order MAY change the output; either way both are valid probabilities.
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(pa[j] > 0.0);
    CHECK(pa[j] < 1.0);
    CHECK(pb[j] > 0.0);
    CHECK(pb[j] < 1.0);
  }
}

TEST_CASE("sample_signal") {
  Rng rng(8);
  const auto zeros = agents::sample_signal(std::vector<double>(10, 0.0), rng);
  for (auto b : zeros.bits) CHECK(b == 0);
  const auto ones = agents::sample_signal(std::vector<double>(10, 1.0), rng);
  for (auto b : ones.bits) CHECK(b == 1);
  CHECK(ones.key() == 0x3ff);

  std::vector<std::size_t> counts(10, 0);
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto sig = agents::sample_signal(std::vector<double>(10, 0.5), rng);
    for (std::size_t j = 0; j < 10; ++j) counts[j] += sig.bits[j];
  }
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(std::abs(double(counts[j]) / draws - 0.5) < 0.02);
  }
}

TEST_CASE("receiver_choose uniform at zero parameters") {
  AgentPair pair = AgentPair::build(t_arch());
  auto ws = pair.make_workspace();
  Rng rng(12);
  std::vector<double> o1{1, 0, 0, 1, 0, 0}, o2{0, 1, 0, 0, 1, 0},
      o3{0, 0, 1, 0, 0, 1};
  std::vector<const double*> ctx{o1.data(), o2.data(), o3.data()};
  SignalVec sig{std::vector<std::uint8_t>(10, 1)};
  std::vector<std::size_t> counts(3, 0);
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[agents::receiver_choose(pair, sig, ctx, ws, rng)];
  }
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(double(counts[k]) / draws - 1.0 / 3.0) < 0.02);
  }
}

TEST_CASE("receiver_choose distribution matches softmax of reference scores") {
  Rng rng(13);
  AgentPair pair = AgentPair::build(t_arch());
  pair.load(agents::init_params(t_arch(), 0.5, rng));
  auto ws = pair.make_workspace();
  std::vector<std::vector<double>> objects{
      {1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 1}};
  std::vector<const double*> ctx;
  for (auto& o : objects) ctx.push_back(o.data());
  SignalVec sig{{1, 0, 1, 1, 0, 0, 0, 1, 0, 1}};

  const auto expect = nn::softmax(ref_receiver_scores(pair, sig, objects));
  std::vector<std::size_t> counts(3, 0);
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[agents::receiver_choose(pair, sig, ctx, ws, rng)];
  }
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(double(counts[k]) / draws - expect[k]) < 0.02);
  }
}

TEST_CASE("receiver scores are per-object, independent of companions") {
  Rng rng(14);
  AgentPair pair = AgentPair::build(t_arch());
  pair.load(agents::init_params(t_arch(), 0.5, rng));
  auto ws = pair.make_workspace();
  std::vector<double> o1{1, 0, 0, 1, 0, 0}, o2{0, 1, 0, 0, 1, 0};
  SignalVec sig{{0, 1, 0, 1, 0, 1, 0, 1, 0, 1}};
  const double alone = agents::receiver_score(pair, o1.data(), sig, ws);
  agents::receiver_score(pair, o2.data(), sig, ws);  // interleave another object
  const double again = agents::receiver_score(pair, o1.data(), sig, ws);
  CHECK(alone == again);
}
