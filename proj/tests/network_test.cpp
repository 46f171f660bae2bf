// Copyright 2026 The Chronoless Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "chronoless/network.hpp"
#include "support.hpp"

namespace chronoless {
namespace {

using testing::max_abs;
using testing::Rng;

const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
const ComplexMatrix one = ComplexMatrix::Identity(1, 1);

ComplexMatrix projector(int k) {
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(k, k) = 1;
  return p;
}

BoundaryOperation identity_channel(const std::string& in, const std::string& out) {
  return cp_to_boundary(SequentialOperation::channel({id2}, IndexLayout{{in, 2}}, IndexLayout{{out, 2}}), id2);
}

TEST(Network, RejectsBadNodesAndWires) {
  Network net;
  EXPECT_THROW(net.add_node("a:b", identity_channel("i", "o")), NetworkError);
  net.add_node("x", identity_channel("i", "o"));
  net.add_node("y", identity_channel("i", "o"));
  EXPECT_THROW(net.add_node("x", identity_channel("i", "o")), NetworkError);
  EXPECT_THROW(net.add_wire({"x", "nope"}, {"y", "i"}), Error);
  EXPECT_THROW(net.add_wire({"x", "o"}, {"x", "o"}), NetworkError);
  net.add_wire({"x", "o"}, {"y", "i"});
  EXPECT_THROW(net.add_wire({"x", "o"}, {"y", "o"}), NetworkError);
  EXPECT_EQ(net.open_ports().size(), 2u);
  EXPECT_FALSE(net.closed());
  EXPECT_THROW(evaluate_network(net), NetworkError);

  Network mismatch;
  mismatch.add_node("p", BoundaryOperation::single(IndexLayout{{"q", 3}}, ComplexMatrix::Identity(3, 3)));
  mismatch.add_node("m", BoundaryOperation::single(IndexLayout{{"q", 2}}, id2));
  EXPECT_THROW(mismatch.add_wire({"p", "q"}, {"m", "q"}), NetworkError);
}

TEST(Evaluate, ChainMatchesSequentialOracle) {
  Rng rng(1);
  for (int n = 0; n < 20; ++n) {
    const std::vector<std::size_t> dims{2, 3, 2};
    const Chain c = testing::random_chain(rng, dims, 3, n % 2 == 1);
    const auto net = network_from_chain(c, testing::cut_s(rng, dims, n % 3 == 0));
    EXPECT_LT(testing::max_difference(evaluate_network(net), circuit_probability_sequential(c)), 1e-9);
  }
}

TEST(Evaluate, IdentityLoopsHaveProbabilityOne) {
  Network self;
  self.add_node("c", identity_channel("in", "out"));
  self.add_wire({"c", "out"}, {"c", "in"});
  auto d = evaluate_network(self);
  EXPECT_NEAR(d.at({"0"}), 1.0, 1e-15);

  Network pair;
  pair.add_node("c1", identity_channel("x", "y"));
  pair.add_node("c2", identity_channel("y", "x"));
  pair.add_wire({"c1", "y"}, {"c2", "y"});
  pair.add_wire({"c2", "x"}, {"c1", "x"});
  d = evaluate_network(pair);
  EXPECT_EQ(d.parties, (std::vector<std::string>{"c1", "c2"}));
  EXPECT_NEAR(d.at({"0", "0"}), 1.0, 1e-15);
}

TEST(Evaluate, NullNetworkIsAnError) {
  Network net;
  net.add_node("p", cp_to_boundary(SequentialOperation::preparation({{"0", projector(0)}}), id2));
  net.add_node("m", cp_to_boundary(SequentialOperation::measurement({{"1", 2.0 * projector(1)}}), one));
  net.add_wire({"p", "out"}, {"m", "in"});
  EXPECT_THROW(evaluate_network(net), IncompatibleNetwork);
}

TEST(Evaluate, ThreadsGiveIdenticalResults) {
  Rng rng(2);
  const Chain c = testing::random_chain(rng, {2, 2, 2}, 3, true);
  const auto net = network_from_chain(c, testing::cut_s(rng, {2, 2, 2}, false));
  const auto serial = evaluate_network(net);
  const auto threaded = evaluate_network(net, EvaluateOptions{4});
  EXPECT_EQ(serial.entries, threaded.entries);
}

TEST(Evaluate, IndependentOfInsertionOrder) {
  Rng rng(3);
  const Chain c = testing::random_chain(rng, {2, 3}, 2, true);
  const auto s = testing::cut_s(rng, {2, 3}, false);
  const auto net = network_from_chain(c, s);
  Network rebuilt;
  std::vector<std::string> ids;
  for (const auto& [id, _] : net.nodes()) ids.push_back(id);
  std::reverse(ids.begin(), ids.end());
  for (const auto& id : ids) rebuilt.add_node(id, net.node(id));
  for (auto it = net.wires().rbegin(); it != net.wires().rend(); ++it)
    rebuilt.add_wire(it->b, it->a, it->state.s);
  // Swapping the ends moves S to the other side, so compare plans only.
  EXPECT_EQ(contraction_plan(rebuilt).order, contraction_plan(net).order);
}

TEST(Evaluate, ContractionOrderDoesNotMatter) {
  Rng rng(4);
  for (int n = 0; n < 10; ++n) {
    const std::vector<std::size_t> dims{2, 2, 3};
    const Chain c = testing::random_chain(rng, dims, 2, true);
    auto net = network_from_chain(c, testing::cut_s(rng, dims, false));
    const auto base = evaluate_network(net);
    ContractionPlan plan;
    plan.order.resize(net.wires().size());
    std::iota(plan.order.begin(), plan.order.end(), 0);
    for (int t = 0; t < 5; ++t) {
      std::shuffle(plan.order.begin(), plan.order.end(), rng);
      EXPECT_LT(testing::max_difference(evaluate_network(net, plan), base), 1e-10);
    }
  }
  ContractionPlan bad;
  Network one_wire;
  one_wire.add_node("c", identity_channel("in", "out"));
  one_wire.add_wire({"c", "out"}, {"c", "in"});
  bad.order = {0, 0};
  EXPECT_THROW(evaluate_network(one_wire, bad), NetworkError);
}

// Two nodes joined by two parallel wires, or by one wire over the grouped
// system.
TEST(Evaluate, GroupingWiresKeepsProbabilities) {
  Rng rng(5);
  for (int n = 0; n < 10; ++n) {
    std::vector<BoundaryOutcome> ao, bo;
    for (int i = 0; i < 2; ++i) ao.push_back({std::to_string(i), testing::random_psd(rng, 6)});
    for (int i = 0; i < 3; ++i) bo.push_back({std::to_string(i), testing::random_psd(rng, 6)});
    const auto a = BoundaryOperation(IndexLayout{{"x", 2}, {"y", 3}}, ao).normalized();
    const auto b = BoundaryOperation(IndexLayout{{"x", 2}, {"y", 3}}, bo).normalized();
    const ComplexMatrix s1 = testing::random_invertible(rng, 2), s2 = testing::random_invertible(rng, 3);

    Network split;
    split.add_node("a", a);
    split.add_node("b", b);
    split.add_wire({"a", "x"}, {"b", "x"}, s1);
    split.add_wire({"a", "y"}, {"b", "y"}, s2);

    Network grouped;
    const IndexLayout xy{{"xy", 6}};
    grouped.add_node("a", BoundaryOperation(xy, a.outcomes()));
    grouped.add_node("b", BoundaryOperation(xy, b.outcomes()));
    grouped.add_wire({"a", "xy"}, {"b", "xy"}, kron(s1, s2));

    EXPECT_LT(testing::max_difference(evaluate_network(split), evaluate_network(grouped)), 1e-10);
  }
}

TEST(Plan, ChainIsLeftToRight) {
  Rng rng(6);
  const Chain c = testing::random_chain(rng, {2, 2, 2}, 2, false);
  const auto net = network_from_chain(c);
  const auto plan = contraction_plan(net);
  EXPECT_EQ(plan.order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(net.wires()[0].a.node, "op00");
  EXPECT_EQ(net.wires()[2].b.node, "op03");
  EXPECT_EQ(plan.max_dimension, 4u);
}

TEST(Plan, RingStaysSmall) {
  // Six qubit channels in a loop: node side d², intermediates ≤ d²·d².
  Network ring;
  const int n = 6;
  for (int k = 0; k < n; ++k)
    ring.add_node("n" + std::to_string(k), identity_channel("in", "out"));
  for (int k = 0; k < n; ++k)
    ring.add_wire({"n" + std::to_string(k), "out"}, {"n" + std::to_string((k + 1) % n), "in"});
  const auto plan = contraction_plan(ring);
  EXPECT_LE(plan.max_dimension, 16u);
  EXPECT_NEAR(evaluate_network(ring).at({"0", "0", "0", "0", "0", "0"}), 1.0, 1e-12);
}

TEST(Plan, StarAbsorbsLeavesIntoTheCenter) {
  // Center with four qubit ports, one preparation per port.
  std::vector<System> ports;
  for (int k = 0; k < 4; ++k) ports.push_back({"p" + std::to_string(k), 2});
  Network star;
  star.add_node("center", BoundaryOperation::single(IndexLayout(ports), ComplexMatrix::Identity(16, 16)));
  for (int k = 0; k < 4; ++k) {
    const std::string leaf = "leaf" + std::to_string(k);
    star.add_node(leaf, cp_to_boundary(SequentialOperation::preparation({{"0", projector(k % 2)}}), id2));
    star.add_wire({leaf, "out"}, {"center", "p" + std::to_string(k)});
  }
  const auto plan = contraction_plan(star);
  EXPECT_EQ(plan.order, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(plan.max_dimension, 16u);
  EXPECT_NEAR(evaluate_network(star).total(), 1.0, 1e-12);
}

TEST(Plan, RefusesOversizedContractions) {
  // Two nodes sharing a single wire but carrying 13 open qubits between
  // them would need side 2^13 at some point; close those through a third
  // node so that nothing is open.
  std::vector<System> big;
  for (int k = 0; k < 13; ++k) big.push_back({"q" + std::to_string(k), 2});
  const IndexLayout l(big);
  const auto d = static_cast<Eigen::Index>(l.dim());
  Network net;
  net.add_node("a", BoundaryOperation::single(l, ComplexMatrix::Identity(d, d)));
  net.add_node("b", BoundaryOperation::single(l, ComplexMatrix::Identity(d, d)));
  for (int k = 0; k < 13; ++k) net.add_wire({"a", "q" + std::to_string(k)}, {"b", "q" + std::to_string(k)});
  EXPECT_GT(contraction_plan(net).max_dimension, kMaxLiveDimension);
  EXPECT_THROW(evaluate_network(net), NetworkError);
}

TEST(Sample, DeterministicAndReproducible) {
  Network born;
  born.add_node("p", cp_to_boundary(SequentialOperation::preparation({{"0", projector(0)}}), id2));
  born.add_node("m", cp_to_boundary(SequentialOperation::measurement({{"0", projector(0)}, {"1", projector(1)}}), one));
  born.add_wire({"p", "out"}, {"m", "in"});
  for (const auto& t : sample_outcomes(born, 1, 50)) EXPECT_EQ(t, (std::vector<std::string>{"0", "0"}));
  // Parties come in id order: m before p.

  Network fair;
  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  fair.add_node("p", cp_to_boundary(SequentialOperation::preparation({{"+", plus}}), id2));
  fair.add_node("m", cp_to_boundary(SequentialOperation::measurement({{"0", projector(0)}, {"1", projector(1)}}), one));
  fair.add_wire({"p", "out"}, {"m", "in"});
  const std::size_t n = 10000;
  const auto s = sample_outcomes(fair, 42, n);
  EXPECT_EQ(s, sample_outcomes(fair, 42, n));
  EXPECT_NE(s, sample_outcomes(fair, 43, n));
  const auto zeros = static_cast<double>(std::count(s.begin(), s.end(), std::vector<std::string>{"0", "+"}));
  const double sigma = std::sqrt(n * 0.25);
  EXPECT_LT(std::abs(zeros - n * 0.5), 3 * sigma);
}

}  // namespace
}  // namespace chronoless
