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

#include "chronoless/causal.hpp"

#include <stdexcept>

namespace chronoless {

CausalityReport check_causality_axiom(const SequentialOperation& prep,
                                      const std::vector<SequentialOperation>& meas_family) {
  CausalityReport rep;
  std::vector<std::map<std::string, double>> marginals;
  for (std::size_t k = 0; k < meas_family.size(); ++k) {
    try {
      marginals.push_back(joint_probability(prep, meas_family[k]).marginal(0));
    } catch (const NullComposition&) {
      rep.skipped.push_back(k);
    }
  }
  for (std::size_t a = 0; a < marginals.size(); ++a)
    for (std::size_t b = a + 1; b < marginals.size(); ++b)
      rep.max_deviation = std::max(rep.max_deviation, total_variation(marginals[a], marginals[b]));
  return rep;
}

double SignalingReport::strength(const std::string& from, const std::string& to) const {
  auto it = directions.find({from, to});
  if (it == directions.end()) throw std::invalid_argument("no such direction");
  return it->second;
}

SignalingReport signaling_strength(const ProcessOperator& w,
                                   const std::vector<std::vector<BoundaryOperation>>& families) {
  const std::size_t n = w.parties.size();
  if (families.size() != n) throw std::invalid_argument("need one family per party");
  for (const auto& f : families)
    if (f.empty()) throw std::invalid_argument("empty operation family");

  // Every assignment of family members, last party fastest.
  std::size_t count = 1;
  for (const auto& f : families) count *= f.size();
  std::vector<std::vector<std::size_t>> choice(count);
  std::vector<std::optional<OutcomeDistribution>> dist(count);
  SignalingReport rep;
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<std::size_t> c(n);
    std::size_t rest = t;
    for (std::size_t k = n; k-- > 0;) {
      c[k] = rest % families[k].size();
      rest /= families[k].size();
    }
    std::vector<BoundaryOperation> ops;
    for (std::size_t k = 0; k < n; ++k) ops.push_back(families[k][c[k]]);
    try {
      dist[t] = probabilities_from_process(w, ops);
      ++rep.evaluated;
    } catch (const IncompatibleNetwork&) {
      rep.incompatible.push_back(c);
    }
    choice[t] = std::move(c);
  }

  for (std::size_t from = 0; from < n; ++from)
    for (std::size_t to = 0; to < n; ++to) {
      if (from == to) continue;
      double best = 0;
      // Pairs of assignments differing only in the sender's choice.
      for (std::size_t s = 0; s < count; ++s)
        for (std::size_t t = s + 1; t < count; ++t) {
          if (!dist[s] || !dist[t]) continue;
          bool others_equal = true;
          for (std::size_t k = 0; k < n; ++k)
            if (k != from && choice[s][k] != choice[t][k]) others_equal = false;
          if (!others_equal) continue;
          best = std::max(best, total_variation(dist[s]->marginal(to), dist[t]->marginal(to)));
        }
      rep.directions[{w.parties[from].node, w.parties[to].node}] = best;
    }
  return rep;
}

ProcessOperator alice_bob_example(const ComplexMatrix& rho, std::size_t d) {
  require_square(rho, d, "alice_bob_example");
  if (!is_psd(rho) || std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("alice_bob_example: rho is not a density operator");
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix mixed = ComplexMatrix::Identity(n, n) / static_cast<double>(d);
  const ComplexMatrix phi = max_entangled(d);

  const IndexLayout ports{{"A1", d}, {"B2", d}, {"C1", d}, {"D2", d}};
  // ρ^{A1} ⊗ Φ⁺^{B2C1} ⊗ I^{D2}/d is already in port order.
  const ComplexMatrix first = kron(kron(rho, phi), mixed);
  // ρ^{C1} ⊗ Φ⁺^{D2A1} ⊗ I^{B2}/d, assembled in the order (C1, D2, A1, B2).
  const IndexLayout second_layout{{"C1", d}, {"D2", d}, {"A1", d}, {"B2", d}};
  const ComplexMatrix second_raw = kron(kron(rho, phi), mixed);
  const std::vector<std::size_t> to_ports{2, 3, 0, 1};
  const ComplexMatrix second = permute_systems(second_raw, second_layout, to_ports);

  ProcessOperator w;
  w.parties = {{"alice", IndexLayout{{"A1", d}, {"B2", d}}},
               {"bob", IndexLayout{{"C1", d}, {"D2", d}}}};
  w.w = (first + second) / 2.0;
  return w;
}

ProcessOperator fixed_order_w(const SequentialOperation& channel, const ComplexMatrix& rho,
                              Order order) {
  const std::size_t d = static_cast<std::size_t>(rho.rows());
  if (channel.input_dim() != d || channel.output_dim() != d)
    throw std::invalid_argument("fixed_order_w: channel must act on the state dimension");
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  const auto source = SequentialOperation::preparation({{"0", rho}}, IndexLayout{{"out", d}});
  const auto sink = SequentialOperation::measurement({{"0", id}}, IndexLayout{{"in", d}});
  const auto chan = channel.with_layouts(IndexLayout{{"in", d}}, IndexLayout{{"out", d}});

  Network net;
  net.add_node("source", cp_to_boundary(source, id));
  net.add_node("channel", cp_to_boundary(chan, id));
  net.add_node("sink", cp_to_boundary(sink, ComplexMatrix::Identity(1, 1)));
  net.add_node("alice", BoundaryOperation::single(IndexLayout{{"A1", d}, {"B2", d}},
                                                  ComplexMatrix::Identity(n * n, n * n)));
  net.add_node("bob", BoundaryOperation::single(IndexLayout{{"C1", d}, {"D2", d}},
                                                ComplexMatrix::Identity(n * n, n * n)));
  const Port a_in{"alice", "A1"}, a_out{"alice", "B2"}, b_in{"bob", "C1"}, b_out{"bob", "D2"};
  const bool alice_first = order == Order::kAliceFirst;
  net.add_wire({"source", "out"}, alice_first ? a_in : b_in);
  net.add_wire(alice_first ? a_out : b_out, {"channel", "in"});
  net.add_wire({"channel", "out"}, alice_first ? b_in : a_in);
  net.add_wire(alice_first ? b_out : a_out, {"sink", "in"});
  return process_operator_for(net, {"alice", "bob"});
}

std::vector<BoundaryOperation> measure_and_release_family(std::size_t d, const std::string& in,
                                                          const std::string& out) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<BoundaryOperation> family;
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> outcomes;
    for (Eigen::Index i = 0; i < n; ++i) {
      ComplexMatrix kraus = ComplexMatrix::Zero(n, n);
      kraus(k, i) = 1;
      outcomes.push_back({std::to_string(i), {kraus}});
    }
    const auto op = SequentialOperation::instrument(std::move(outcomes), IndexLayout{{in, d}},
                                                    IndexLayout{{out, d}});
    family.push_back(cp_to_boundary(op, ComplexMatrix::Identity(n, n)));
  }
  return family;
}

}  // namespace chronoless
