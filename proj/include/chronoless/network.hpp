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

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chronoless/boundary.hpp"

namespace chronoless {

// Largest operator side the contraction engine will materialize.
inline constexpr std::size_t kMaxLiveDimension = std::size_t{1} << 12;

struct Port {
  std::string node;
  std::string system;

  friend auto operator<=>(const Port&, const Port&) = default;
};

// Id of a port inside whole-network layouts.
std::string port_id(const Port& p);

// Wire between two ports; S sits on `a`.
struct NetworkWire {
  Port a;
  Port b;
  WireState state;  // ends are port_id(a), port_id(b)
};

// Boundary operations joined by wires. Wires are kept in a canonical order
// so that everything derived from a network is independent of the order
// in which it was built.
class Network {
 public:
  void add_node(const std::string& id, BoundaryOperation op);
  void replace_node(const std::string& id, BoundaryOperation op);
  void add_wire(const Port& a, const Port& b, const ComplexMatrix& s);
  void add_wire(const Port& a, const Port& b);

  const std::map<std::string, BoundaryOperation>& nodes() const { return nodes_; }
  const BoundaryOperation& node(const std::string& id) const;
  bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
  const std::vector<NetworkWire>& wires() const { return wires_; }

  std::vector<Port> open_ports() const;
  bool closed() const { return open_ports().empty(); }

 private:
  std::map<std::string, BoundaryOperation> nodes_;
  std::vector<NetworkWire> wires_;
  std::set<Port> used_;
};

// Wire indices in elimination order plus the largest intermediate side.
struct ContractionPlan {
  std::vector<std::size_t> order;
  std::size_t max_dimension = 1;
};

ContractionPlan contraction_plan(const Network& net);
// Plan with the given nodes removed; their ports stay open.
ContractionPlan contraction_plan(const Network& net, const std::set<std::string>& removed);

struct EvaluateOptions {
  unsigned threads = 1;
};

OutcomeDistribution evaluate_network(const Network& net, const EvaluateOptions& opts = {});
OutcomeDistribution evaluate_network(const Network& net, const ContractionPlan& plan,
                                     const EvaluateOptions& opts = {});

std::vector<std::vector<std::string>> sample_outcomes(const Network& net, std::uint64_t seed,
                                                      std::size_t n);

// Sequential circuit as a network: node chain_node_id(k) is
// cp_to_boundary(op k, s_per_cut[k]); cut k is wired with s_per_cut[k].
Network network_from_chain(const Chain& chain, const std::vector<ComplexMatrix>& s_per_cut);
Network network_from_chain(const Chain& chain);

namespace detail {

// Runs `plan` with one operator per node in map order; a null entry marks a
// removed node whose ports stay open. Returns the operator on those ports.
LabeledOperator contract(const Network& net, const ContractionPlan& plan,
                         const std::vector<const ComplexMatrix*>& ops);

}  // namespace detail

}  // namespace chronoless
