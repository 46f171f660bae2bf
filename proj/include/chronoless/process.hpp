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

#include <map>
#include <string>
#include <vector>

#include "chronoless/network.hpp"

namespace chronoless {

struct PartySlot {
  std::string node;
  IndexLayout ports;
};

// Unit-trace PSD operator over the ports of the listed parties, in order.
struct ProcessOperator {
  std::vector<PartySlot> parties;
  ComplexMatrix w;

  // Ids are port_id({party, system}).
  IndexLayout layout() const;
  bool is_valid(double tol = kPsdTolerance) const;
};

// Environment of the selected nodes contracted with M̄ (or the chosen
// outcome for nodes listed in `conditions`), normalized to unit trace.
ProcessOperator process_operator_for(const Network& net, const std::set<std::string>& selected,
                                     const std::map<std::string, std::string>& conditions = {});

// Tr_A[W(M ⊗ I)]/Tr[W(M ⊗ I)] for party A.
ProcessOperator condition_process(const ProcessOperator& w, const std::string& party,
                                  const ComplexMatrix& op);

// One operation per party, positional. Outcome tuples follow party order.
OutcomeDistribution probabilities_from_process(const ProcessOperator& w,
                                               const std::vector<BoundaryOperation>& ops);

struct PortRealization {
  ComplexMatrix s;
  // Teleported ports reach the copy of W through the post-selected node;
  // direct ports are wired straight to the preparation.
  bool teleported = true;
};

// Acyclic network with a preparation "realize.prep" of W, a post-selected
// node "realize.post" and identity placeholder nodes for the parties.
Network realize_via_postselection(const ProcessOperator& w,
                                  const std::vector<PortRealization>& ports);
Network realize_via_postselection(const ProcessOperator& w, const std::vector<ComplexMatrix>& s);

// R = D·(⊗S)Wᵀ(⊗S†)/Tr(…) on copies of the W ports (same ids as layout()).
BoundaryOperation ring_operation_from_w(const ProcessOperator& w,
                                        const std::vector<ComplexMatrix>& s);

// Parties' operations closed onto R through wires carrying S (S at R).
Network ring_network(const ProcessOperator& w, const std::vector<BoundaryOperation>& ops,
                     const std::vector<ComplexMatrix>& s);

}  // namespace chronoless
