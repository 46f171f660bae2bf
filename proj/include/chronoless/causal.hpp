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
#include <utility>
#include <vector>

#include "chronoless/process.hpp"

namespace chronoless {

struct CausalityReport {
  double max_deviation = 0;
  // Measurements whose pairing with the preparation is a null event.
  std::vector<std::size_t> skipped;
};

// Largest total-variation distance between the preparation marginals
// obtained with different measurements of the family.
CausalityReport check_causality_axiom(const SequentialOperation& prep,
                                      const std::vector<SequentialOperation>& meas_family);

struct SignalingReport {
  std::map<std::pair<std::string, std::string>, double> directions;
  // Family choices (one index per party) that form a null event.
  std::vector<std::vector<std::size_t>> incompatible;
  std::size_t evaluated = 0;

  double strength(const std::string& from, const std::string& to) const;
};

// families[k] lists the operations party k of w may choose from.
SignalingReport signaling_strength(const ProcessOperator& w,
                                   const std::vector<std::vector<BoundaryOperation>>& families);

// ½ρ^{A1}⊗Φ⁺^{B2C1}⊗I^{D2}/d + ½ρ^{C1}⊗Φ⁺^{D2A1}⊗I^{B2}/d over parties
// alice (A1, B2) and bob (C1, D2).
ProcessOperator alice_bob_example(const ComplexMatrix& rho, std::size_t d);

enum class Order { kAliceFirst, kBobFirst };

// Process operator of the fixed-order circuit: ρ into the first party, the
// channel from its output to the second party, unit effect afterwards.
ProcessOperator fixed_order_w(const SequentialOperation& channel, const ComplexMatrix& rho,
                              Order order);

// Boundary form of "measure the input in the computational basis, then
// release |k⟩", one operation per k, on ports (in, out).
std::vector<BoundaryOperation> measure_and_release_family(std::size_t d,
                                                          const std::string& in = "in",
                                                          const std::string& out = "out");

}  // namespace chronoless
