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

#include <string>
#include <utility>
#include <vector>

#include "chronoless/operations.hpp"

namespace chronoless {

// |Φ⟩⟨Φ| with |Φ⟩ = (S⁻¹† ⊗ I)|Φ⁺⟩ on (end_a, end_b). S acts on end_a and
// is rescaled so that Tr(S⁻¹†S⁻¹) = dim.
struct WireState {
  std::string end_a;
  std::string end_b;
  std::size_t dim = 1;
  ComplexMatrix s;
  ComplexMatrix state;

  IndexLayout layout() const { return IndexLayout{{end_a, dim}, {end_b, dim}}; }
  LabeledOperator labeled() const { return {layout(), state}; }
};

WireState make_wire(std::size_t d, const ComplexMatrix& s,
                    std::pair<std::string, std::string> ends);
WireState identity_wire(std::size_t d, std::pair<std::string, std::string> ends);

struct BoundaryOutcome {
  std::string label;
  ComplexMatrix op;
};

// Outcome-labelled PSD operators on the boundary systems of a region,
// normalized to Tr M̄ = product of dims. A null operation keeps its labels
// with zero operators.
class BoundaryOperation {
 public:
  BoundaryOperation() = default;
  BoundaryOperation(IndexLayout layout, std::vector<BoundaryOutcome> outcomes);

  static BoundaryOperation null(IndexLayout layout, const std::vector<std::string>& labels);
  static BoundaryOperation single(IndexLayout layout, ComplexMatrix op,
                                  std::string label = "0");

  const IndexLayout& layout() const { return layout_; }
  const std::vector<BoundaryOutcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::string& label(std::size_t i) const { return outcomes_[i].label; }
  const ComplexMatrix& op(std::size_t i) const { return outcomes_[i].op; }
  std::vector<std::string> labels() const;
  std::size_t index_of(const std::string& label) const;
  ComplexMatrix total() const;
  bool is_null() const { return null_; }

  // Rescaled so that Tr M̄ = product of dims.
  BoundaryOperation normalized() const;
  BoundaryOperation with_layout(IndexLayout layout) const;
  // Same operators, systems reordered so new system k is old order[k].
  BoundaryOperation permuted(std::span<const std::size_t> order) const;

 private:
  IndexLayout layout_;
  std::vector<BoundaryOutcome> outcomes_;
  bool null_ = false;
};

struct BoundaryReport {
  bool valid = true;
  double trace_residual = 0;
  std::vector<bool> outcome_positive;
  std::vector<std::string> problems;
};

BoundaryReport validate_boundary(const BoundaryOperation& b, double tol = kPsdTolerance);

// M_i = d_A d_B · S[M_i(Φ⁺)]ᵀS† / Tr{S[M̄(Φ⁺)]ᵀS†} on input ⊗ output; S
// acts on the output. Input and output ids must be distinct.
BoundaryOperation cp_to_boundary(const SequentialOperation& op, const ComplexMatrix& sB);

// Inverse of cp_to_boundary; `inputs` names the systems of b that form the
// input, the rest are the output.
SequentialOperation boundary_to_cp(const BoundaryOperation& b, const ComplexMatrix& sB,
                                   const std::vector<std::string>& inputs);

// Applies outcome i of b to a state on the remaining systems, sending the
// output through `wire`. The wire's end_a must be a system of b; the result
// lives on wire.end_b.
StatePair boundary_apply(const BoundaryOperation& b, std::size_t i, const StatePair& s,
                         const WireState& wire);

// Joins port_a of a with port_b of b through `wire` (end_a at a, end_b at
// b). Remaining systems keep their ids, a's first. Outcome labels join as
// "i|j". A vanishing normalization gives the null operation.
BoundaryOperation connect(const BoundaryOperation& a, const BoundaryOperation& b,
                          const std::string& port_a, const std::string& port_b,
                          const WireState& wire);

}  // namespace chronoless
