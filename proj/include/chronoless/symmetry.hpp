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

#include <cstddef>
#include <optional>
#include <vector>

#include "chronoless/operations.hpp"

namespace chronoless {

enum class SymmetryKind {
  kTypeI,   // states to states, effects to effects
  kTypeII,  // states to effects and back
};

// S together with the optional transposition and its basis. The default
// basis is the computational one.
struct SymmetryTransform {
  SymmetryKind kind = SymmetryKind::kTypeII;
  ComplexMatrix s;
  bool use_transpose = true;
  Basis basis = Basis::computational(1);

  SymmetryTransform() : s(ComplexMatrix::Identity(1, 1)) {}
  SymmetryTransform(SymmetryKind kind, ComplexMatrix s, bool use_transpose,
                    std::optional<Basis> basis = std::nullopt);

  // Type-II with transposition: the form time reversal takes.
  static SymmetryTransform time_reversal(ComplexMatrix s);
  static SymmetryTransform trivial() { return {}; }

  std::size_t dim() const { return static_cast<std::size_t>(s.rows()); }
  // max |S†S/c − I| with c chosen so the trace matches; 0 for unitary S
  // up to scale.
  double unitarity_defect() const;
  bool flagged_nonunitary() const { return unitarity_defect() > 1e-8; }
};

StatePair transform_state_typeI(const StatePair& s, const SymmetryTransform& t);
EffectPair transform_effect_typeI(const EffectPair& e, const SymmetryTransform& t);
EffectPair transform_state_to_effect(const StatePair& s, const SymmetryTransform& t);
StatePair transform_effect_to_state(const EffectPair& e, const SymmetryTransform& t);

// Kraus-level time reversal B→A of an operation A→B.
SequentialOperation time_reverse_operation(const SequentialOperation& op,
                                           const SymmetryTransform& sA,
                                           const SymmetryTransform& sB);

enum class Parity { kBosonic, kFermionic, kNeither };

struct InvolutionReport {
  bool involutive = false;
  Parity parity = Parity::kNeither;
  double max_deviation = 0;

  explicit operator bool() const { return involutive; }
};

InvolutionReport check_involution(const SymmetryTransform& t, std::size_t trials = 20,
                                  double tol = 1e-10);

// Reversed order, each operation time-reversed; transforms[k] acts on the
// k-th cut system (output of chain operation k).
Chain reverse_chain(const Chain& chain, const std::vector<SymmetryTransform>& transforms);

// max |p_forward − p_reversed| over outcome tuples.
double verify_circuit_invariance(const Chain& chain,
                                 const std::vector<SymmetryTransform>& transforms);

}  // namespace chronoless
