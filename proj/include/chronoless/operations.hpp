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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chronoless/linalg.hpp"

namespace chronoless {

// Joins labels of product outcomes; composite labels read "i|j".
inline constexpr char kOutcomeSeparator = '|';

// Σ_α K_α (·) K_α† from input-dim to output-dim. Holds at most
// input·output operators; longer lists are compressed through the Choi
// eigendecomposition on construction.
class KrausSet {
 public:
  KrausSet() = default;
  KrausSet(std::size_t input_dim, std::size_t output_dim,
           std::vector<ComplexMatrix> operators);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // Σ K†K.
  ComplexMatrix adjoint_sum() const;
  // Tr M(I/d_in).
  double normalization() const;
  // (I ⊗ M)(|Φ⁺⟩⟨Φ⁺|) on input ⊗ output, computational basis.
  ComplexMatrix choi() const;
  KrausSet scaled(double factor) const;

  // Inverse of choi(); eigenvalues below `cutoff` are dropped.
  static KrausSet from_choi(const ComplexMatrix& choi, std::size_t input_dim,
                            std::size_t output_dim, double cutoff = 1e-14);

 private:
  std::size_t input_dim_ = 1;
  std::size_t output_dim_ = 1;
  std::vector<ComplexMatrix> operators_;
};

struct Outcome {
  std::string label;
  KrausSet map;
};

// Outcome-indexed family of CP maps from `input` to `output`. Trivial
// inputs (preparations) and outputs (measurements) use the empty layout.
class SequentialOperation {
 public:
  SequentialOperation() = default;
  SequentialOperation(IndexLayout input, IndexLayout output,
                      std::vector<Outcome> outcomes);

  static SequentialOperation preparation(
      const std::vector<std::pair<std::string, ComplexMatrix>>& states,
      IndexLayout output = {});
  static SequentialOperation measurement(
      const std::vector<std::pair<std::string, ComplexMatrix>>& effects,
      IndexLayout input = {});
  static SequentialOperation channel(std::vector<ComplexMatrix> kraus,
                                     IndexLayout input = {}, IndexLayout output = {},
                                     std::string label = "0");
  static SequentialOperation instrument(
      std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> outcomes,
      IndexLayout input = {}, IndexLayout output = {});

  const IndexLayout& input() const { return input_; }
  const IndexLayout& output() const { return output_; }
  std::size_t input_dim() const { return input_.dim(); }
  std::size_t output_dim() const { return output_.dim(); }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::string& label(std::size_t i) const { return outcomes_[i].label; }
  const KrausSet& map(std::size_t i) const { return outcomes_[i].map; }
  std::vector<std::string> labels() const;
  std::size_t index_of(const std::string& label) const;

  // M̄ as one Kraus set.
  KrausSet total() const;
  ComplexMatrix apply(std::size_t i, const ComplexMatrix& rho) const;
  ComplexMatrix apply_total(const ComplexMatrix& rho) const;
  // ρ_i for preparations, E_j = Σ K†K for measurements.
  ComplexMatrix state(std::size_t i) const;
  ComplexMatrix effect(std::size_t j) const;

  // Σ_i Tr M_i(I/d_in).
  double normalization() const;
  SequentialOperation normalized() const;
  SequentialOperation with_layouts(IndexLayout input, IndexLayout output) const;

 private:
  IndexLayout input_;
  IndexLayout output_;
  std::vector<Outcome> outcomes_;
};

struct ValidationReport {
  bool valid = true;
  bool standard = false;
  double normalization_residual = 0;
  std::vector<bool> outcome_positive;
  std::vector<std::string> problems;
};

ValidationReport validate_operation(const SequentialOperation& op,
                                    double tol = kPsdTolerance);

// (ρ; ρ̄) with ρ ≤ ρ̄ and Tr ρ̄ = 1.
struct StatePair {
  ComplexMatrix rho;
  ComplexMatrix rho_bar;

  std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
  bool is_valid(double tol = kPsdTolerance) const;
};

// (E; Ē) with E ≤ Ē and Tr Ē = d.
struct EffectPair {
  ComplexMatrix e;
  ComplexMatrix e_bar;

  std::size_t dim() const { return static_cast<std::size_t>(e.rows()); }
  bool is_valid(double tol = kPsdTolerance) const;
};

// Stochastic-like matrix t(j, i) taking old outcome i to new outcome j.
struct UpdateKernel {
  std::vector<std::string> labels;
  Eigen::MatrixXd t;

  void validate(std::size_t old_outcomes) const;

  static UpdateKernel identity(const std::vector<std::string>& labels);
  static UpdateKernel coarse_grain(std::size_t old_outcomes,
                                   std::string label = "any");
  // Keeps outcomes listed in `subset` (indices into the old outcomes),
  // weighting each by p.
  static UpdateKernel restriction(const std::vector<std::string>& old_labels,
                                  const std::vector<std::size_t>& subset,
                                  double p = 1.0);
};

// Outcome tuples ordered lexicographically; `parties` names the tuple slots.
struct OutcomeDistribution {
  std::vector<std::string> parties;
  std::map<std::vector<std::string>, double> entries;
  bool null_event = false;

  double total() const;
  double at(const std::vector<std::string>& tuple) const;
  // Marginal on one tuple slot.
  std::map<std::string, double> marginal(std::size_t slot) const;
};

double total_variation(const std::map<std::string, double>& p,
                       const std::map<std::string, double>& q);

// Name used for the k-th operation of a chain, in tuples and networks.
std::string chain_node_id(std::size_t k);

OutcomeDistribution joint_probability(const SequentialOperation& prep,
                                      const SequentialOperation& meas);

double state_effect_probability(const StatePair& s, const EffectPair& e);

SequentialOperation compose_sequential(const SequentialOperation& m,
                                       const SequentialOperation& n);
SequentialOperation compose_parallel(const SequentialOperation& m,
                                     const SequentialOperation& n);

OutcomeDistribution deterministic_measure(const ComplexMatrix& rho_bar,
                                          const SequentialOperation& meas);

SequentialOperation update_operation(const SequentialOperation& op,
                                     const UpdateKernel& k);

// Preparation, middle operations, measurement.
struct Chain {
  SequentialOperation prep;
  std::vector<SequentialOperation> middles;
  SequentialOperation meas;
};

OutcomeDistribution circuit_probability_sequential(const Chain& chain);
OutcomeDistribution circuit_probability_sequential(
    const SequentialOperation& prep, const std::vector<SequentialOperation>& middles,
    const SequentialOperation& meas);

// Relative zero test for normalization denominators.
inline bool is_null_denominator(double value, double dim_product) {
  return std::abs(value) < 1e-12 * dim_product;
}

}  // namespace chronoless
