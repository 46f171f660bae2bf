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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronoless/causal.hpp"
#include "chronoless/symmetry.hpp"

namespace chronoless {

// Malformed input: bad JSON, missing fields, unknown ids, wrong shapes.
class DocumentError : public Error {
 public:
  using Error::Error;
};

enum class NodeKind { kSequential, kBoundary };

struct DocSystem {
  std::string id;
  std::size_t dim = 1;
  friend bool operator==(const DocSystem&, const DocSystem&) = default;
};

// Boundary outcomes carry one matrix, sequential outcomes their Kraus list.
struct DocOutcome {
  std::string label;
  std::vector<ComplexMatrix> matrices;
};

struct DocNode {
  std::string id;
  NodeKind kind = NodeKind::kBoundary;
  std::vector<std::string> ports;    // boundary
  std::vector<std::string> inputs;   // sequential
  std::vector<std::string> outputs;  // sequential
  std::vector<DocOutcome> outcomes;
};

struct DocWire {
  Port a;
  Port b;
  std::optional<ComplexMatrix> s;  // nullopt: identity
};

struct NetworkDocument {
  std::string version = "1";
  std::vector<DocSystem> systems;
  std::vector<DocNode> nodes;
  std::vector<DocWire> wires;
  std::vector<std::string> selections;

  std::size_t dim_of(const std::string& system) const;
  const DocNode& node(const std::string& id) const;
};

bool operator==(const DocOutcome& a, const DocOutcome& b);
bool operator==(const DocNode& a, const DocNode& b);
bool operator==(const DocWire& a, const DocWire& b);
bool operator==(const NetworkDocument& a, const NetworkDocument& b);

NetworkDocument parse_document(std::string_view text);
std::string serialize_document(const NetworkDocument& doc);

struct DocumentIssue {
  std::string where;
  std::string message;
};

// Module invariants of every node and wire; empty when the document is valid.
std::vector<DocumentIssue> check_document(const NetworkDocument& doc, double tol = kPsdTolerance);

// Sequential nodes are imported with cp_to_boundary, taking S from the wire
// on each output port (whichever end of the wire it is).
Network build_network(const NetworkDocument& doc);

// Sequential chain encoded by the document: S per cut and node ids in order.
struct DocumentChain {
  Chain chain;
  std::vector<ComplexMatrix> s_per_cut;
  std::vector<std::string> node_ids;
};

DocumentChain chain_from_document(const NetworkDocument& doc);
NetworkDocument reverse_document(const NetworkDocument& doc);

std::string serialize_process(const ProcessOperator& w);
ProcessOperator parse_process(std::string_view text);

// Families keyed by party name, returned in the party order of w.
std::vector<std::vector<BoundaryOperation>> parse_families(std::string_view text,
                                                           const ProcessOperator& w);
std::string serialize_families(const ProcessOperator& w,
                               const std::vector<std::vector<BoundaryOperation>>& families);

std::string read_file(const std::string& path);

}  // namespace chronoless
