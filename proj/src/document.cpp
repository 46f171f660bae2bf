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

#include "chronoless/document.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chronoless {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DocumentError(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail(where, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                               const std::string& where) {
  if (!j.is_array() || j.size() != rows)
    fail(where, "expected " + std::to_string(rows) + " rows");
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      fail(where, "row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail(where, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") must be a [re, im] pair of numbers");
      const Complex z(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(where, "non-finite entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = z;
    }
  }
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
}

bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

std::size_t dims_of(const NetworkDocument& doc, const std::vector<std::string>& ids) {
  std::size_t d = 1;
  for (const auto& id : ids) d *= doc.dim_of(id);
  return d;
}

IndexLayout layout_of(const NetworkDocument& doc, const std::vector<std::string>& ids) {
  std::vector<System> s;
  for (const auto& id : ids) s.push_back({id, doc.dim_of(id)});
  return IndexLayout(std::move(s));
}

json outcomes_to_json(const std::vector<BoundaryOutcome>& outcomes) {
  json out = json::array();
  for (const auto& o : outcomes) out.push_back({{"label", o.label}, {"matrix", matrix_to_json(o.op)}});
  return out;
}

std::vector<BoundaryOutcome> boundary_outcomes_from_json(const json& j, std::size_t d,
                                                         const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "'outcomes' must be a non-empty array");
  std::vector<BoundaryOutcome> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + ".outcomes[" + std::to_string(k) + "]";
    out.push_back({string_field(j[k], "label", w), matrix_from_json(field(j[k], "matrix", w), d, d, w)});
  }
  return out;
}

}  // namespace

std::size_t NetworkDocument::dim_of(const std::string& system) const {
  for (const auto& s : systems)
    if (s.id == system) return s.dim;
  throw DocumentError("unknown system '" + system + "'");
}

const DocNode& NetworkDocument::node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return n;
  throw DocumentError("unknown node '" + id + "'");
}

bool operator==(const DocOutcome& a, const DocOutcome& b) {
  if (a.label != b.label || a.matrices.size() != b.matrices.size()) return false;
  for (std::size_t k = 0; k < a.matrices.size(); ++k)
    if (!same_matrix(a.matrices[k], b.matrices[k])) return false;
  return true;
}

bool operator==(const DocNode& a, const DocNode& b) {
  return a.id == b.id && a.kind == b.kind && a.ports == b.ports && a.inputs == b.inputs &&
         a.outputs == b.outputs && a.outcomes == b.outcomes;
}

bool operator==(const DocWire& a, const DocWire& b) {
  if (a.a != b.a || a.b != b.b || a.s.has_value() != b.s.has_value()) return false;
  return !a.s || same_matrix(*a.s, *b.s);
}

bool operator==(const NetworkDocument& a, const NetworkDocument& b) {
  return a.version == b.version && a.systems == b.systems && a.nodes == b.nodes &&
         a.wires == b.wires && a.selections == b.selections;
}

NetworkDocument parse_document(std::string_view text) {
  const json j = parse_json(text);
  NetworkDocument doc;
  doc.version = string_field(j, "version", "document");

  const json& systems = field(j, "systems", "document");
  if (!systems.is_array()) fail("systems", "expected an array");
  std::set<std::string> system_ids;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    const std::string where = "systems[" + std::to_string(k) + "]";
    DocSystem s{string_field(systems[k], "id", where), 0};
    const json& dim = field(systems[k], "dim", where);
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
      fail(where, "'dim' must be a positive integer");
    s.dim = dim.get<std::size_t>();
    if (!system_ids.insert(s.id).second) fail(where, "duplicate system id '" + s.id + "'");
    doc.systems.push_back(std::move(s));
  }

  const json& nodes = field(j, "nodes", "document");
  if (!nodes.is_array()) fail("nodes", "expected an array");
  std::set<std::string> node_ids;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const json& jn = nodes[k];
    DocNode n;
    n.id = string_field(jn, "id", "nodes[" + std::to_string(k) + "]");
    const std::string where = "node '" + n.id + "'";
    if (!node_ids.insert(n.id).second) fail(where, "duplicate node id");
    const std::string kind = string_field(jn, "kind", where);
    auto check_ports = [&](const std::vector<std::string>& ids) {
      for (const auto& id : ids)
        if (!system_ids.count(id)) fail(where, "unknown system '" + id + "'");
    };
    if (kind == "boundary") {
      n.kind = NodeKind::kBoundary;
      n.ports = string_list(field(jn, "ports", where), where);
      check_ports(n.ports);
      const std::size_t d = dims_of(doc, n.ports);
      for (auto& o : boundary_outcomes_from_json(field(jn, "outcomes", where), d, where))
        n.outcomes.push_back({std::move(o.label), {std::move(o.op)}});
    } else if (kind == "sequential") {
      n.kind = NodeKind::kSequential;
      n.inputs = jn.contains("inputs") ? string_list(jn["inputs"], where) : std::vector<std::string>{};
      n.outputs = jn.contains("outputs") ? string_list(jn["outputs"], where) : std::vector<std::string>{};
      check_ports(n.inputs);
      check_ports(n.outputs);
      const std::size_t din = dims_of(doc, n.inputs), dout = dims_of(doc, n.outputs);
      const json& outcomes = field(jn, "outcomes", where);
      if (!outcomes.is_array() || outcomes.empty()) fail(where, "'outcomes' must be a non-empty array");
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string w = where + ".outcomes[" + std::to_string(i) + "]";
        DocOutcome o{string_field(outcomes[i], "label", w), {}};
        const json& kraus = field(outcomes[i], "kraus", w);
        if (!kraus.is_array() || kraus.empty()) fail(w, "'kraus' must be a non-empty array");
        for (const auto& m : kraus) o.matrices.push_back(matrix_from_json(m, dout, din, w));
        n.outcomes.push_back(std::move(o));
      }
    } else {
      fail(where, "unknown kind '" + kind + "'");
    }
    doc.nodes.push_back(std::move(n));
  }

  auto port_from = [&](const json& jp, const std::string& where) {
    Port p{string_field(jp, "node", where), string_field(jp, "port", where)};
    const DocNode& n = doc.node(p.node);
    const auto has = [&](const std::vector<std::string>& v) {
      return std::find(v.begin(), v.end(), p.system) != v.end();
    };
    if (!has(n.ports) && !has(n.inputs) && !has(n.outputs))
      fail(where, "node '" + p.node + "' has no port '" + p.system + "'");
    return p;
  };
  if (j.contains("wires")) {
    const json& wires = j["wires"];
    if (!wires.is_array()) fail("wires", "expected an array");
    for (std::size_t k = 0; k < wires.size(); ++k) {
      const std::string where = "wires[" + std::to_string(k) + "]";
      DocWire w{port_from(field(wires[k], "a", where), where + ".a"),
                port_from(field(wires[k], "b", where), where + ".b"), std::nullopt};
      if (wires[k].contains("s")) {
        const json& s = wires[k]["s"];
        if (s.is_string()) {
          if (s.get<std::string>() != "identity") fail(where, "'s' must be \"identity\" or a matrix");
        } else {
          const std::size_t d = doc.dim_of(w.a.system);
          w.s = matrix_from_json(s, d, d, where + ".s");
        }
      }
      doc.wires.push_back(std::move(w));
    }
  }
  if (j.contains("selections")) {
    doc.selections = string_list(j["selections"], "selections");
    for (const auto& id : doc.selections) doc.node(id);
  }
  return doc;
}

std::string serialize_document(const NetworkDocument& doc) {
  json j;
  j["version"] = doc.version;
  j["systems"] = json::array();
  for (const auto& s : doc.systems) j["systems"].push_back({{"id", s.id}, {"dim", s.dim}});
  j["nodes"] = json::array();
  for (const auto& n : doc.nodes) {
    json jn;
    jn["id"] = n.id;
    json outcomes = json::array();
    if (n.kind == NodeKind::kBoundary) {
      jn["kind"] = "boundary";
      jn["ports"] = n.ports;
      for (const auto& o : n.outcomes)
        outcomes.push_back({{"label", o.label}, {"matrix", matrix_to_json(o.matrices.at(0))}});
    } else {
      jn["kind"] = "sequential";
      jn["inputs"] = n.inputs;
      jn["outputs"] = n.outputs;
      for (const auto& o : n.outcomes) {
        json kraus = json::array();
        for (const auto& m : o.matrices) kraus.push_back(matrix_to_json(m));
        outcomes.push_back({{"label", o.label}, {"kraus", kraus}});
      }
    }
    jn["outcomes"] = outcomes;
    j["nodes"].push_back(std::move(jn));
  }
  j["wires"] = json::array();
  for (const auto& w : doc.wires) {
    json jw{{"a", {{"node", w.a.node}, {"port", w.a.system}}},
            {"b", {{"node", w.b.node}, {"port", w.b.system}}}};
    jw["s"] = w.s ? matrix_to_json(*w.s) : json("identity");
    j["wires"].push_back(std::move(jw));
  }
  if (!doc.selections.empty()) j["selections"] = doc.selections;
  return j.dump(2) + "\n";
}

namespace {

SequentialOperation sequential_of(const NetworkDocument& doc, const DocNode& n) {
  std::vector<Outcome> outcomes;
  const IndexLayout in = layout_of(doc, n.inputs), out = layout_of(doc, n.outputs);
  for (const auto& o : n.outcomes) outcomes.push_back({o.label, KrausSet(in.dim(), out.dim(), o.matrices)});
  return SequentialOperation(in, out, std::move(outcomes));
}

BoundaryOperation boundary_of(const NetworkDocument& doc, const DocNode& n) {
  std::vector<BoundaryOutcome> outcomes;
  for (const auto& o : n.outcomes) outcomes.push_back({o.label, o.matrices.at(0)});
  return BoundaryOperation(layout_of(doc, n.ports), std::move(outcomes));
}

bool is_output_port(const NetworkDocument& doc, const Port& p) {
  const DocNode& n = doc.node(p.node);
  return n.kind == NodeKind::kSequential &&
         std::find(n.outputs.begin(), n.outputs.end(), p.system) != n.outputs.end();
}

ComplexMatrix wire_s(const NetworkDocument& doc, const DocWire& w) {
  if (w.s) return *w.s;
  const auto d = static_cast<Eigen::Index>(doc.dim_of(w.a.system));
  return ComplexMatrix::Identity(d, d);
}

}  // namespace

std::vector<DocumentIssue> check_document(const NetworkDocument& doc, double tol) {
  std::vector<DocumentIssue> issues;
  for (const auto& n : doc.nodes) {
    const std::string where = "node '" + n.id + "'";
    try {
      if (n.kind == NodeKind::kBoundary) {
        const auto rep = validate_boundary(boundary_of(doc, n), tol);
        for (const auto& p : rep.problems) issues.push_back({where, p});
      } else {
        const auto rep = validate_operation(sequential_of(doc, n), tol);
        for (const auto& p : rep.problems) issues.push_back({where, p});
      }
    } catch (const std::exception& e) {
      issues.push_back({where, e.what()});
    }
  }
  std::map<Port, std::size_t> use;
  for (std::size_t k = 0; k < doc.wires.size(); ++k) {
    const auto& w = doc.wires[k];
    const std::string where = "wire " + port_id(w.a) + " -- " + port_id(w.b);
    if (doc.dim_of(w.a.system) != doc.dim_of(w.b.system))
      issues.push_back({where, "ends have different dimensions"});
    if (w.s && !is_invertible(*w.s)) issues.push_back({where, "S is singular"});
    if (w.a == w.b) issues.push_back({where, "connects a port to itself"});
    for (const auto& p : {w.a, w.b})
      if (++use[p] == 2) issues.push_back({where, "port " + port_id(p) + " is wired more than once"});
    if (is_output_port(doc, w.a) && is_output_port(doc, w.b))
      issues.push_back({where, "joins two sequential outputs"});
  }
  return issues;
}

Network build_network(const NetworkDocument& doc) {
  // S of the wire attached to each port.
  std::map<Port, ComplexMatrix> s_at;
  for (const auto& w : doc.wires) {
    s_at[w.a] = wire_s(doc, w);
    s_at[w.b] = wire_s(doc, w);
  }
  Network net;
  for (const auto& n : doc.nodes) {
    if (n.kind == NodeKind::kBoundary) {
      net.add_node(n.id, boundary_of(doc, n));
      continue;
    }
    std::vector<ComplexMatrix> factors;
    for (const auto& o : n.outputs) {
      auto it = s_at.find({n.id, o});
      const auto d = static_cast<Eigen::Index>(doc.dim_of(o));
      factors.push_back(it == s_at.end() ? ComplexMatrix(ComplexMatrix::Identity(d, d)) : it->second);
    }
    ComplexMatrix s = ComplexMatrix::Identity(1, 1);
    for (const auto& f : factors) s = kron(s, f);
    net.add_node(n.id, cp_to_boundary(sequential_of(doc, n), s));
  }
  for (const auto& w : doc.wires) {
    if (is_output_port(doc, w.b) && !is_output_port(doc, w.a))
      net.add_wire(w.b, w.a, wire_s(doc, w));
    else
      net.add_wire(w.a, w.b, wire_s(doc, w));
  }
  return net;
}

DocumentChain chain_from_document(const NetworkDocument& doc) {
  if (doc.nodes.size() < 2) throw DocumentError("a chain needs at least two nodes");
  for (const auto& n : doc.nodes) {
    if (n.kind != NodeKind::kSequential)
      throw DocumentError("node '" + n.id + "' is not sequential; not a chain");
    if (n.inputs.size() > 1 || n.outputs.size() > 1)
      throw DocumentError("node '" + n.id + "' has several inputs or outputs; not a chain");
  }
  if (doc.wires.size() + 1 != doc.nodes.size()) throw DocumentError("wire count does not form a chain");

  // Follow output -> input links from the unique preparation.
  std::map<Port, const DocWire*> from_output;
  for (const auto& w : doc.wires) {
    const bool a_out = is_output_port(doc, w.a), b_out = is_output_port(doc, w.b);
    if (a_out == b_out) throw DocumentError("wire " + port_id(w.a) + " -- " + port_id(w.b) +
                                            " does not join an output to an input");
    from_output[a_out ? w.a : w.b] = &w;
  }
  const DocNode* start = nullptr;
  for (const auto& n : doc.nodes)
    if (n.inputs.empty()) {
      if (start) throw DocumentError("several preparations; not a chain");
      start = &n;
    }
  if (!start) throw DocumentError("no preparation; the document is cyclic or not a chain");

  DocumentChain out;
  std::vector<SequentialOperation> ops;
  std::set<std::string> seen;
  const DocNode* cur = start;
  while (true) {
    if (!seen.insert(cur->id).second) throw DocumentError("cycle detected; not a chain");
    out.node_ids.push_back(cur->id);
    ops.push_back(sequential_of(doc, *cur));
    if (cur->outputs.empty()) break;
    auto it = from_output.find({cur->id, cur->outputs[0]});
    if (it == from_output.end()) throw DocumentError("output of '" + cur->id + "' is not wired");
    const DocWire& w = *it->second;
    out.s_per_cut.push_back(wire_s(doc, w));
    const Port next = w.a == Port{cur->id, cur->outputs[0]} ? w.b : w.a;
    cur = &doc.node(next.node);
    if (cur->inputs.empty() || cur->inputs[0] != next.system)
      throw DocumentError("wire into '" + cur->id + "' does not reach its input");
  }
  if (ops.size() != doc.nodes.size()) throw DocumentError("document is not a single chain");
  out.chain.prep = ops.front();
  out.chain.meas = ops.back();
  out.chain.middles.assign(ops.begin() + 1, ops.end() - 1);
  return out;
}

NetworkDocument reverse_document(const NetworkDocument& doc) {
  const DocumentChain dc = chain_from_document(doc);
  std::vector<SymmetryTransform> t;
  for (const auto& s : dc.s_per_cut) t.push_back(SymmetryTransform::time_reversal(s));
  const Chain rev = reverse_chain(dc.chain, t);

  std::vector<const SequentialOperation*> reversed{&rev.prep};
  for (const auto& m : rev.middles) reversed.push_back(&m);
  reversed.push_back(&rev.meas);

  NetworkDocument out;
  out.version = doc.version;
  out.systems = doc.systems;
  const std::size_t n = dc.node_ids.size();
  for (std::size_t k = 0; k < n; ++k) {
    const DocNode& orig = doc.node(dc.node_ids[n - 1 - k]);
    DocNode node;
    node.id = orig.id;
    node.kind = NodeKind::kSequential;
    node.inputs = orig.outputs;
    node.outputs = orig.inputs;
    for (const auto& o : reversed[k]->outcomes()) node.outcomes.push_back({o.label, o.map.operators()});
    out.nodes.push_back(std::move(node));
  }
  for (const auto& w : doc.wires) out.wires.push_back({w.b, w.a, w.s});
  out.selections = doc.selections;
  return out;
}

std::string serialize_process(const ProcessOperator& w) {
  json j;
  j["version"] = "1";
  j["kind"] = "process_operator";
  j["parties"] = json::array();
  for (const auto& p : w.parties) {
    json ports = json::array();
    for (const auto& s : p.ports) ports.push_back({{"id", s.id}, {"dim", s.dim}});
    j["parties"].push_back({{"node", p.node}, {"ports", ports}});
  }
  j["w"] = matrix_to_json(w.w);
  return j.dump(2) + "\n";
}

ProcessOperator parse_process(std::string_view text) {
  const json j = parse_json(text);
  if (string_field(j, "kind", "document") != "process_operator")
    fail("document", "not a process_operator document");
  ProcessOperator w;
  const json& parties = field(j, "parties", "document");
  if (!parties.is_array() || parties.empty()) fail("parties", "expected a non-empty array");
  for (std::size_t k = 0; k < parties.size(); ++k) {
    const std::string where = "parties[" + std::to_string(k) + "]";
    PartySlot slot{string_field(parties[k], "node", where), {}};
    const json& ports = field(parties[k], "ports", where);
    if (!ports.is_array()) fail(where, "'ports' must be an array");
    std::vector<System> sys;
    for (const auto& p : ports) {
      const json& dim = field(p, "dim", where);
      if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
        fail(where, "'dim' must be a positive integer");
      sys.push_back({string_field(p, "id", where), dim.get<std::size_t>()});
    }
    try {
      slot.ports = IndexLayout(std::move(sys));
    } catch (const LayoutError& e) {
      fail(where, e.what());
    }
    w.parties.push_back(std::move(slot));
  }
  const std::size_t d = w.layout().dim();
  w.w = matrix_from_json(field(j, "w", "document"), d, d, "w");
  return w;
}

std::vector<std::vector<BoundaryOperation>> parse_families(std::string_view text,
                                                           const ProcessOperator& w) {
  const json j = parse_json(text);
  const json& fams = field(j, "families", "document");
  if (!fams.is_object()) fail("families", "expected an object keyed by party");
  std::vector<std::vector<BoundaryOperation>> out;
  for (const auto& p : w.parties) {
    auto it = fams.find(p.node);
    if (it == fams.end()) fail("families", "no family for party '" + p.node + "'");
    if (!it->is_array() || it->empty()) fail("families", "family of '" + p.node + "' must be a non-empty array");
    std::vector<BoundaryOperation> family;
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string where = "families." + p.node + "[" + std::to_string(k) + "]";
      auto outcomes = boundary_outcomes_from_json(field((*it)[k], "outcomes", where), p.ports.dim(), where);
      try {
        family.emplace_back(p.ports, std::move(outcomes));
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    }
    out.push_back(std::move(family));
  }
  for (auto it = fams.begin(); it != fams.end(); ++it) {
    bool known = false;
    for (const auto& p : w.parties) known = known || p.node == it.key();
    if (!known) fail("families", "unknown party '" + it.key() + "'");
  }
  return out;
}

std::string serialize_families(const ProcessOperator& w,
                               const std::vector<std::vector<BoundaryOperation>>& families) {
  json j;
  j["version"] = "1";
  j["families"] = json::object();
  for (std::size_t k = 0; k < w.parties.size(); ++k) {
    json list = json::array();
    for (const auto& op : families.at(k)) list.push_back({{"outcomes", outcomes_to_json(op.outcomes())}});
    j["families"][w.parties[k].node] = list;
  }
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chronoless
