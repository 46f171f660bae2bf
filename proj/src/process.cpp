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

#include "chronoless/process.hpp"

#include <stdexcept>

namespace chronoless {

namespace {

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& ms) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& m : ms) out = kron(out, m);
  return out;
}

// D·(⊗S) Wᵀ (⊗S†)/Tr(…).
ComplexMatrix reversed_copy(const ProcessOperator& w, const std::vector<ComplexMatrix>& s) {
  const IndexLayout layout = w.layout();
  if (s.size() != layout.size()) throw std::invalid_argument("need one S per port");
  for (std::size_t k = 0; k < s.size(); ++k) require_square(s[k], layout[k].dim, "port S");
  const ComplexMatrix big = kron_all(s);
  const ComplexMatrix r = big * w.w.transpose() * big.adjoint();
  return r * (static_cast<double>(layout.dim()) / r.trace().real());
}

}  // namespace

IndexLayout ProcessOperator::layout() const {
  IndexLayout out;
  for (const auto& p : parties) out = out.concat(p.ports.renamed(p.node + ":"));
  return out;
}

bool ProcessOperator::is_valid(double tol) const {
  if (static_cast<std::size_t>(w.rows()) != layout().dim()) return false;
  return is_psd(w, tol) && std::abs(w.trace().real() - 1.0) <= 1e-9;
}

ProcessOperator process_operator_for(const Network& net, const std::set<std::string>& selected,
                                     const std::map<std::string, std::string>& conditions) {
  if (selected.empty()) throw std::invalid_argument("process_operator_for: empty selection");
  for (const auto& id : selected) net.node(id);
  const auto open = net.open_ports();
  if (!open.empty()) throw NetworkError("network has open port " + port_id(open.front()));

  std::vector<ComplexMatrix> held;
  held.reserve(net.nodes().size());
  std::vector<const ComplexMatrix*> ops;
  ProcessOperator out;
  for (const auto& [id, op] : net.nodes()) {
    if (selected.count(id)) {
      if (conditions.count(id)) throw std::invalid_argument("cannot condition on a selected node");
      out.parties.push_back({id, op.layout()});
      ops.push_back(nullptr);
      continue;
    }
    auto c = conditions.find(id);
    held.push_back(c == conditions.end() ? op.total() : op.op(op.index_of(c->second)));
    ops.push_back(&held.back());
  }
  for (const auto& [id, _] : conditions) net.node(id);

  const LabeledOperator raw = detail::contract(net, contraction_plan(net, selected), ops);
  const IndexLayout target = out.layout();
  std::vector<std::size_t> order;
  for (const auto& s : target) order.push_back(raw.layout.index_of(s.id));
  ComplexMatrix w = permute_systems(raw.matrix, raw.layout, order);
  const double tr = w.trace().real();
  if (!(std::abs(tr) >= 1e-12)) throw IncompatibleNetwork();
  w /= tr;
  out.w = (w + w.adjoint()) / 2.0;
  return out;
}

ProcessOperator condition_process(const ProcessOperator& w, const std::string& party,
                                  const ComplexMatrix& op) {
  ProcessOperator out;
  IndexLayout party_layout;
  for (const auto& p : w.parties) {
    if (p.node == party)
      party_layout = p.ports.renamed(p.node + ":");
    else
      out.parties.push_back(p);
  }
  if (out.parties.size() == w.parties.size())
    throw std::invalid_argument("unknown party '" + party + "'");
  const LabeledOperator r = link({party_layout, op}, {w.layout(), w.w});
  const double tr = r.matrix.trace().real();
  if (!(std::abs(tr) >= 1e-12)) throw IncompatibleNetwork();
  out.w = r.matrix / tr;
  return out;
}

OutcomeDistribution probabilities_from_process(const ProcessOperator& w,
                                               const std::vector<BoundaryOperation>& ops) {
  if (ops.size() != w.parties.size())
    throw std::invalid_argument("need one operation per party");
  std::vector<IndexLayout> layouts;
  OutcomeDistribution dist;
  std::size_t count = 1;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& party = w.parties[k];
    if (ops[k].layout().dims() != party.ports.dims())
      throw LayoutError("operation for party '" + party.node + "' does not match its ports");
    layouts.push_back(party.ports.renamed(party.node + ":"));
    dist.parties.push_back(party.node);
    count *= ops[k].size();
  }
  const IndexLayout wl = w.layout();
  auto value = [&](const std::vector<const ComplexMatrix*>& m) {
    LabeledOperator t{wl, w.w};
    for (std::size_t k = 0; k < m.size(); ++k) t = link({layouts[k], *m[k]}, t);
    return t.matrix(0, 0).real();
  };

  std::vector<ComplexMatrix> totals;
  for (const auto& op : ops) totals.push_back(op.total());
  std::vector<const ComplexMatrix*> bar;
  for (const auto& t : totals) bar.push_back(&t);
  const double den = value(bar);
  if (!(std::abs(den) >= 1e-12)) throw IncompatibleNetwork();

  for (std::size_t t = 0; t < count; ++t) {
    std::vector<std::size_t> d(ops.size());
    std::size_t rest = t;
    for (std::size_t k = ops.size(); k-- > 0;) {
      d[k] = rest % ops[k].size();
      rest /= ops[k].size();
    }
    std::vector<const ComplexMatrix*> m;
    std::vector<std::string> tuple;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      m.push_back(&ops[k].op(d[k]));
      tuple.push_back(ops[k].label(d[k]));
    }
    dist.entries[std::move(tuple)] = value(m) / den;
  }
  return dist;
}

Network realize_via_postselection(const ProcessOperator& w,
                                  const std::vector<PortRealization>& ports) {
  const IndexLayout layout = w.layout();
  if (ports.size() != layout.size()) throw std::invalid_argument("need one entry per port");
  const std::string prep_id = "realize.prep", post_id = "realize.post";
  for (const auto& p : w.parties)
    if (p.node == prep_id || p.node == post_id)
      throw NetworkError("party name '" + p.node + "' is reserved");

  std::vector<ComplexMatrix> s;
  std::vector<System> q_sys, post_sys;
  std::vector<ComplexMatrix> post_factors;
  for (std::size_t k = 0; k < ports.size(); ++k) {
    s.push_back(ports[k].s);
    const auto d = layout[k].dim;
    q_sys.push_back({"q" + std::to_string(k), d});
    if (ports[k].teleported) {
      post_sys.push_back({"x" + std::to_string(k), d});
      post_sys.push_back({"y" + std::to_string(k), d});
      const auto n = static_cast<Eigen::Index>(d);
      const ComplexMatrix dress = kron(ComplexMatrix(ports[k].s.transpose()), ComplexMatrix::Identity(n, n));
      post_factors.push_back(dress * max_entangled(d) * dress.adjoint());
    }
  }

  Network net;
  net.add_node(prep_id, BoundaryOperation::single(IndexLayout(q_sys), reversed_copy(w, s), "prep"));
  if (!post_sys.empty())
    net.add_node(post_id,
                 BoundaryOperation::single(IndexLayout(post_sys), kron_all(post_factors), "ok").normalized());
  for (const auto& p : w.parties) {
    const auto n = static_cast<Eigen::Index>(p.ports.dim());
    net.add_node(p.node, BoundaryOperation::single(p.ports, ComplexMatrix::Identity(n, n), "slot"));
  }

  std::size_t k = 0;
  for (const auto& p : w.parties)
    for (const auto& sys : p.ports) {
      const Port slot{p.node, sys.id};
      const Port q{prep_id, "q" + std::to_string(k)};
      if (ports[k].teleported) {
        net.add_wire(q, {post_id, "y" + std::to_string(k)}, ports[k].s);
        net.add_wire(slot, {post_id, "x" + std::to_string(k)}, ports[k].s);
      } else {
        net.add_wire(q, slot, ports[k].s);
      }
      ++k;
    }
  return net;
}

Network realize_via_postselection(const ProcessOperator& w, const std::vector<ComplexMatrix>& s) {
  std::vector<PortRealization> ports;
  for (const auto& m : s) ports.push_back({m, true});
  return realize_via_postselection(w, ports);
}

BoundaryOperation ring_operation_from_w(const ProcessOperator& w,
                                        const std::vector<ComplexMatrix>& s) {
  return BoundaryOperation::single(w.layout(), reversed_copy(w, s), "ring");
}

Network ring_network(const ProcessOperator& w, const std::vector<BoundaryOperation>& ops,
                     const std::vector<ComplexMatrix>& s) {
  if (ops.size() != w.parties.size()) throw std::invalid_argument("need one operation per party");
  const std::string ring_id = "realize.ring";
  Network net;
  net.add_node(ring_id, ring_operation_from_w(w, s));
  for (std::size_t k = 0; k < ops.size(); ++k)
    net.add_node(w.parties[k].node, ops[k].with_layout(w.parties[k].ports));
  std::size_t k = 0;
  for (const auto& p : w.parties)
    for (const auto& sys : p.ports) {
      net.add_wire({ring_id, port_id({p.node, sys.id})}, {p.node, sys.id}, s[k]);
      ++k;
    }
  return net;
}

}  // namespace chronoless
