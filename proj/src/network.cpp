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

#include "chronoless/network.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace chronoless {

std::string port_id(const Port& p) { return p.node + ":" + p.system; }

void Network::add_node(const std::string& id, BoundaryOperation op) {
  if (id.empty() || id.find(':') != std::string::npos)
    throw NetworkError("node id '" + id + "' must be non-empty and free of ':'");
  if (nodes_.count(id)) throw NetworkError("duplicate node id '" + id + "'");
  nodes_.emplace(id, std::move(op));
}

void Network::replace_node(const std::string& id, BoundaryOperation op) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw NetworkError("unknown node '" + id + "'");
  if (op.layout().dims() != it->second.layout().dims())
    throw NetworkError("replacement for node '" + id + "' has a different layout");
  it->second = std::move(op).with_layout(it->second.layout());
}

const BoundaryOperation& Network::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw NetworkError("unknown node '" + id + "'");
  return it->second;
}

void Network::add_wire(const Port& a, const Port& b, const ComplexMatrix& s) {
  const auto& na = node(a.node);
  const auto& nb = node(b.node);
  if (!na.layout().contains(a.system))
    throw NetworkError("node '" + a.node + "' has no port '" + a.system + "'");
  if (!nb.layout().contains(b.system))
    throw NetworkError("node '" + b.node + "' has no port '" + b.system + "'");
  if (a == b) throw NetworkError("wire connects port " + port_id(a) + " to itself");
  const auto d = na.layout().dim_of(a.system);
  if (nb.layout().dim_of(b.system) != d)
    throw NetworkError("wire " + port_id(a) + " -- " + port_id(b) + " joins different dimensions");
  for (const auto& p : {a, b})
    if (used_.count(p)) throw NetworkError("port " + port_id(p) + " is already wired");
  NetworkWire w{a, b, make_wire(d, s, {port_id(a), port_id(b)})};
  used_.insert(a);
  used_.insert(b);
  auto key = [](const NetworkWire& x) { return std::minmax(x.a, x.b); };
  auto pos = std::lower_bound(wires_.begin(), wires_.end(), w,
                              [&](const NetworkWire& l, const NetworkWire& r) { return key(l) < key(r); });
  wires_.insert(pos, std::move(w));
}

void Network::add_wire(const Port& a, const Port& b) {
  const auto d = static_cast<Eigen::Index>(node(a.node).layout().dim_of(a.system));
  add_wire(a, b, ComplexMatrix::Identity(d, d));
}

std::vector<Port> Network::open_ports() const {
  std::vector<Port> out;
  for (const auto& [id, op] : nodes_)
    for (const auto& s : op.layout())
      if (!used_.count({id, s.id})) out.push_back({id, s.id});
  return out;
}

namespace {

// Mirrors the grouping done during contraction, with sizes only.
struct PlanState {
  std::vector<double> side;
  std::vector<std::string> key;
  std::map<std::string, std::size_t> group_of;
  std::vector<std::size_t> parent;

  std::size_t find(std::size_t g) {
    while (parent[g] != g) g = parent[g] = parent[parent[g]];
    return g;
  }
};

ContractionPlan greedy_plan(const Network& net, const std::set<std::string>& removed) {
  PlanState st;
  ContractionPlan plan;
  for (const auto& [id, op] : net.nodes()) {
    if (removed.count(id)) continue;
    st.group_of[id] = st.side.size();
    st.parent.push_back(st.side.size());
    st.side.push_back(static_cast<double>(op.layout().dim()));
    st.key.push_back(id);
    plan.max_dimension = std::max(plan.max_dimension, op.layout().dim());
  }
  const auto& wires = net.wires();
  std::vector<bool> done(wires.size(), false);
  for (std::size_t step = 0; step < wires.size(); ++step) {
    using Cost = std::tuple<double, std::string, std::string, std::size_t>;
    std::optional<Cost> best;
    for (std::size_t w = 0; w < wires.size(); ++w) {
      if (done[w]) continue;
      const double d = static_cast<double>(wires[w].state.dim);
      auto ga = st.group_of.count(wires[w].a.node) ? std::optional(st.find(st.group_of[wires[w].a.node]))
                                                   : std::nullopt;
      auto gb = st.group_of.count(wires[w].b.node) ? std::optional(st.find(st.group_of[wires[w].b.node]))
                                                   : std::nullopt;
      double side;
      std::string ka, kb;
      if (ga && gb && *ga != *gb) {
        side = st.side[*ga] * st.side[*gb] / (d * d);
        ka = std::min(st.key[*ga], st.key[*gb]);
        kb = std::max(st.key[*ga], st.key[*gb]);
      } else if (ga && gb) {
        side = st.side[*ga] / (d * d);
        ka = kb = st.key[*ga];
      } else if (ga || gb) {
        side = st.side[ga ? *ga : *gb];
        ka = kb = st.key[ga ? *ga : *gb];
      } else {
        side = d * d;
        ka = port_id(wires[w].a);
        kb = port_id(wires[w].b);
      }
      Cost c{side, ka, kb, w};
      if (!best || c < *best) best = c;
    }
    const std::size_t w = std::get<3>(*best);
    done[w] = true;
    plan.order.push_back(w);
    const double side = std::get<0>(*best);
    plan.max_dimension = std::max(
        plan.max_dimension,
        side > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)
            ? std::numeric_limits<std::size_t>::max() / 2
            : static_cast<std::size_t>(std::llround(side)));

    auto present = [&](const Port& p) { return st.group_of.count(p.node) > 0; };
    const bool pa = present(wires[w].a), pb = present(wires[w].b);
    if (pa && pb) {
      auto ga = st.find(st.group_of[wires[w].a.node]);
      auto gb = st.find(st.group_of[wires[w].b.node]);
      if (ga != gb) {
        st.parent[gb] = ga;
        st.key[ga] = std::min(st.key[ga], st.key[gb]);
      }
      st.side[ga] = side;
    } else if (pa || pb) {
      st.side[st.find(st.group_of[(pa ? wires[w].a : wires[w].b).node])] = side;
    }
  }
  return plan;
}

}  // namespace

ContractionPlan contraction_plan(const Network& net) { return greedy_plan(net, {}); }

ContractionPlan contraction_plan(const Network& net, const std::set<std::string>& removed) {
  return greedy_plan(net, removed);
}

namespace detail {

LabeledOperator contract(const Network& net, const ContractionPlan& plan,
                         const std::vector<const ComplexMatrix*>& ops) {
  if (plan.max_dimension > kMaxLiveDimension)
    throw NetworkError("contraction needs an operator of side " + std::to_string(plan.max_dimension) +
                       ", above the limit of " + std::to_string(kMaxLiveDimension));
  std::vector<LabeledOperator> group;
  std::vector<bool> alive;
  std::map<std::string, std::size_t> owner;
  std::size_t k = 0;
  for (const auto& [id, op] : net.nodes()) {
    if (ops[k]) {
      owner[id] = group.size();
      group.push_back({op.layout().renamed(id + ":"), *ops[k]});
      alive.push_back(true);
    }
    ++k;
  }
  for (auto w : plan.order) {
    const auto& wire = net.wires().at(w);
    const LabeledOperator ws = wire.state.labeled();
    auto ia = owner.find(wire.a.node), ib = owner.find(wire.b.node);
    if (ia != owner.end() && ib != owner.end()) {
      const auto ga = ia->second, gb = ib->second;
      if (ga != gb) {
        group[ga] = link(link(group[ga], ws), group[gb]);
        alive[gb] = false;
        for (auto& [_, g] : owner)
          if (g == gb) g = ga;
      } else {
        group[ga] = link(group[ga], ws);
      }
    } else if (ia != owner.end() || ib != owner.end()) {
      const auto g = (ia != owner.end() ? ia : ib)->second;
      group[g] = link(group[g], ws);
    } else {
      group.push_back(ws);
      alive.push_back(true);
    }
  }
  LabeledOperator out{{}, ComplexMatrix::Identity(1, 1)};
  for (std::size_t g = 0; g < group.size(); ++g)
    if (alive[g]) {
      if (group[g].layout.empty())
        out.matrix *= group[g].matrix(0, 0);
      else
        out = {out.layout.concat(group[g].layout), kron(out.matrix, group[g].matrix)};
    }
  return out;
}

}  // namespace detail

OutcomeDistribution evaluate_network(const Network& net, const EvaluateOptions& opts) {
  return evaluate_network(net, contraction_plan(net), opts);
}

OutcomeDistribution evaluate_network(const Network& net, const ContractionPlan& plan,
                                     const EvaluateOptions& opts) {
  const auto open = net.open_ports();
  if (!open.empty()) throw NetworkError("network has open port " + port_id(open.front()));
  {
    std::vector<std::size_t> sorted = plan.order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> all(net.wires().size());
    std::iota(all.begin(), all.end(), 0);
    if (sorted != all) throw NetworkError("plan does not eliminate every wire exactly once");
  }

  std::vector<const BoundaryOperation*> nodes;
  std::vector<ComplexMatrix> totals;
  OutcomeDistribution dist;
  std::size_t count = 1;
  for (const auto& [id, op] : net.nodes()) {
    dist.parties.push_back(id);
    nodes.push_back(&op);
    totals.push_back(op.total());
    if (count > (std::size_t{1} << 24) / op.size())
      throw NetworkError("too many outcome tuples to enumerate");
    count *= op.size();
  }

  std::vector<const ComplexMatrix*> bar;
  for (const auto& t : totals) bar.push_back(&t);
  const double den = detail::contract(net, plan, bar).matrix(0, 0).real();
  if (!(std::abs(den) >= 1e-12)) throw IncompatibleNetwork();

  auto digits = [&](std::size_t t) {
    std::vector<std::size_t> d(nodes.size());
    for (std::size_t k = nodes.size(); k-- > 0;) {
      d[k] = t % nodes[k]->size();
      t /= nodes[k]->size();
    }
    return d;
  };
  std::vector<double> numerators(count);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto d = digits(t);
      std::vector<const ComplexMatrix*> ops;
      for (std::size_t k = 0; k < nodes.size(); ++k) ops.push_back(&nodes[k]->op(d[k]));
      numerators[t] = detail::contract(net, plan, ops).matrix(0, 0).real();
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(opts.threads, count));
  if (threads == 1) {
    work(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back(work, std::min(count, w * chunk), std::min(count, (w + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < count; ++t) {
    const auto d = digits(t);
    std::vector<std::string> tuple;
    for (std::size_t k = 0; k < nodes.size(); ++k) tuple.push_back(nodes[k]->label(d[k]));
    dist.entries[std::move(tuple)] = numerators[t] / den;
  }
  return dist;
}

std::vector<std::vector<std::string>> sample_outcomes(const Network& net, std::uint64_t seed,
                                                      std::size_t n) {
  const auto dist = evaluate_network(net);
  std::vector<std::pair<double, const std::vector<std::string>*>> cdf;
  double acc = 0;
  for (const auto& [tuple, p] : dist.entries) {
    acc += std::max(0.0, p);
    cdf.push_back({acc, &tuple});
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u,
                               [](double v, const auto& e) { return v < e.first; });
    if (it == cdf.end()) --it;
    out.push_back(*it->second);
  }
  return out;
}

Network network_from_chain(const Chain& chain, const std::vector<ComplexMatrix>& s_per_cut) {
  std::vector<const SequentialOperation*> ops{&chain.prep};
  for (const auto& m : chain.middles) ops.push_back(&m);
  ops.push_back(&chain.meas);
  if (s_per_cut.size() + 1 != ops.size())
    throw std::invalid_argument("network_from_chain: need one S per cut");

  Network net;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const ComplexMatrix s = k + 1 < ops.size() ? s_per_cut[k] : ComplexMatrix::Identity(1, 1);
    net.add_node(chain_node_id(k), cp_to_boundary(*ops[k], s));
  }
  for (std::size_t k = 0; k + 1 < ops.size(); ++k) {
    const auto& out = ops[k]->output();
    const auto& in = ops[k + 1]->input();
    if (out.empty() && in.empty()) continue;
    if (out.size() != 1 || in.size() != 1)
      throw std::invalid_argument("network_from_chain: cuts must be single systems");
    net.add_wire({chain_node_id(k), out[0].id}, {chain_node_id(k + 1), in[0].id}, s_per_cut[k]);
  }
  return net;
}

Network network_from_chain(const Chain& chain) {
  std::vector<ComplexMatrix> s;
  std::size_t d = chain.prep.output_dim();
  s.push_back(ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  for (const auto& m : chain.middles) {
    d = m.output_dim();
    s.push_back(ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }
  return network_from_chain(chain, s);
}

}  // namespace chronoless
