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

#include "chronoless/boundary.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace chronoless {

namespace {

ComplexMatrix inverse(const ComplexMatrix& s) {
  return Eigen::MatrixXcd(s).fullPivLu().inverse();
}

// (I_A ⊗ S) m (I_A ⊗ S†).
ComplexMatrix dress_output(const ComplexMatrix& m, std::size_t din, const ComplexMatrix& s) {
  const ComplexMatrix full = kron(ComplexMatrix::Identity(static_cast<Eigen::Index>(din),
                                                          static_cast<Eigen::Index>(din)),
                                  s);
  return full * m * full.adjoint();
}

}  // namespace

WireState make_wire(std::size_t d, const ComplexMatrix& s,
                    std::pair<std::string, std::string> ends) {
  require_square(s, d, "make_wire");
  if (!is_invertible(s)) throw std::invalid_argument("make_wire: S is singular");
  if (ends.first == ends.second) throw LayoutError("wire ends must differ");
  ComplexMatrix si = inverse(s);
  const double t = (si.adjoint() * si).trace().real();
  const double c = std::sqrt(static_cast<double>(d) / t);
  si *= c;
  WireState w;
  w.end_a = std::move(ends.first);
  w.end_b = std::move(ends.second);
  w.dim = d;
  w.s = s / c;
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexVector phi =
      kron(si.adjoint(), ComplexMatrix::Identity(n, n)) * max_entangled_vector(d, Basis::computational(d));
  w.state = phi * phi.adjoint();
  return w;
}

WireState identity_wire(std::size_t d, std::pair<std::string, std::string> ends) {
  const auto n = static_cast<Eigen::Index>(d);
  return make_wire(d, ComplexMatrix::Identity(n, n), std::move(ends));
}

BoundaryOperation::BoundaryOperation(IndexLayout layout, std::vector<BoundaryOutcome> outcomes)
    : layout_(std::move(layout)), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument("boundary operation has no outcomes");
  std::set<std::string> seen;
  for (const auto& o : outcomes_) {
    if (o.label.empty()) throw std::invalid_argument("empty outcome label");
    if (o.label.find(',') != std::string::npos)
      throw std::invalid_argument("outcome label '" + o.label + "' contains ','");
    if (!seen.insert(o.label).second)
      throw std::invalid_argument("duplicate outcome label '" + o.label + "'");
    require_square(o.op, layout_.dim(), "BoundaryOperation");
    if (!o.op.allFinite()) throw std::invalid_argument("non-finite boundary operator");
  }
}

BoundaryOperation BoundaryOperation::null(IndexLayout layout,
                                          const std::vector<std::string>& labels) {
  const auto n = static_cast<Eigen::Index>(layout.dim());
  std::vector<BoundaryOutcome> outcomes;
  for (const auto& l : labels) outcomes.push_back({l, ComplexMatrix::Zero(n, n)});
  BoundaryOperation b(std::move(layout), std::move(outcomes));
  b.null_ = true;
  return b;
}

BoundaryOperation BoundaryOperation::single(IndexLayout layout, ComplexMatrix op,
                                            std::string label) {
  std::vector<BoundaryOutcome> outcomes;
  outcomes.push_back({std::move(label), std::move(op)});
  return BoundaryOperation(std::move(layout), std::move(outcomes));
}

std::vector<std::string> BoundaryOperation::labels() const {
  std::vector<std::string> out;
  for (const auto& o : outcomes_) out.push_back(o.label);
  return out;
}

std::size_t BoundaryOperation::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    if (outcomes_[i].label == label) return i;
  throw std::invalid_argument("unknown outcome label '" + label + "'");
}

ComplexMatrix BoundaryOperation::total() const {
  ComplexMatrix t = outcomes_.front().op;
  for (std::size_t i = 1; i < outcomes_.size(); ++i) t += outcomes_[i].op;
  return t;
}

BoundaryOperation BoundaryOperation::normalized() const {
  if (null_) return *this;
  const double tr = total().trace().real();
  const double d = static_cast<double>(layout_.dim());
  if (is_null_denominator(tr, d)) return null(layout_, labels());
  std::vector<BoundaryOutcome> out;
  for (const auto& o : outcomes_) out.push_back({o.label, o.op * (d / tr)});
  return BoundaryOperation(layout_, std::move(out));
}

BoundaryOperation BoundaryOperation::with_layout(IndexLayout layout) const {
  if (layout.dims() != layout_.dims())
    throw LayoutError("with_layout: dimensions do not match");
  BoundaryOperation b = *this;
  b.layout_ = std::move(layout);
  return b;
}

BoundaryOperation BoundaryOperation::permuted(std::span<const std::size_t> order) const {
  BoundaryOperation b = *this;
  for (auto& o : b.outcomes_) o.op = permute_systems(o.op, layout_, order);
  b.layout_ = layout_.permuted(order);
  return b;
}

BoundaryReport validate_boundary(const BoundaryOperation& b, double tol) {
  BoundaryReport r;
  const double d = static_cast<double>(b.layout().dim());
  r.trace_residual = std::abs(b.total().trace().real() - d);
  if (r.trace_residual > 1e-9 * std::max(1.0, d)) {
    r.valid = false;
    r.problems.push_back("trace of the total operator is " +
                         std::to_string(b.total().trace().real()) + ", expected " +
                         std::to_string(b.layout().dim()));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    const bool ok = is_psd(b.op(i), tol);
    r.outcome_positive.push_back(ok);
    if (!ok) {
      r.valid = false;
      r.problems.push_back("outcome '" + b.label(i) + "' is not positive semidefinite");
    }
  }
  return r;
}

BoundaryOperation cp_to_boundary(const SequentialOperation& op, const ComplexMatrix& sB) {
  require_square(sB, op.output_dim(), "cp_to_boundary");
  const IndexLayout layout = op.input().concat(op.output());
  std::vector<BoundaryOutcome> out;
  ComplexMatrix total;
  for (const auto& o : op.outcomes()) {
    ComplexMatrix m = dress_output(o.map.choi().transpose(), op.input_dim(), sB);
    total = total.size() ? ComplexMatrix(total + m) : m;
    out.push_back({o.label, std::move(m)});
  }
  const double den = total.trace().real();
  if (!(den > 0)) throw std::logic_error("cp_to_boundary: zero normalization");
  const double d = static_cast<double>(layout.dim());
  for (auto& o : out) o.op *= d / den;
  return BoundaryOperation(layout, std::move(out));
}

SequentialOperation boundary_to_cp(const BoundaryOperation& b, const ComplexMatrix& sB,
                                   const std::vector<std::string>& inputs) {
  const IndexLayout& layout = b.layout();
  std::vector<std::string> outputs;
  for (const auto& s : layout)
    if (std::find(inputs.begin(), inputs.end(), s.id) == inputs.end()) outputs.push_back(s.id);
  std::vector<std::size_t> perm;
  std::vector<System> in_sys, out_sys;
  for (const auto& id : inputs) {
    perm.push_back(layout.index_of(id));
    in_sys.push_back(layout[perm.back()]);
  }
  for (const auto& id : outputs) {
    perm.push_back(layout.index_of(id));
    out_sys.push_back(layout[perm.back()]);
  }
  const BoundaryOperation ordered = b.permuted(perm);
  const IndexLayout in_layout(in_sys), out_layout(out_sys);
  const std::size_t din = in_layout.dim(), dout = out_layout.dim();
  require_square(sB, dout, "boundary_to_cp");
  const ComplexMatrix si = inverse(sB);

  std::vector<ComplexMatrix> chois;
  double trace = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    chois.push_back(dress_output(ordered.op(i), din, si).transpose());
    trace += chois.back().trace().real();
  }
  if (!(trace > 0)) throw NullComposition("boundary_to_cp of the null operation");
  std::vector<Outcome> out;
  for (std::size_t i = 0; i < ordered.size(); ++i)
    out.push_back({ordered.label(i), KrausSet::from_choi(chois[i] / trace, din, dout)});
  return SequentialOperation(in_layout, out_layout, std::move(out));
}

StatePair boundary_apply(const BoundaryOperation& b, std::size_t i, const StatePair& s,
                         const WireState& wire) {
  const IndexLayout& layout = b.layout();
  if (!layout.contains(wire.end_a))
    throw LayoutError("boundary_apply: wire end '" + wire.end_a + "' is not a system of the operation");
  if (layout.contains(wire.end_b))
    throw LayoutError("boundary_apply: wire end '" + wire.end_b + "' clashes with the operation");
  if (layout.dim_of(wire.end_a) != wire.dim)
    throw LayoutError("boundary_apply: wire dimension mismatch");
  const std::vector<std::string> out_id{wire.end_a};
  const IndexLayout past = layout.without(out_id);
  require_square(s.rho, past.dim(), "boundary_apply");

  const LabeledOperator w = wire.labeled();
  const LabeledOperator kappa = link(link({layout, b.op(i)}, {past, s.rho}), w);
  const LabeledOperator kappa_bar = link(link({layout, b.total()}, {past, s.rho_bar}), w);
  const double den = kappa_bar.matrix.trace().real();
  if (is_null_denominator(den, static_cast<double>(layout.dim())))
    throw NullComposition();
  return {kappa.matrix / den, kappa_bar.matrix / den};
}

BoundaryOperation connect(const BoundaryOperation& a, const BoundaryOperation& b,
                          const std::string& port_a, const std::string& port_b,
                          const WireState& wire) {
  if (a.layout().dim_of(port_a) != wire.dim || b.layout().dim_of(port_b) != wire.dim)
    throw LayoutError("connect: port dimensions do not match the wire");
  const IndexLayout la = a.layout().renamed("a:");
  const IndexLayout lb = b.layout().renamed("b:");
  const LabeledOperator w{IndexLayout{{"a:" + port_a, wire.dim}, {"b:" + port_b, wire.dim}},
                          wire.state};

  std::vector<System> rest;
  for (const auto& s : a.layout())
    if (s.id != port_a) rest.push_back(s);
  for (const auto& s : b.layout())
    if (s.id != port_b) rest.push_back(s);
  const IndexLayout result(rest);

  auto contract = [&](const ComplexMatrix& m, const ComplexMatrix& n) {
    return link(link({la, m}, w), {lb, n}).matrix;
  };
  const double den = contract(a.total(), b.total()).trace().real();
  std::vector<std::string> labels;
  for (const auto& x : a.labels())
    for (const auto& y : b.labels()) labels.push_back(x + kOutcomeSeparator + y);
  if (a.is_null() || b.is_null() || is_null_denominator(den, 1.0))
    return BoundaryOperation::null(result, labels);

  const double d = static_cast<double>(result.dim());
  std::vector<BoundaryOutcome> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out.push_back({labels[k++], contract(a.op(i), b.op(j)) * (d / den)});
  return BoundaryOperation(result, std::move(out));
}

}  // namespace chronoless
