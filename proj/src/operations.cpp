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

#include "chronoless/operations.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace chronoless {

namespace {

IndexLayout default_layout(const char* id, Eigen::Index d) {
  if (d == 1) return {};
  return IndexLayout{{id, static_cast<std::size_t>(d)}};
}

// Kraus vectors of a PSD operator: √λ|v⟩ per eigenpair above cutoff.
std::vector<ComplexVector> psd_factors(const ComplexMatrix& m, double cutoff) {
  const Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<ComplexVector> out;
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index k = es.eigenvalues().size(); k-- > 0;) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= cutoff * scale) continue;
    out.push_back(std::sqrt(lambda) * es.eigenvectors().col(k));
  }
  return out;
}

std::string join_labels(const std::string& a, const std::string& b) {
  return a + kOutcomeSeparator + b;
}

double dims_product(std::initializer_list<std::size_t> dims) {
  double p = 1;
  for (auto d : dims) p *= static_cast<double>(d);
  return p;
}

}  // namespace

KrausSet::KrausSet(std::size_t input_dim, std::size_t output_dim,
                   std::vector<ComplexMatrix> operators)
    : input_dim_(input_dim), output_dim_(output_dim), operators_(std::move(operators)) {
  if (input_dim_ == 0 || output_dim_ == 0)
    throw std::invalid_argument("KrausSet: zero dimension");
  for (const auto& k : operators_) {
    if (static_cast<std::size_t>(k.rows()) != output_dim_ ||
        static_cast<std::size_t>(k.cols()) != input_dim_)
      throw std::invalid_argument("KrausSet: operator shape does not match dims");
    if (!k.allFinite()) throw std::invalid_argument("KrausSet: non-finite entry");
  }
  if (operators_.size() > input_dim_ * output_dim_)
    *this = from_choi(choi(), input_dim_, output_dim_, 0.0);
}

ComplexMatrix KrausSet::apply(const ComplexMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != input_dim_ || rho.cols() != rho.rows())
    throw std::invalid_argument("KrausSet::apply: dimension mismatch");
  const auto d = static_cast<Eigen::Index>(output_dim_);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators_) out.noalias() += k * rho * k.adjoint();
  return out;
}

ComplexMatrix KrausSet::adjoint_sum() const {
  const auto d = static_cast<Eigen::Index>(input_dim_);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators_) out.noalias() += k.adjoint() * k;
  return out;
}

double KrausSet::normalization() const {
  double s = 0;
  for (const auto& k : operators_) s += k.squaredNorm();
  return s / static_cast<double>(input_dim_);
}

ComplexMatrix KrausSet::choi() const {
  // (I ⊗ K)|Φ⁺⟩ has entries K(b, i)/√d at (i, b).
  const auto din = static_cast<Eigen::Index>(input_dim_);
  const auto dout = static_cast<Eigen::Index>(output_dim_);
  ComplexMatrix out = ComplexMatrix::Zero(din * dout, din * dout);
  for (const auto& k : operators_) {
    ComplexVector v(din * dout);
    for (Eigen::Index i = 0; i < din; ++i)
      for (Eigen::Index b = 0; b < dout; ++b) v(i * dout + b) = k(b, i);
    out.noalias() += v * v.adjoint();
  }
  return out / static_cast<double>(din);
}

KrausSet KrausSet::scaled(double factor) const {
  const double r = std::sqrt(factor);
  std::vector<ComplexMatrix> ops;
  ops.reserve(operators_.size());
  for (const auto& k : operators_) ops.push_back(r * k);
  return KrausSet(input_dim_, output_dim_, std::move(ops));
}

KrausSet KrausSet::from_choi(const ComplexMatrix& choi, std::size_t input_dim,
                             std::size_t output_dim, double cutoff) {
  const auto din = static_cast<Eigen::Index>(input_dim);
  const auto dout = static_cast<Eigen::Index>(output_dim);
  require_square(choi, input_dim * output_dim, "KrausSet::from_choi");
  std::vector<ComplexMatrix> ops;
  const double root = std::sqrt(static_cast<double>(input_dim));
  for (const auto& v : psd_factors(choi, cutoff)) {
    ComplexMatrix k(dout, din);
    for (Eigen::Index i = 0; i < din; ++i)
      for (Eigen::Index b = 0; b < dout; ++b) k(b, i) = root * v(i * dout + b);
    ops.push_back(std::move(k));
  }
  if (ops.size() > input_dim * output_dim) ops.resize(input_dim * output_dim);
  KrausSet out;
  out.input_dim_ = input_dim;
  out.output_dim_ = output_dim;
  out.operators_ = std::move(ops);
  return out;
}

SequentialOperation::SequentialOperation(IndexLayout input, IndexLayout output,
                                         std::vector<Outcome> outcomes)
    : input_(std::move(input)), output_(std::move(output)), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument("operation has no outcomes");
  std::set<std::string> seen;
  for (const auto& o : outcomes_) {
    if (o.label.empty()) throw std::invalid_argument("empty outcome label");
    if (o.label.find(',') != std::string::npos)
      throw std::invalid_argument("outcome label '" + o.label + "' contains ','");
    if (!seen.insert(o.label).second)
      throw std::invalid_argument("duplicate outcome label '" + o.label + "'");
    if (o.map.input_dim() != input_.dim() || o.map.output_dim() != output_.dim())
      throw std::invalid_argument("outcome '" + o.label +
                                  "' does not match the operation layouts");
  }
}

SequentialOperation SequentialOperation::preparation(
    const std::vector<std::pair<std::string, ComplexMatrix>>& states,
    IndexLayout output) {
  if (states.empty()) throw std::invalid_argument("preparation needs states");
  const auto d = states.front().second.rows();
  if (output.empty()) output = default_layout("out", d);
  std::vector<Outcome> outcomes;
  for (const auto& [label, rho] : states) {
    require_square(rho, output.dim(), "preparation");
    std::vector<ComplexMatrix> ops;
    for (const auto& v : psd_factors(rho, 0.0)) ops.emplace_back(v);
    outcomes.push_back({label, KrausSet(1, output.dim(), std::move(ops))});
  }
  return SequentialOperation({}, std::move(output), std::move(outcomes));
}

SequentialOperation SequentialOperation::measurement(
    const std::vector<std::pair<std::string, ComplexMatrix>>& effects,
    IndexLayout input) {
  if (effects.empty()) throw std::invalid_argument("measurement needs effects");
  const auto d = effects.front().second.rows();
  if (input.empty()) input = default_layout("in", d);
  std::vector<Outcome> outcomes;
  for (const auto& [label, e] : effects) {
    require_square(e, input.dim(), "measurement");
    std::vector<ComplexMatrix> ops;
    for (const auto& v : psd_factors(e, 0.0)) ops.emplace_back(v.adjoint());
    outcomes.push_back({label, KrausSet(input.dim(), 1, std::move(ops))});
  }
  return SequentialOperation(std::move(input), {}, std::move(outcomes));
}

SequentialOperation SequentialOperation::channel(std::vector<ComplexMatrix> kraus,
                                                 IndexLayout input, IndexLayout output,
                                                 std::string label) {
  std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> one;
  one.emplace_back(std::move(label), std::move(kraus));
  return instrument(std::move(one), std::move(input), std::move(output));
}

SequentialOperation SequentialOperation::instrument(
    std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> outcomes,
    IndexLayout input, IndexLayout output) {
  if (outcomes.empty() || outcomes.front().second.empty())
    throw std::invalid_argument("instrument needs Kraus operators");
  const auto& k0 = outcomes.front().second.front();
  if (input.empty()) input = default_layout("in", k0.cols());
  if (output.empty()) output = default_layout("out", k0.rows());
  std::vector<Outcome> out;
  for (auto& [label, ops] : outcomes)
    out.push_back({label, KrausSet(input.dim(), output.dim(), std::move(ops))});
  return SequentialOperation(std::move(input), std::move(output), std::move(out));
}

std::vector<std::string> SequentialOperation::labels() const {
  std::vector<std::string> out;
  for (const auto& o : outcomes_) out.push_back(o.label);
  return out;
}

std::size_t SequentialOperation::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    if (outcomes_[i].label == label) return i;
  throw std::invalid_argument("unknown outcome label '" + label + "'");
}

KrausSet SequentialOperation::total() const {
  std::vector<ComplexMatrix> ops;
  for (const auto& o : outcomes_)
    ops.insert(ops.end(), o.map.operators().begin(), o.map.operators().end());
  return KrausSet(input_dim(), output_dim(), std::move(ops));
}

ComplexMatrix SequentialOperation::apply(std::size_t i, const ComplexMatrix& rho) const {
  return outcomes_.at(i).map.apply(rho);
}

ComplexMatrix SequentialOperation::apply_total(const ComplexMatrix& rho) const {
  ComplexMatrix out = outcomes_.front().map.apply(rho);
  for (std::size_t i = 1; i < outcomes_.size(); ++i) out += outcomes_[i].map.apply(rho);
  return out;
}

ComplexMatrix SequentialOperation::state(std::size_t i) const {
  if (input_dim() != 1) throw std::invalid_argument("state(): input is not trivial");
  return apply(i, ComplexMatrix::Identity(1, 1));
}

ComplexMatrix SequentialOperation::effect(std::size_t j) const {
  if (output_dim() != 1) throw std::invalid_argument("effect(): output is not trivial");
  return outcomes_.at(j).map.adjoint_sum();
}

double SequentialOperation::normalization() const {
  double s = 0;
  for (const auto& o : outcomes_) s += o.map.normalization();
  return s;
}

SequentialOperation SequentialOperation::normalized() const {
  const double n = normalization();
  if (is_null_denominator(n, static_cast<double>(input_dim() * output_dim())))
    throw NullComposition("cannot normalize the zero operation");
  std::vector<Outcome> out;
  for (const auto& o : outcomes_) out.push_back({o.label, o.map.scaled(1.0 / n)});
  return SequentialOperation(input_, output_, std::move(out));
}

SequentialOperation SequentialOperation::with_layouts(IndexLayout input,
                                                      IndexLayout output) const {
  return SequentialOperation(std::move(input), std::move(output), outcomes_);
}

ValidationReport validate_operation(const SequentialOperation& op, double tol) {
  ValidationReport r;
  r.normalization_residual = std::abs(op.normalization() - 1.0);
  if (r.normalization_residual > std::max(tol, 1e-9)) {
    r.valid = false;
    r.problems.push_back("normalization residual " +
                         std::to_string(r.normalization_residual));
  }
  const ComplexMatrix total_choi = op.total().choi();
  for (std::size_t i = 0; i < op.size(); ++i) {
    const ComplexMatrix c = op.map(i).choi();
    const bool ok = is_psd(c, tol) && is_psd(ComplexMatrix(total_choi - c), tol);
    r.outcome_positive.push_back(ok);
    if (!ok) {
      r.valid = false;
      r.problems.push_back("outcome '" + op.label(i) + "' is not dominated by the total map");
    }
  }
  const auto d = static_cast<Eigen::Index>(op.input_dim());
  const ComplexMatrix defect = op.total().adjoint_sum() - ComplexMatrix::Identity(d, d);
  r.standard = defect.cwiseAbs().maxCoeff() <= tol;
  return r;
}

bool StatePair::is_valid(double tol) const {
  if (rho.rows() != rho_bar.rows()) return false;
  return is_psd(rho, tol) && is_psd(ComplexMatrix(rho_bar - rho), tol) &&
         std::abs(rho_bar.trace().real() - 1.0) <= 1e-9;
}

bool EffectPair::is_valid(double tol) const {
  if (e.rows() != e_bar.rows()) return false;
  return is_psd(e, tol) && is_psd(ComplexMatrix(e_bar - e), tol) &&
         std::abs(e_bar.trace().real() - static_cast<double>(dim())) <= 1e-9;
}

void UpdateKernel::validate(std::size_t old_outcomes) const {
  if (static_cast<std::size_t>(t.cols()) != old_outcomes)
    throw std::invalid_argument("update kernel column count does not match outcomes");
  if (static_cast<std::size_t>(t.rows()) != labels.size())
    throw std::invalid_argument("update kernel row count does not match labels");
  if (t.size() > 0 && t.minCoeff() < 0)
    throw std::invalid_argument("update kernel has negative entries");
  for (Eigen::Index i = 0; i < t.cols(); ++i)
    if (t.col(i).sum() > 1.0 + 1e-12)
      throw std::invalid_argument("update kernel column sum exceeds 1");
}

UpdateKernel UpdateKernel::identity(const std::vector<std::string>& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  return {labels, Eigen::MatrixXd::Identity(n, n)};
}

UpdateKernel UpdateKernel::coarse_grain(std::size_t old_outcomes, std::string label) {
  return {{std::move(label)},
          Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(old_outcomes))};
}

UpdateKernel UpdateKernel::restriction(const std::vector<std::string>& old_labels,
                                       const std::vector<std::size_t>& subset, double p) {
  UpdateKernel k;
  k.t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(subset.size()),
                              static_cast<Eigen::Index>(old_labels.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    k.labels.push_back(old_labels.at(subset[j]));
    k.t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(subset[j])) = p;
  }
  return k;
}

double OutcomeDistribution::total() const {
  double s = 0;
  for (const auto& [_, p] : entries) s += p;
  return s;
}

double OutcomeDistribution::at(const std::vector<std::string>& tuple) const {
  auto it = entries.find(tuple);
  return it == entries.end() ? 0.0 : it->second;
}

std::map<std::string, double> OutcomeDistribution::marginal(std::size_t slot) const {
  std::map<std::string, double> out;
  for (const auto& [tuple, p] : entries) out[tuple.at(slot)] += p;
  return out;
}

double total_variation(const std::map<std::string, double>& p,
                       const std::map<std::string, double>& q) {
  double s = 0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    s += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q)
    if (!p.count(k)) s += std::abs(v);
  return s / 2;
}

std::string chain_node_id(std::size_t k) {
  std::string digits = std::to_string(k);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return "op" + digits;
}

OutcomeDistribution joint_probability(const SequentialOperation& prep,
                                      const SequentialOperation& meas) {
  return circuit_probability_sequential(prep, {}, meas);
}

double state_effect_probability(const StatePair& s, const EffectPair& e) {
  if (s.dim() != e.dim()) throw std::invalid_argument("state/effect dimension mismatch");
  const double den = (s.rho_bar * e.e_bar).trace().real();
  if (is_null_denominator(den, static_cast<double>(s.dim()))) return 0.0;
  return (s.rho * e.e).trace().real() / den;
}

SequentialOperation compose_sequential(const SequentialOperation& m,
                                       const SequentialOperation& n) {
  if (m.output_dim() != n.input_dim())
    throw std::invalid_argument("compose_sequential: output/input dimension mismatch");
  const auto d = static_cast<Eigen::Index>(m.input_dim());
  const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  const double den = n.apply_total(m.apply_total(mixed)).trace().real();
  if (is_null_denominator(den, dims_product({m.input_dim(), m.output_dim(), n.output_dim()})))
    throw NullComposition();

  std::vector<Outcome> out;
  for (const auto& a : m.outcomes())
    for (const auto& b : n.outcomes()) {
      std::vector<ComplexMatrix> ops;
      for (const auto& l : b.map.operators())
        for (const auto& k : a.map.operators()) ops.push_back(l * k);
      out.push_back({join_labels(a.label, b.label),
                     KrausSet(m.input_dim(), n.output_dim(), std::move(ops)).scaled(1.0 / den)});
    }
  return SequentialOperation(m.input(), n.output(), std::move(out));
}

namespace {

std::pair<IndexLayout, IndexLayout> disjoint_layouts(const IndexLayout& a,
                                                     const IndexLayout& b) {
  for (const auto& s : a)
    if (b.contains(s.id)) return {a.renamed("l."), b.renamed("r.")};
  return {a, b};
}

}  // namespace

SequentialOperation compose_parallel(const SequentialOperation& m,
                                     const SequentialOperation& n) {
  const auto [in_a, in_b] = disjoint_layouts(m.input(), n.input());
  const auto [out_a, out_b] = disjoint_layouts(m.output(), n.output());
  std::vector<Outcome> out;
  for (const auto& a : m.outcomes())
    for (const auto& b : n.outcomes()) {
      std::vector<ComplexMatrix> ops;
      for (const auto& k : a.map.operators())
        for (const auto& l : b.map.operators()) ops.push_back(kron(k, l));
      out.push_back({join_labels(a.label, b.label),
                     KrausSet(m.input_dim() * n.input_dim(),
                              m.output_dim() * n.output_dim(), std::move(ops))});
    }
  SequentialOperation joint(in_a.concat(in_b), out_a.concat(out_b), std::move(out));
  return joint.normalized();
}

OutcomeDistribution deterministic_measure(const ComplexMatrix& rho_bar,
                                          const SequentialOperation& meas) {
  if (meas.output_dim() != 1)
    throw std::invalid_argument("deterministic_measure: not a measurement");
  require_square(rho_bar, meas.input_dim(), "deterministic_measure");
  OutcomeDistribution dist;
  dist.parties = {chain_node_id(0)};
  const double den = meas.apply_total(rho_bar).trace().real();
  dist.null_event = is_null_denominator(den, static_cast<double>(meas.input_dim()));
  for (std::size_t j = 0; j < meas.size(); ++j) {
    const double num = meas.apply(j, rho_bar).trace().real();
    dist.entries[{meas.label(j)}] = dist.null_event ? 0.0 : num / den;
  }
  return dist;
}

SequentialOperation update_operation(const SequentialOperation& op, const UpdateKernel& k) {
  k.validate(op.size());
  double den = 0;
  for (Eigen::Index j = 0; j < k.t.rows(); ++j)
    for (std::size_t i = 0; i < op.size(); ++i)
      den += k.t(j, static_cast<Eigen::Index>(i)) * op.map(i).normalization();
  if (is_null_denominator(den, 1.0)) throw NullUpdate();

  std::vector<Outcome> out;
  for (Eigen::Index j = 0; j < k.t.rows(); ++j) {
    std::vector<ComplexMatrix> ops;
    for (std::size_t i = 0; i < op.size(); ++i) {
      const double w = k.t(j, static_cast<Eigen::Index>(i));
      if (w == 0) continue;
      const double r = std::sqrt(w / den);
      for (const auto& kr : op.map(i).operators()) ops.push_back(r * kr);
    }
    if (ops.empty())
      ops.push_back(ComplexMatrix::Zero(static_cast<Eigen::Index>(op.output_dim()),
                                        static_cast<Eigen::Index>(op.input_dim())));
    out.push_back({k.labels.at(static_cast<std::size_t>(j)),
                   KrausSet(op.input_dim(), op.output_dim(), std::move(ops))});
  }
  return SequentialOperation(op.input(), op.output(), std::move(out));
}

OutcomeDistribution circuit_probability_sequential(
    const SequentialOperation& prep, const std::vector<SequentialOperation>& middles,
    const SequentialOperation& meas) {
  if (prep.input_dim() != 1) throw std::invalid_argument("first operation must be a preparation");
  if (meas.output_dim() != 1) throw std::invalid_argument("last operation must be a measurement");
  std::size_t carried = prep.output_dim();
  double dims = static_cast<double>(carried);
  for (const auto& m : middles) {
    if (m.input_dim() != carried) throw std::invalid_argument("chain dimensions do not match");
    carried = m.output_dim();
    dims *= static_cast<double>(carried);
  }
  if (meas.input_dim() != carried) throw std::invalid_argument("chain dimensions do not match");

  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  ComplexMatrix bar = prep.apply_total(one);
  for (const auto& m : middles) bar = m.apply_total(bar);
  const double den = meas.apply_total(bar).trace().real();
  if (is_null_denominator(den, dims)) throw NullComposition();

  std::vector<std::pair<std::vector<std::string>, ComplexMatrix>> branch;
  for (std::size_t i = 0; i < prep.size(); ++i) branch.push_back({{prep.label(i)}, prep.apply(i, one)});
  for (const auto& m : middles) {
    std::vector<std::pair<std::vector<std::string>, ComplexMatrix>> next;
    for (const auto& [tuple, rho] : branch)
      for (std::size_t i = 0; i < m.size(); ++i) {
        auto t = tuple;
        t.push_back(m.label(i));
        next.push_back({std::move(t), m.apply(i, rho)});
      }
    branch = std::move(next);
  }

  OutcomeDistribution dist;
  for (std::size_t k = 0; k < middles.size() + 2; ++k) dist.parties.push_back(chain_node_id(k));
  for (const auto& [tuple, rho] : branch)
    for (std::size_t j = 0; j < meas.size(); ++j) {
      auto t = tuple;
      t.push_back(meas.label(j));
      dist.entries[t] = meas.apply(j, rho).trace().real() / den;
    }
  return dist;
}

OutcomeDistribution circuit_probability_sequential(const Chain& chain) {
  return circuit_probability_sequential(chain.prep, chain.middles, chain.meas);
}

}  // namespace chronoless
