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

#include "chronoless/symmetry.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace chronoless {

namespace {

ComplexMatrix maybe_transpose(const ComplexMatrix& m, const SymmetryTransform& t) {
  return t.use_transpose ? transpose_in_basis(m, t.basis) : m;
}

ComplexMatrix inverse(const ComplexMatrix& s) {
  return Eigen::MatrixXcd(s).fullPivLu().inverse();
}

void require_kind(const SymmetryTransform& t, SymmetryKind kind) {
  if (t.kind != kind) throw std::invalid_argument("symmetry transform has the wrong kind");
}

ComplexMatrix random_psd(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  ComplexMatrix g(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) g(r, c) = Complex(n(rng), n(rng));
  return g * g.adjoint();
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

SymmetryTransform::SymmetryTransform(SymmetryKind kind_, ComplexMatrix s_,
                                     bool use_transpose_, std::optional<Basis> basis_)
    : kind(kind_),
      s(std::move(s_)),
      use_transpose(use_transpose_),
      basis(basis_ ? *basis_ : Basis::computational(static_cast<std::size_t>(s.rows()))) {
  if (!is_invertible(s)) throw std::invalid_argument("symmetry operator is not invertible");
  if (basis.dim() != s.rows()) throw std::invalid_argument("basis dimension does not match S");
}

SymmetryTransform SymmetryTransform::time_reversal(ComplexMatrix s) {
  return SymmetryTransform(SymmetryKind::kTypeII, std::move(s), true);
}

double SymmetryTransform::unitarity_defect() const {
  const ComplexMatrix g = s.adjoint() * s;
  const double c = g.trace().real() / static_cast<double>(dim());
  return max_abs(ComplexMatrix(g / c - ComplexMatrix::Identity(s.rows(), s.cols())));
}

StatePair transform_state_typeI(const StatePair& x, const SymmetryTransform& t) {
  require_kind(t, SymmetryKind::kTypeI);
  const ComplexMatrix rho = t.s * maybe_transpose(x.rho, t) * t.s.adjoint();
  const ComplexMatrix bar = t.s * maybe_transpose(x.rho_bar, t) * t.s.adjoint();
  const double n = bar.trace().real();
  if (!(n > 0)) throw std::logic_error("transformed state has zero trace");
  return {rho / n, bar / n};
}

EffectPair transform_effect_typeI(const EffectPair& x, const SymmetryTransform& t) {
  require_kind(t, SymmetryKind::kTypeI);
  const ComplexMatrix si = inverse(t.s);
  const ComplexMatrix e = si.adjoint() * maybe_transpose(x.e, t) * si;
  const ComplexMatrix bar = si.adjoint() * maybe_transpose(x.e_bar, t) * si;
  const double n = bar.trace().real();
  if (!(n > 0)) throw std::logic_error("transformed effect has zero trace");
  const double d = static_cast<double>(x.dim());
  return {d * e / n, d * bar / n};
}

EffectPair transform_state_to_effect(const StatePair& x, const SymmetryTransform& t) {
  require_kind(t, SymmetryKind::kTypeII);
  const ComplexMatrix e = t.s * maybe_transpose(x.rho, t) * t.s.adjoint();
  const ComplexMatrix bar = t.s * maybe_transpose(x.rho_bar, t) * t.s.adjoint();
  const double n = bar.trace().real();
  if (!(n > 0)) throw std::logic_error("transformed state has zero trace");
  const double d = static_cast<double>(x.dim());
  return {d * e / n, d * bar / n};
}

StatePair transform_effect_to_state(const EffectPair& x, const SymmetryTransform& t) {
  require_kind(t, SymmetryKind::kTypeII);
  const ComplexMatrix si = inverse(t.s);
  const ComplexMatrix rho = si.adjoint() * maybe_transpose(x.e, t) * si;
  const ComplexMatrix bar = si.adjoint() * maybe_transpose(x.e_bar, t) * si;
  const double n = bar.trace().real();
  if (!(n > 0)) throw std::logic_error("transformed effect has zero trace");
  return {rho / n, bar / n};
}

SequentialOperation time_reverse_operation(const SequentialOperation& op,
                                           const SymmetryTransform& sA,
                                           const SymmetryTransform& sB) {
  if (sA.kind != SymmetryKind::kTypeII || sB.kind != SymmetryKind::kTypeII ||
      !sA.use_transpose || !sB.use_transpose)
    throw std::invalid_argument("time reversal needs type-II transforms with transposition");
  if (sA.dim() != op.input_dim() || sB.dim() != op.output_dim())
    throw std::invalid_argument("time reversal: transform dimensions do not match operation");

  const ComplexMatrix sa_inv = inverse(sA.s);
  std::vector<std::vector<ComplexMatrix>> reversed;
  double norm = 0;
  for (const auto& o : op.outcomes()) {
    std::vector<ComplexMatrix> ops;
    for (const auto& k : o.map.operators()) {
      ComplexMatrix r = (sB.s * conjugate_in_basis(k, sB.basis, sA.basis) * sa_inv).adjoint();
      norm += r.squaredNorm();
      ops.push_back(std::move(r));
    }
    reversed.push_back(std::move(ops));
  }
  const double d_b = static_cast<double>(op.output_dim());
  const double lambda = std::sqrt(norm / d_b);
  if (!(lambda > 0)) throw NullComposition("time reversal of the zero operation");

  std::vector<Outcome> out;
  for (std::size_t i = 0; i < op.size(); ++i) {
    for (auto& k : reversed[i]) k /= lambda;
    out.push_back({op.label(i), KrausSet(op.output_dim(), op.input_dim(), std::move(reversed[i]))});
  }
  return SequentialOperation(op.output(), op.input(), std::move(out));
}

InvolutionReport check_involution(const SymmetryTransform& t, std::size_t trials, double tol) {
  InvolutionReport rep;
  std::mt19937_64 rng(0x5eed0000u + t.dim());
  const auto d = static_cast<Eigen::Index>(t.dim());
  for (std::size_t n = 0; n < trials; ++n) {
    const ComplexMatrix a = random_psd(rng, d);
    const ComplexMatrix b = random_psd(rng, d);
    const double tr = (a + b).trace().real();
    const StatePair st{a / tr, (a + b) / tr};
    const EffectPair ef{static_cast<double>(d) * a / tr, static_cast<double>(d) * (a + b) / tr};

    StatePair st2;
    EffectPair ef2;
    if (t.kind == SymmetryKind::kTypeI) {
      st2 = transform_state_typeI(transform_state_typeI(st, t), t);
      ef2 = transform_effect_typeI(transform_effect_typeI(ef, t), t);
    } else {
      st2 = transform_effect_to_state(transform_state_to_effect(st, t), t);
      ef2 = transform_state_to_effect(transform_effect_to_state(ef, t), t);
    }
    rep.max_deviation = std::max({rep.max_deviation, max_abs(st2.rho - st.rho),
                                  max_abs(st2.rho_bar - st.rho_bar), max_abs(ef2.e - ef.e),
                                  max_abs(ef2.e_bar - ef.e_bar)});
  }
  rep.involutive = rep.max_deviation <= tol;

  const ComplexMatrix st = transpose_in_basis(t.s, t.basis);
  const double scale = max_abs(t.s);
  if (max_abs(t.s - st) <= tol * scale)
    rep.parity = Parity::kBosonic;
  else if (max_abs(t.s + st) <= tol * scale)
    rep.parity = Parity::kFermionic;
  return rep;
}

Chain reverse_chain(const Chain& chain, const std::vector<SymmetryTransform>& transforms) {
  const std::size_t n = chain.middles.size();
  if (transforms.size() != n + 1)
    throw std::invalid_argument("need one transform per cut system");
  const auto trivial = SymmetryTransform::trivial();
  Chain out;
  out.prep = time_reverse_operation(chain.meas, transforms[n], trivial);
  for (std::size_t k = n; k-- > 0;)
    out.middles.push_back(time_reverse_operation(chain.middles[k], transforms[k], transforms[k + 1]));
  out.meas = time_reverse_operation(chain.prep, trivial, transforms[0]);
  return out;
}

double verify_circuit_invariance(const Chain& chain,
                                 const std::vector<SymmetryTransform>& transforms) {
  const auto forward = circuit_probability_sequential(chain.prep, chain.middles, chain.meas);
  const Chain rev = reverse_chain(chain, transforms);
  const auto backward = circuit_probability_sequential(rev.prep, rev.middles, rev.meas);
  double dev = 0;
  for (const auto& [tuple, p] : forward.entries) {
    std::vector<std::string> flipped(tuple.rbegin(), tuple.rend());
    dev = std::max(dev, std::abs(p - backward.at(flipped)));
  }
  return dev;
}

}  // namespace chronoless
