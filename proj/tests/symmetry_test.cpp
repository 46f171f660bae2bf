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

#include <algorithm>

#include <gtest/gtest.h>

#include "chronoless/symmetry.hpp"
#include "support.hpp"

namespace chronoless {
namespace {

using testing::max_abs;
using testing::Rng;

const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

ComplexMatrix diag12() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = 1;
  s(1, 1) = 2;
  return s;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix proj(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  v.normalize();
  return v * v.adjoint();
}

StatePair random_state_pair(Rng& rng, std::size_t d) {
  const ComplexMatrix a = testing::random_psd(rng, d), b = testing::random_psd(rng, d);
  const double tr = (a + b).trace().real();
  return {a / tr, (a + b) / tr};
}

EffectPair random_effect_pair(Rng& rng, std::size_t d) {
  const ComplexMatrix a = testing::random_psd(rng, d), b = testing::random_psd(rng, d);
  const double tr = (a + b).trace().real() / static_cast<double>(d);
  return {a / tr, (a + b) / tr};
}

TEST(SymmetryTransform, RejectsSingularS) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = 1;
  EXPECT_THROW(SymmetryTransform::time_reversal(s), std::invalid_argument);
}

TEST(SymmetryTransform, FlagsNonUnitaryS) {
  Rng rng(1);
  EXPECT_FALSE(SymmetryTransform::time_reversal(3.0 * testing::random_unitary(rng, 3)).flagged_nonunitary());
  EXPECT_TRUE(SymmetryTransform::time_reversal(diag12()).flagged_nonunitary());
}

TEST(TypeI, StateExamples) {
  Rng rng(2);
  const auto st = random_state_pair(rng, 2);
  const SymmetryTransform trivial(SymmetryKind::kTypeI, id2, false);
  const auto same = transform_state_typeI(st, trivial);
  EXPECT_LT(max_abs(same.rho - st.rho), 1e-15);

  const SymmetryTransform u(SymmetryKind::kTypeI, testing::random_unitary(rng, 2), false);
  const auto rotated = transform_state_typeI(st, u);
  EXPECT_NEAR(rotated.rho.trace().real(), st.rho.trace().real(), 1e-12);
  EXPECT_LT(max_abs(rotated.rho - u.s * st.rho * u.s.adjoint()), 1e-12);

  const SymmetryTransform d(SymmetryKind::kTypeI, diag12(), false);
  const auto out = transform_state_typeI({id2 / 2.0, id2 / 2.0}, d);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0 / 5;
  expected(1, 1) = 4.0 / 5;
  EXPECT_LT(max_abs(out.rho_bar - expected), 1e-15);
}

TEST(TypeI, EffectExamples) {
  Rng rng(3);
  const auto ef = random_effect_pair(rng, 2);
  const SymmetryTransform trivial(SymmetryKind::kTypeI, id2, false);
  EXPECT_LT(max_abs(transform_effect_typeI(ef, trivial).e - ef.e), 1e-15);

  const SymmetryTransform u(SymmetryKind::kTypeI, testing::random_unitary(rng, 2), false);
  const auto povm = transform_effect_typeI({proj(1, 0), id2}, u);
  EXPECT_LT(max_abs(povm.e_bar - id2), 1e-12);
  EXPECT_LT(max_abs(povm.e - u.s * proj(1, 0) * u.s.adjoint()), 1e-12);

  const SymmetryTransform d(SymmetryKind::kTypeI, diag12(), false);
  const auto out = transform_effect_typeI({id2, id2}, d);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 8.0 / 5;
  expected(1, 1) = 2.0 / 5;
  EXPECT_LT(max_abs(out.e_bar - expected), 1e-15);
}

TEST(TypeII, StateToEffectExamples) {
  const auto t = SymmetryTransform::time_reversal(id2);
  const auto e = transform_state_to_effect({proj(1, 0), proj(1, 0)}, t);
  EXPECT_LT(max_abs(e.e - 2.0 * proj(1, 0)), 1e-15);
  EXPECT_LT(max_abs(e.e_bar - 2.0 * proj(1, 0)), 1e-15);

  // |+i⟩ goes to 2|−i⟩⟨−i| under transposition.
  const auto y = transform_state_to_effect({proj(1, Complex(0, 1)), proj(1, Complex(0, 1))}, t);
  EXPECT_LT(max_abs(y.e - 2.0 * proj(1, Complex(0, -1))), 1e-15);

  Rng rng(4);
  const auto u = SymmetryTransform::time_reversal(testing::random_unitary(rng, 3));
  EXPECT_NEAR(transform_state_to_effect(random_state_pair(rng, 3), u).e_bar.trace().real(), 3.0, 1e-12);
}

TEST(TypeII, EffectToStateExamples) {
  const auto t = SymmetryTransform::time_reversal(id2);
  const auto s = transform_effect_to_state({id2, id2}, t);
  EXPECT_LT(max_abs(s.rho - id2 / 2.0), 1e-15);
  EXPECT_LT(max_abs(s.rho_bar - id2 / 2.0), 1e-15);

  // S = diag(1,2): S⁻¹†(·)S⁻¹ with S⁻¹ = diag(1, ½), normalized by
  // Tr S⁻¹†S⁻¹ = 5/4.
  const auto d = SymmetryTransform::time_reversal(diag12());
  const auto out = transform_effect_to_state({proj(1, 1), id2}, d);
  ComplexMatrix rho(2, 2), bar(2, 2);
  rho << 2.0 / 5, 1.0 / 5, 1.0 / 5, 1.0 / 10;
  bar << 4.0 / 5, 0, 0, 1.0 / 5;
  EXPECT_LT(max_abs(out.rho - rho), 1e-15);
  EXPECT_LT(max_abs(out.rho_bar - bar), 1e-15);
}

TEST(TypeII, RoundTripUnderInvolutiveTransform) {
  Rng rng(5);
  for (const ComplexMatrix& s : {ComplexMatrix(id2), sigma_y(), testing::random_symmetric_invertible(rng, 2)}) {
    const auto t = SymmetryTransform::time_reversal(s);
    const auto st = random_state_pair(rng, 2);
    const auto back = transform_effect_to_state(transform_state_to_effect(st, t), t);
    EXPECT_LT(max_abs(back.rho - st.rho), 1e-10);
    EXPECT_LT(max_abs(back.rho_bar - st.rho_bar), 1e-10);
  }
}

TEST(Symmetry, PreservesStateEffectProbabilities) {
  Rng rng(6);
  for (int n = 0; n < 10; ++n) {
    const auto st = random_state_pair(rng, 3);
    const auto ef = random_effect_pair(rng, 3);
    const double p = state_effect_probability(st, ef);
    const ComplexMatrix s = testing::random_invertible(rng, 3);
    for (bool transpose : {false, true}) {
      const SymmetryTransform one(SymmetryKind::kTypeI, s, transpose);
      EXPECT_NEAR(state_effect_probability(transform_state_typeI(st, one), transform_effect_typeI(ef, one)),
                  p, 1e-10);
      const SymmetryTransform two(SymmetryKind::kTypeII, s, transpose);
      EXPECT_NEAR(state_effect_probability(transform_effect_to_state(ef, two),
                                           transform_state_to_effect(st, two)),
                  p, 1e-10);
    }
  }
}

TEST(TimeReversal, UnitaryChannelBecomesTranspose) {
  Rng rng(7);
  const ComplexMatrix u = testing::random_unitary(rng, 3);
  const auto op = SequentialOperation::channel({u});
  const auto id3 = SymmetryTransform::time_reversal(ComplexMatrix::Identity(3, 3));
  const auto rev = time_reverse_operation(op, id3, id3);
  ASSERT_EQ(rev.map(0).operators().size(), 1u);
  EXPECT_LT(max_abs(rev.map(0).operators()[0] - u.transpose()), 1e-12);
}

TEST(TimeReversal, IdentityStaysIdentity) {
  const auto t = SymmetryTransform::time_reversal(id2);
  const auto rev = time_reverse_operation(SequentialOperation::channel({id2}), t, t);
  EXPECT_LT(max_abs(rev.map(0).operators()[0] - id2), 1e-15);
}

TEST(TimeReversal, UnitarySpectrumPreserved) {
  Rng rng(8);
  auto sorted_eigs = [](const ComplexMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    return v;
  };
  for (int n = 0; n < 10; ++n) {
    const ComplexMatrix u = testing::random_unitary(rng, 3);
    const auto sa = SymmetryTransform::time_reversal(testing::random_unitary(rng, 3));
    const auto rev = time_reverse_operation(SequentialOperation::channel({u}), sa, sa);
    const ComplexMatrix ur = rev.map(0).operators()[0];
    EXPECT_LT(max_abs(ur.adjoint() * ur - ComplexMatrix::Identity(3, 3)), 1e-10);
    const auto a = sorted_eigs(u), b = sorted_eigs(ur);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-9);
  }
}

TEST(TimeReversal, ReversedOperationsAreValid) {
  Rng rng(9);
  for (int n = 0; n < 10; ++n) {
    const auto op = testing::post_selected(rng, testing::random_instrument(rng, 2, 3, 3));
    const auto rev = time_reverse_operation(op, SymmetryTransform::time_reversal(testing::random_invertible(rng, 2)),
                                            SymmetryTransform::time_reversal(testing::random_invertible(rng, 3)));
    EXPECT_TRUE(validate_operation(rev).valid);
    EXPECT_EQ(rev.input(), op.output());
    EXPECT_EQ(rev.output(), op.input());
  }
}

double twice_deviation(Rng& rng, const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto sa = SymmetryTransform::time_reversal(a);
  const auto sb = SymmetryTransform::time_reversal(b);
  const auto op = testing::post_selected(rng, testing::random_instrument(rng, 2, 3, 3));
  const auto twice = time_reverse_operation(time_reverse_operation(op, sa, sb), sb, sa);
  const auto prep = testing::random_instrument(rng, 1, 2, 2);
  const auto meas = testing::random_instrument(rng, 3, 1, 2);
  return testing::max_difference(circuit_probability_sequential(prep, {op}, meas),
                                 circuit_probability_sequential(prep, {twice}, meas));
}

TEST(TimeReversal, TwiceGivesTheSameStatistics) {
  Rng rng(10);
  for (int n = 0; n < 10; ++n) {
    const ComplexMatrix a = n % 2 ? ComplexMatrix(sigma_y()) : testing::random_symmetric_invertible(rng, 2);
    EXPECT_LT(twice_deviation(rng, a, testing::random_symmetric_invertible(rng, 3)), 1e-10);
  }
  // S ≠ ±Sᵀ: the double reversal is a different operation.
  EXPECT_GT(twice_deviation(rng, testing::random_unitary(rng, 2), testing::random_unitary(rng, 3)), 1e-3);
}

TEST(TimeReversal, RejectsTypeIAndMismatchedDims) {
  const SymmetryTransform one(SymmetryKind::kTypeI, id2, true);
  const auto two = SymmetryTransform::time_reversal(id2);
  const auto op = SequentialOperation::channel({id2});
  EXPECT_THROW(time_reverse_operation(op, one, two), std::invalid_argument);
  EXPECT_THROW(time_reverse_operation(op, SymmetryTransform::time_reversal(ComplexMatrix::Identity(3, 3)), two),
               std::invalid_argument);
}

TEST(Involution, Examples) {
  auto r = check_involution(SymmetryTransform::time_reversal(id2));
  EXPECT_TRUE(r);
  EXPECT_EQ(r.parity, Parity::kBosonic);

  r = check_involution(SymmetryTransform::time_reversal(sigma_y()));
  EXPECT_TRUE(r);
  EXPECT_EQ(r.parity, Parity::kFermionic);

  r = check_involution(SymmetryTransform(SymmetryKind::kTypeI, diag12(), false));
  EXPECT_FALSE(r);
}

TEST(Involution, NonSymmetricTimeReversalIsNotInvolutive) {
  Rng rng(11);
  for (int n = 0; n < 5; ++n) {
    const auto r = check_involution(SymmetryTransform::time_reversal(testing::random_invertible(rng, 3)));
    EXPECT_FALSE(r);
    EXPECT_EQ(r.parity, Parity::kNeither);
  }
  const auto sym = check_involution(SymmetryTransform::time_reversal(testing::random_symmetric_invertible(rng, 3)));
  EXPECT_TRUE(sym);
  EXPECT_EQ(sym.parity, Parity::kBosonic);
}

TEST(Invariance, BornPairWithIdentity) {
  Chain c;
  c.prep = SequentialOperation::preparation({{"0", proj(1, 0)}, {"1", proj(0, 1)}});
  c.prep = c.prep.normalized();
  c.meas = SequentialOperation::measurement({{"0", proj(1, 0)}, {"1", proj(0, 1)}});
  EXPECT_EQ(verify_circuit_invariance(c, {SymmetryTransform::time_reversal(id2)}), 0.0);
}

TEST(Invariance, RandomChains) {
  Rng rng(12);
  for (int n = 0; n < 20; ++n) {
    const bool post = n % 2 == 1;
    const Chain c = testing::random_chain(rng, {2, 3, 2}, 3, post);
    std::vector<SymmetryTransform> t;
    for (std::size_t d : {2, 3, 2}) t.push_back(SymmetryTransform::time_reversal(testing::random_unitary(rng, d)));
    EXPECT_LT(verify_circuit_invariance(c, t), 1e-9);
  }
}

}  // namespace
}  // namespace chronoless
