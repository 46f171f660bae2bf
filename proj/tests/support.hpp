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

// Random instances and slow reference implementations shared by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "chronoless/document.hpp"

namespace chronoless::testing {

using Rng = std::mt19937_64;

inline double max_abs(const ComplexMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

inline ComplexMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex z = r(k, k);
    q.col(k) *= std::abs(z) > 0 ? z / std::abs(z) : Complex(1);
  }
  return q;
}

// Columns of an isometry from `cols` into `rows` dimensions.
inline ComplexMatrix random_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
  return random_unitary(rng, rows).leftCols(static_cast<Eigen::Index>(cols));
}

inline ComplexMatrix random_density(Rng& rng, std::size_t d, std::size_t rank = 0) {
  const auto n = static_cast<Eigen::Index>(d);
  const auto r = static_cast<Eigen::Index>(rank ? rank : d);
  const ComplexMatrix a = random_matrix(rng, n, r);
  const ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline ComplexMatrix random_psd(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix a = random_matrix(rng, n, n);
  return a * a.adjoint();
}

// Well-conditioned invertible matrix, generally not unitary.
inline ComplexMatrix random_invertible(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return ComplexMatrix(ComplexMatrix::Identity(n, n)) * 1.5 + 0.4 * random_matrix(rng, n, n);
}

// Complex symmetric (S = Sᵀ) and non-unitary: an involutive time reversal.
inline ComplexMatrix random_symmetric_invertible(Rng& rng, std::size_t d) {
  const ComplexMatrix a = random_invertible(rng, d);
  return a * a.transpose();
}

// Standard instrument: outcomes split one Stinespring isometry.
inline SequentialOperation random_instrument(Rng& rng, std::size_t din, std::size_t dout,
                                             std::size_t outcomes, IndexLayout in = {},
                                             IndexLayout out = {}) {
  const std::size_t rank = std::max<std::size_t>(2, (din + dout * outcomes - 1) / (dout * outcomes));
  const ComplexMatrix v = random_isometry(rng, dout * outcomes * rank, din);
  std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> list;
  const auto o = static_cast<Eigen::Index>(dout);
  for (std::size_t i = 0; i < outcomes; ++i) {
    std::vector<ComplexMatrix> kraus;
    for (std::size_t a = 0; a < rank; ++a)
      kraus.push_back(v.middleRows(static_cast<Eigen::Index>(i * rank + a) * o, o));
    list.push_back({std::to_string(i), kraus});
  }
  if (in.empty() && din > 1) in = IndexLayout{{"in", din}};
  if (out.empty() && dout > 1) out = IndexLayout{{"out", dout}};
  return SequentialOperation::instrument(std::move(list), in, out);
}

// Reweights outcomes and renormalizes: Σ K†K is no longer the identity.
inline SequentialOperation post_selected(Rng& rng, const SequentialOperation& op) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<Outcome> outcomes;
  for (const auto& o : op.outcomes()) outcomes.push_back({o.label, o.map.scaled(u(rng))});
  // Weak filter on the input so the total is not trace preserving even
  // for a single outcome.
  const auto n = static_cast<Eigen::Index>(op.input_dim());
  ComplexMatrix f = ComplexMatrix::Identity(n, n);
  if (n > 1) f(0, 0) = 0.5;
  for (auto& o : outcomes) {
    std::vector<ComplexMatrix> k;
    for (const auto& m : o.map.operators()) k.push_back(m * f);
    o.map = KrausSet(op.input_dim(), op.output_dim(), k);
  }
  return SequentialOperation(op.input(), op.output(), std::move(outcomes)).normalized();
}

inline IndexLayout single(const std::string& id, std::size_t d) {
  return d > 1 ? IndexLayout{{id, d}} : IndexLayout{};
}

// prep → middles → meas over cut dims `dims` (one per cut).
inline Chain random_chain(Rng& rng, const std::vector<std::size_t>& dims, std::size_t outcomes,
                          bool allow_post_selection) {
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<std::size_t> count(1, outcomes);
  auto maybe_post = [&](SequentialOperation op) {
    return allow_post_selection && coin(rng) == 0 ? post_selected(rng, op) : op;
  };
  Chain c;
  const std::size_t cuts = dims.size();
  c.prep = maybe_post(random_instrument(rng, 1, dims[0], count(rng), {}, single("c0", dims[0])));
  for (std::size_t k = 1; k < cuts; ++k)
    c.middles.push_back(maybe_post(random_instrument(rng, dims[k - 1], dims[k], count(rng),
                                                     single("c" + std::to_string(k - 1), dims[k - 1]),
                                                     single("c" + std::to_string(k), dims[k]))));
  c.meas = maybe_post(random_instrument(rng, dims[cuts - 1], 1, count(rng),
                                        single("c" + std::to_string(cuts - 1), dims[cuts - 1]), {}));
  return c;
}

// Σ_{ij} |i⟩⟨j| ⊗ M(|i⟩⟨j|), built from the action on matrix units.
inline ComplexMatrix plain_choi(const std::vector<ComplexMatrix>& kraus, std::size_t din,
                                std::size_t dout) {
  const auto a = static_cast<Eigen::Index>(din), b = static_cast<Eigen::Index>(dout);
  ComplexMatrix out = ComplexMatrix::Zero(a * b, a * b);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < a; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(a, a);
      unit(i, j) = 1;
      ComplexMatrix image = ComplexMatrix::Zero(b, b);
      for (const auto& k : kraus) image += k * unit * k.adjoint();
      out.block(i * b, j * b, b, b) = image;
    }
  return out;
}

inline ComplexMatrix kraus_apply(const KrausSet& k, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(k.output_dim()),
                                          static_cast<Eigen::Index>(k.output_dim()));
  for (const auto& m : k.operators()) out += m * rho * m.adjoint();
  return out;
}

// Tr over the listed factor positions by explicit multi-index loops.
inline ComplexMatrix naive_partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                         const std::vector<bool>& traced) {
  const std::size_t n = dims.size();
  std::size_t keep_dim = 1;
  for (std::size_t k = 0; k < n; ++k)
    if (!traced[k]) keep_dim *= dims[k];
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(keep_dim),
                                          static_cast<Eigen::Index>(keep_dim));
  const auto total = static_cast<std::size_t>(m.rows());
  auto digits = [&](std::size_t x) {
    std::vector<std::size_t> d(n);
    for (std::size_t k = n; k-- > 0;) {
      d[k] = x % dims[k];
      x /= dims[k];
    }
    return d;
  };
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) {
      const auto dr = digits(r), dc = digits(c);
      bool diagonal = true;
      std::size_t kr = 0, kc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (traced[k]) {
          diagonal = diagonal && dr[k] == dc[k];
        } else {
          kr = kr * dims[k] + dr[k];
          kc = kc * dims[k] + dc[k];
        }
      }
      if (diagonal)
        out(static_cast<Eigen::Index>(kr), static_cast<Eigen::Index>(kc)) +=
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  return out;
}

inline double max_difference(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double dev = 0;
  for (const auto& [t, p] : a.entries) dev = std::max(dev, std::abs(p - b.at(t)));
  for (const auto& [t, p] : b.entries) dev = std::max(dev, std::abs(p - a.at(t)));
  return dev;
}

// Keeps the listed tuple slots, summing over the others.
inline OutcomeDistribution restrict_to(const OutcomeDistribution& d,
                                       const std::vector<std::string>& parties) {
  std::vector<std::size_t> slots;
  for (const auto& p : parties)
    slots.push_back(static_cast<std::size_t>(std::find(d.parties.begin(), d.parties.end(), p) -
                                             d.parties.begin()));
  OutcomeDistribution out;
  out.parties = parties;
  for (const auto& [t, p] : d.entries) {
    std::vector<std::string> key;
    for (auto s : slots) key.push_back(t.at(s));
    out.entries[key] += p;
  }
  return out;
}

inline std::vector<ComplexMatrix> cut_s(Rng& rng, const std::vector<std::size_t>& dims, bool unitary) {
  std::vector<ComplexMatrix> s;
  for (auto d : dims) s.push_back(unitary ? random_unitary(rng, d) : random_invertible(rng, d));
  return s;
}

}  // namespace chronoless::testing
