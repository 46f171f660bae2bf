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

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "chronoless/errors.hpp"
#include "chronoless/layout.hpp"

namespace chronoless {

template <typename Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
template <typename Real>
using Vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<double>;
using ComplexVector = Vector<double>;
using Complex = std::complex<double>;

inline constexpr double kPsdTolerance = 1e-9;

// Orthonormal basis stored as the columns of a unitary matrix.
class Basis {
 public:
  explicit Basis(ComplexMatrix vectors, double tol = 1e-12)
      : vectors_(std::move(vectors)) {
    if (vectors_.rows() != vectors_.cols())
      throw std::invalid_argument("basis matrix must be square");
    const ComplexMatrix gram = vectors_.adjoint() * vectors_;
    const ComplexMatrix id = ComplexMatrix::Identity(dim(), dim());
    if ((gram - id).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("basis vectors are not orthonormal");
  }

  static Basis computational(std::size_t d) {
    return Basis(ComplexMatrix::Identity(static_cast<Eigen::Index>(d),
                                         static_cast<Eigen::Index>(d)));
  }

  Eigen::Index dim() const { return vectors_.rows(); }
  const ComplexMatrix& vectors() const { return vectors_; }
  bool is_computational() const { return vectors_.isIdentity(0.0); }

 private:
  ComplexMatrix vectors_;
};

template <typename Derived>
using PlainMatrix = Matrix<typename Derived::RealScalar>;

template <typename A, typename B>
PlainMatrix<A> kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, std::size_t side,
                    const char* what) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != side)
    throw std::invalid_argument(std::string(what) + ": matrix side " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) +
                                " does not match layout dimension " +
                                std::to_string(side));
}

// Reorders tensor factors: new factor k is old factor order[k].
template <typename Derived>
PlainMatrix<Derived> permute_systems(const Eigen::MatrixBase<Derived>& m,
                                     const IndexLayout& layout,
                                     std::span<const std::size_t> order) {
  require_square(m, layout.dim(), "permute_systems");
  const auto idx = permutation_indices(layout, order);
  const auto n = static_cast<Eigen::Index>(idx.size());
  PlainMatrix<Derived> out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = m(static_cast<Eigen::Index>(idx[r]),
                    static_cast<Eigen::Index>(idx[c]));
  return out;
}

// Order that moves the named systems to the back, keeping everything else
// in its original order.
inline std::vector<std::size_t> order_with_back(const IndexLayout& layout,
                                                std::span<const std::string> back) {
  std::vector<std::size_t> order;
  std::vector<bool> moved(layout.size(), false);
  for (const auto& id : back) {
    const auto k = layout.index_of(id);
    if (moved[k]) throw LayoutError("system '" + id + "' listed twice");
    moved[k] = true;
  }
  for (std::size_t k = 0; k < layout.size(); ++k)
    if (!moved[k]) order.push_back(k);
  for (const auto& id : back) order.push_back(layout.index_of(id));
  return order;
}

template <typename Derived>
PlainMatrix<Derived> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                   const IndexLayout& layout,
                                   std::span<const std::string> traced) {
  require_square(m, layout.dim(), "partial_trace");
  const auto order = order_with_back(layout, traced);
  const PlainMatrix<Derived> p = permute_systems(m, layout, order);
  std::size_t dt = 1;
  for (const auto& id : traced) dt *= layout.dim_of(id);
  const auto t = static_cast<Eigen::Index>(dt);
  const auto k = static_cast<Eigen::Index>(layout.dim() / dt);
  PlainMatrix<Derived> out = PlainMatrix<Derived>::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index s = 0; s < t; ++s) out(i, j) += p(i * t + s, j * t + s);
  return out;
}

template <typename Derived>
PlainMatrix<Derived> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                   const IndexLayout& layout,
                                   std::initializer_list<std::string> traced) {
  const std::vector<std::string> ids(traced);
  return partial_trace(m, layout, std::span<const std::string>(ids));
}

// Transposes the matrix elements taken in basis b: B (B† m B)ᵀ B†.
template <typename Derived>
PlainMatrix<Derived> transpose_in_basis(const Eigen::MatrixBase<Derived>& m,
                                        const Basis& b) {
  if (m.rows() != b.dim() || m.cols() != b.dim())
    throw std::invalid_argument("transpose_in_basis: dimension mismatch");
  if (b.is_computational()) return m.transpose();
  const auto& v = b.vectors();
  return v * (v.adjoint() * m * v).transpose() * v.adjoint();
}

// Complex conjugation of matrix elements taken in the given bases (rows in
// `out`, columns in `in`).
template <typename Derived>
PlainMatrix<Derived> conjugate_in_basis(const Eigen::MatrixBase<Derived>& m,
                                        const Basis& out, const Basis& in) {
  if (m.rows() != out.dim() || m.cols() != in.dim())
    throw std::invalid_argument("conjugate_in_basis: dimension mismatch");
  if (out.is_computational() && in.is_computational()) return m.conjugate();
  const auto& u = out.vectors();
  const auto& v = in.vectors();
  return u * (u.adjoint() * m * v).conjugate() * v.adjoint();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Smallest eigenvalue of the Hermitian part.
template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Plain h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Plain> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m,
            typename Derived::RealScalar tol = kPsdTolerance) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  if (hermiticity_defect(m) >= tol && tol > 0) return false;
  return min_eigenvalue(m) >= -tol;
}

template <typename Derived>
bool is_invertible(const Eigen::MatrixBase<Derived>& m, double rel = 1e-10) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                                 Eigen::Dynamic>>
      svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > rel * sv(0);
}

// |Φ⁺⟩ = Σ_i |b_i⟩|b_i⟩/√d as a vector.
inline ComplexVector max_entangled_vector(std::size_t d, const Basis& b) {
  if (static_cast<std::size_t>(b.dim()) != d)
    throw std::invalid_argument("max_entangled: basis dimension mismatch");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector v = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v += kron(b.vectors().col(i), b.vectors().col(i));
  return v / std::sqrt(static_cast<double>(d));
}

inline ComplexMatrix max_entangled(std::size_t d, const Basis& b) {
  const ComplexVector v = max_entangled_vector(d, b);
  return v * v.adjoint();
}

inline ComplexMatrix max_entangled(std::size_t d) {
  return max_entangled(d, Basis::computational(d));
}

// Link product over the systems the two layouts share:
//   Tr_shared[(a ⊗ I)(I ⊗ b)]
// on the remaining systems, a's first then b's, each in original order.
// Unshared operands give a ⊗ b; fully shared ones give Tr(ab).
template <typename A, typename B>
PlainMatrix<A> link_product(const Eigen::MatrixBase<A>& a, const IndexLayout& la,
                            const Eigen::MatrixBase<B>& b, const IndexLayout& lb) {
  require_square(a, la.dim(), "link_product");
  require_square(b, lb.dim(), "link_product");
  std::vector<std::string> shared;
  for (const auto& s : la)
    if (lb.contains(s.id)) {
      if (lb.dim_of(s.id) != s.dim)
        throw LayoutError("shared system '" + s.id + "' has mismatched dimension");
      shared.push_back(s.id);
    }
  const auto order_a = order_with_back(la, shared);
  std::vector<std::size_t> order_b;
  for (const auto& id : shared) order_b.push_back(lb.index_of(id));
  for (std::size_t k = 0; k < lb.size(); ++k)
    if (!la.contains(lb[k].id)) order_b.push_back(k);

  const PlainMatrix<A> ap = permute_systems(a, la, order_a);
  const PlainMatrix<A> bp = permute_systems(b, lb, order_b);

  std::size_t dsh = 1;
  for (const auto& id : shared) dsh *= la.dim_of(id);
  const auto ds = static_cast<Eigen::Index>(dsh);
  const auto da = static_cast<Eigen::Index>(la.dim() / dsh);
  const auto db = static_cast<Eigen::Index>(lb.dim() / dsh);

  PlainMatrix<A> a2(da * da, ds * ds);
  for (Eigen::Index f = 0; f < da; ++f)
    for (Eigen::Index g = 0; g < da; ++g)
      for (Eigen::Index s = 0; s < ds; ++s)
        for (Eigen::Index t = 0; t < ds; ++t)
          a2(f * da + g, s * ds + t) = ap(f * ds + s, g * ds + t);
  PlainMatrix<A> b2(ds * ds, db * db);
  for (Eigen::Index s = 0; s < ds; ++s)
    for (Eigen::Index t = 0; t < ds; ++t)
      for (Eigen::Index f = 0; f < db; ++f)
        for (Eigen::Index g = 0; g < db; ++g)
          b2(s * ds + t, f * db + g) = bp(t * db + f, s * db + g);
  const PlainMatrix<A> r2 = a2 * b2;

  PlainMatrix<A> out(da * db, da * db);
  for (Eigen::Index f = 0; f < da; ++f)
    for (Eigen::Index g = 0; g < da; ++g)
      for (Eigen::Index h = 0; h < db; ++h)
        for (Eigen::Index k = 0; k < db; ++k)
          out(f * db + h, g * db + k) = r2(f * da + g, h * db + k);
  return out;
}

// Layout produced by link_product(a, la, b, lb).
inline IndexLayout link_layout(const IndexLayout& la, const IndexLayout& lb) {
  std::vector<System> out;
  for (const auto& s : la)
    if (!lb.contains(s.id)) out.push_back(s);
  for (const auto& s : lb)
    if (!la.contains(s.id)) out.push_back(s);
  return IndexLayout(std::move(out));
}

// Operator annotated with its layout; the unit the contraction code passes
// around.
struct LabeledOperator {
  IndexLayout layout;
  ComplexMatrix matrix;
};

inline LabeledOperator link(const LabeledOperator& a, const LabeledOperator& b) {
  return {link_layout(a.layout, b.layout),
          link_product(a.matrix, a.layout, b.matrix, b.layout)};
}

// Hermitian PSD square root, clipping small negative eigenvalues.
template <typename Derived>
PlainMatrix<Derived> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Plain h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Plain> es(h);
  const auto ev = es.eigenvalues().cwiseMax(0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace chronoless
