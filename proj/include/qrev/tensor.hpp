// Copyright 2026 The qrev Authors
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

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qrev/core.hpp"
#include "qrev/operator.hpp"
#include "qrev/space.hpp"

namespace qrev {

//=============================================================================
// Products and traces
//=============================================================================

inline Operator tensor_product(const Operator& a, const Operator& b) {
  return Operator(Eigen::kroneckerProduct(a.mat, b.mat).eval(),
                  a.out_space.joined(b.out_space), a.in_space.joined(b.in_space));
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(Eigen::kroneckerProduct(a.vec, b.vec).eval(),
                   a.space.joined(b.space));
}

// Trace over one labeled factor of a square operator.
inline Operator partial_trace(const Operator& x, const std::string& over) {
  require(x.is_square(), "partial trace needs a square operator");
  const SpaceLayout& layout = x.in_space;
  auto pos = layout.find(over);
  require(pos.has_value(), "unknown space label '" + over + "'");
  const SpaceLayout rest = layout.without(over);
  const Index d_rest = rest.total_dim();
  const Index d_over = layout.factor(*pos).dim;

  Matrix out = Matrix::Zero(d_rest, d_rest);
  std::vector<Index> row_idx(static_cast<size_t>(layout.num_factors()));
  std::vector<Index> col_idx(static_cast<size_t>(layout.num_factors()));
  for (Index r = 0; r < d_rest; ++r) {
    const auto r_rest = rest.unravel(r);
    for (Index c = 0; c < d_rest; ++c) {
      const auto c_rest = rest.unravel(c);
      Complex sum = 0.0;
      for (Index k = 0; k < d_over; ++k) {
        size_t ri = 0;
        for (Index f = 0; f < layout.num_factors(); ++f) {
          if (f == *pos) {
            row_idx[static_cast<size_t>(f)] = k;
            col_idx[static_cast<size_t>(f)] = k;
          } else {
            row_idx[static_cast<size_t>(f)] = r_rest[ri];
            col_idx[static_cast<size_t>(f)] = c_rest[ri];
            ++ri;
          }
        }
        sum += x.mat(layout.ravel(row_idx), layout.ravel(col_idx));
      }
      out(r, c) = sum;
    }
  }
  return Operator(std::move(out), rest);
}

// Embed an operator acting on a subset of factors into a larger layout,
// tensoring identities on the remaining factors.  The operator's factors must
// appear in the full layout in the same relative order; interleavings such as
// U_{AE} inside A*B*E are handled by index arithmetic.
inline Operator embed(const Operator& x, const SpaceLayout& full) {
  require(x.is_square(), "embed needs a square operator");
  const SpaceLayout& sub = x.in_space;
  std::vector<Index> sub_pos;  // position of each sub factor within full
  Index cursor = 0;
  for (Index i = 0; i < sub.num_factors(); ++i) {
    const auto& f = sub.factor(i);
    bool found = false;
    for (Index j = cursor; j < full.num_factors(); ++j) {
      if (full.factor(j).label == f.label) {
        require(full.factor(j).dim == f.dim, "dimension mismatch for label '" + f.label + "'");
        sub_pos.push_back(j);
        cursor = j + 1;
        found = true;
        break;
      }
    }
    require(found, "label '" + f.label + "' missing from target layout (or out of order)");
  }

  const Index D = full.total_dim();
  Matrix out = Matrix::Zero(D, D);
  std::vector<Index> sub_row(static_cast<size_t>(sub.num_factors()));
  std::vector<Index> sub_col(static_cast<size_t>(sub.num_factors()));
  std::vector<bool> in_sub(static_cast<size_t>(full.num_factors()), false);
  for (Index p : sub_pos) in_sub[static_cast<size_t>(p)] = true;
  for (Index r = 0; r < D; ++r) {
    const auto rf = full.unravel(r);
    for (Index c = 0; c < D; ++c) {
      const auto cf = full.unravel(c);
      bool identity_ok = true;
      for (Index j = 0; j < full.num_factors() && identity_ok; ++j) {
        if (!in_sub[static_cast<size_t>(j)] &&
            rf[static_cast<size_t>(j)] != cf[static_cast<size_t>(j)]) {
          identity_ok = false;
        }
      }
      if (!identity_ok) continue;
      for (size_t k = 0; k < sub_pos.size(); ++k) {
        sub_row[k] = rf[static_cast<size_t>(sub_pos[k])];
        sub_col[k] = cf[static_cast<size_t>(sub_pos[k])];
      }
      out(r, c) = x.mat(sub.ravel(sub_row), sub.ravel(sub_col));
    }
  }
  return Operator(std::move(out), full);
}

// Hilbert-Schmidt inner product tr(y^dag x), antilinear in the first slot.
inline Complex hs_inner(const Operator& y, const Operator& x) {
  require(y.rows() == x.rows() && y.cols() == x.cols(),
          "hs_inner: dimension mismatch");
  return (y.mat.adjoint() * x.mat).trace();
}

inline double frobenius_distance(const Operator& a, const Operator& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "frobenius_distance: dimension mismatch");
  return (a.mat - b.mat).norm();
}

//=============================================================================
// Operator functions
//=============================================================================

// Real power of a Hermitian positive-definite matrix via eigendecomposition.
// Eigenvalues below rank_tol (relative to the largest) are rejected.
inline Matrix pd_power(const Matrix& m, double s, double rank_tol = tol::kRank) {
  require(m.rows() == m.cols(), "pd_power: square matrix required");
  require(hermiticity_defect(m) < tol::kProperty * (1.0 + m.norm()),
          "pd_power: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const auto& evals = es.eigenvalues();
  const double top = evals(evals.size() - 1);
  require(top > 0.0 && evals(0) > rank_tol * top,
          "pd_power: matrix is not positive-definite at the requested tolerance");
  Eigen::VectorXd powered(evals.size());
  for (Index i = 0; i < evals.size(); ++i) powered(i) = std::pow(evals(i), s);
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

inline Operator pd_power(const Operator& m, double s, double rank_tol = tol::kRank) {
  require(m.is_square(), "pd_power: square operator required");
  return Operator(pd_power(m.mat, s, rank_tol), m.out_space);
}

// Unitary exponential of an anti-Hermitian generator.  Computed by
// eigendecomposition of the Hermitian i*g, so the result is unitary
// regardless of the generator norm.
inline Matrix expm_skew(const Matrix& g) {
  require(g.rows() == g.cols(), "expm_skew: square matrix required");
  require((g + g.adjoint()).norm() < tol::kProperty * (1.0 + g.norm()),
          "expm_skew: generator is not anti-Hermitian");
  const Matrix h = (kI * g + (kI * g).adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(es.eigenvalues().size());
  for (Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(-kI * es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Operator expm_skew(const Operator& g) {
  require(g.is_square(), "expm_skew: square operator required");
  return Operator(expm_skew(g.mat), g.out_space);
}

//=============================================================================
// Partial ket/bra calculus
//=============================================================================

namespace detail {

// Partial ket for a raw (not necessarily normalized) vector on the labeled
// factor; frame elements of an overcomplete system come through here.
inline Operator partial_ket_raw(const Vector& xi, const std::string& label,
                                const SpaceLayout& full) {
  auto pos = full.find(label);
  require(pos.has_value(), "partial_ket: label '" + label + "' missing from layout");
  require(full.factor(*pos).dim == xi.size(), "partial_ket: dimension mismatch");
  const SpaceLayout rest = full.without(label);

  Matrix k = Matrix::Zero(full.total_dim(), rest.total_dim());
  std::vector<Index> full_idx(static_cast<size_t>(full.num_factors()));
  for (Index c = 0; c < rest.total_dim(); ++c) {
    const auto rest_idx = rest.unravel(c);
    for (Index e = 0; e < xi.size(); ++e) {
      size_t ri = 0;
      for (Index f = 0; f < full.num_factors(); ++f) {
        if (f == *pos) {
          full_idx[static_cast<size_t>(f)] = e;
        } else {
          full_idx[static_cast<size_t>(f)] = rest_idx[ri++];
        }
      }
      k(full.ravel(full_idx), c) = xi(e);
    }
  }
  return Operator(std::move(k), full, rest);
}

inline Operator partial_bra_raw(const Vector& xi, const std::string& label,
                                const SpaceLayout& full) {
  Operator k = partial_ket_raw(xi, label, full);
  return Operator(k.mat.adjoint(), k.in_space, k.out_space);
}

}  // namespace detail

// The partial ket |xi>_y : psi -> psi (x) xi, as an explicit matrix from the
// complement of xi's factor to the full layout.  The factor slots into the
// composite ordering given by `full`.
inline Operator partial_ket(const PureState& xi, const SpaceLayout& full) {
  require(xi.space.num_factors() == 1, "partial_ket: xi must live on a single factor");
  return detail::partial_ket_raw(xi.vec, xi.space.factor(0).label, full);
}

// Adjoint of the partial ket: <xi|_y : full -> complement.
inline Operator partial_bra(const PureState& xi, const SpaceLayout& full) {
  require(xi.space.num_factors() == 1, "partial_bra: xi must live on a single factor");
  return detail::partial_bra_raw(xi.vec, xi.space.factor(0).label, full);
}

// <j|_y u |chi>_y for u acting on a composite that contains the factor the
// two states live on; returns an operator on the remaining factor(s).
inline Operator partial_bra_sandwich(const PureState& j, const Operator& u,
                                     const PureState& chi) {
  require(j.space == chi.space, "partial_bra_sandwich: bra and ket live on different spaces");
  const Operator bra = partial_bra(j, u.out_space);
  const Operator ket = partial_ket(chi, u.in_space);
  return Operator(bra.mat * u.mat * ket.mat, bra.out_space, ket.in_space);
}

//=============================================================================
// Overcomplete frames
//=============================================================================

// A system {|j>} with sum_j |j><j| = I, not necessarily orthonormal, linearly
// independent, or normalized.  Completeness is verified at construction.
class OvercompleteFrame {
 public:
  static OvercompleteFrame make(std::vector<Vector> vectors, SpaceLayout space,
                                double tolerance = tol::kFrame) {
    require(!vectors.empty(), "frame must be nonempty");
    require(space.num_factors() == 1, "frame vectors must live on a single factor");
    const Index d = space.total_dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& v : vectors) {
      require(v.size() == d, "frame vector dimension mismatch");
      sum += v * v.adjoint();
    }
    const double defect = (sum - Matrix::Identity(d, d)).norm();
    require(defect < tolerance, "frame is not complete: sum |j><j| != I");
    OvercompleteFrame f;
    f.vectors_ = std::move(vectors);
    f.space_ = std::move(space);
    return f;
  }

  static OvercompleteFrame standard(const SpaceLayout& space) {
    std::vector<Vector> vs;
    for (Index k = 0; k < space.total_dim(); ++k) {
      Vector v = Vector::Zero(space.total_dim());
      v(k) = 1.0;
      vs.push_back(std::move(v));
    }
    return make(std::move(vs), space);
  }

  const SpaceLayout& space() const { return space_; }
  const std::string& label() const { return space_.factor(0).label; }
  size_t size() const { return vectors_.size(); }
  const Vector& operator[](size_t j) const { return vectors_[j]; }
  const std::vector<Vector>& vectors() const { return vectors_; }

 private:
  OvercompleteFrame() = default;
  std::vector<Vector> vectors_;
  SpaceLayout space_;
};

}  // namespace qrev
