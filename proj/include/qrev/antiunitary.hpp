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

#include <utility>

#include "qrev/core.hpp"
#include "qrev/operator.hpp"
#include "qrev/tensor.hpp"

namespace qrev {

//=============================================================================
// Conjugations and antiunitary operators
//=============================================================================

// A conjugation is an antiunitary involution.  It is stored by its fixing
// basis (the unique orthonormal basis it leaves invariant): the action on a
// vector is basis-transform, entrywise conjugate, transform back.  Antilinear
// maps are never flattened to matrices over C; they are applied functionally.
class Conjugation {
 public:
  Conjugation() = default;  // empty; usable only after assignment

  static Conjugation make(Matrix basis, SpaceLayout space) {
    require(basis.rows() == space.total_dim() && basis.cols() == basis.rows(),
            "conjugation basis must be square on its space");
    require(unitarity_defect(basis) < tol::kStrict,
            "conjugation basis must be unitary within 1e-12");
    return Conjugation(std::move(basis), std::move(space));
  }

  static Conjugation standard(SpaceLayout space) {
    const Index d = space.total_dim();
    return Conjugation(Matrix::Identity(d, d), std::move(space));
  }

  const Matrix& basis() const { return basis_; }
  const SpaceLayout& space() const { return space_; }
  Index dim() const { return basis_.rows(); }

  Vector apply(const Vector& psi) const {
    require(psi.size() == dim(), "conjugation: dimension mismatch");
    return basis_ * (basis_.adjoint() * psi).conjugate();
  }

  // Conjugation transported through a unitary w: theta' = w theta w^dag,
  // whose fixing basis is w * basis.
  Conjugation transported(const Operator& w) const {
    require(w.cols() == dim(), "conjugation transport: dimension mismatch");
    require(is_unitary(w.mat), "conjugation transport needs a unitary");
    return Conjugation(w.mat * basis_, w.out_space);
  }

 private:
  Conjugation(Matrix basis, SpaceLayout space)
      : basis_(std::move(basis)), space_(std::move(space)) {}

  Matrix basis_;
  SpaceLayout space_;
};

// General antiunitary operator T = u * theta (unitary times conjugation).
struct AntiunitaryOp {
  Operator u;
  Conjugation conj;

  static AntiunitaryOp make(Operator u, Conjugation conj) {
    require(u.cols() == conj.dim(), "antiunitary: dimension mismatch");
    require(is_unitary(u.mat), "antiunitary: u must be unitary");
    return AntiunitaryOp{std::move(u), std::move(conj)};
  }
};

inline PureState apply_antiunitary(const AntiunitaryOp& t, const PureState& psi) {
  require(psi.dim() == t.conj.dim(), "apply_antiunitary: dimension mismatch");
  return PureState(t.u.mat * t.conj.apply(psi.vec), t.u.out_space);
}

//=============================================================================
// The operator-level maps
//=============================================================================

// Theta X = theta X theta.  In theta's fixing basis this is the entrywise
// conjugate of X's matrix.
inline Operator theta_map(const Conjugation& theta, const Operator& x) {
  require(x.is_square() && x.rows() == theta.dim(), "theta_map: dimension mismatch");
  const Matrix& b = theta.basis();
  return Operator(b * (b.adjoint() * x.mat * b).conjugate() * b.adjoint(), x.out_space);
}

// J X = X^dag.
inline Operator adjoint_map(const Operator& x) {
  return Operator(x.mat.adjoint(), x.in_space, x.out_space);
}

// W X = w X w^dag for unitary w; maps operators on w's domain to operators on
// its codomain.
inline Operator unitary_conj_map(const Operator& w, const Operator& x) {
  require(is_unitary(w.mat), "unitary_conj_map: w is not unitary within 1e-10");
  require(x.is_square() && x.rows() == w.cols(), "unitary_conj_map: dimension mismatch");
  return Operator(w.mat * x.mat * w.mat.adjoint(), w.out_space);
}

// Checks that sigma is a full-rank density operator (Hermitian, unit trace,
// eigenvalues above the relative rank cutoff).
inline void require_full_rank_density(const Operator& sigma,
                                      double rank_tol = tol::kRank) {
  require(sigma.is_square(), "density operator must be square");
  require(hermiticity_defect(sigma.mat) < tol::kProperty * (1.0 + sigma.mat.norm()),
          "density operator must be Hermitian");
  require(std::abs(sigma.mat.trace() - Complex(1.0)) < 1e-10,
          "density operator must have unit trace within 1e-10");
  Eigen::SelfAdjointEigenSolver<Matrix> es((sigma.mat + sigma.mat.adjoint()) / 2.0);
  const double top = es.eigenvalues().maxCoeff();
  require(top > 0.0 && es.eigenvalues().minCoeff() > rank_tol * top,
          "density operator is singular at the requested tolerance");
}

// Modular power: Delta_sigma^s X = sigma^s X sigma^{-s}.
inline Operator modular_pow(const Operator& sigma, double s, const Operator& x) {
  require_full_rank_density(sigma);
  require(x.is_square() && x.rows() == sigma.rows(), "modular_pow: dimension mismatch");
  const Matrix p = pd_power(sigma.mat, s);
  const Matrix q = pd_power(sigma.mat, -s);
  return Operator(p * x.mat * q, x.out_space);
}

// Q = Theta J Delta_sigma^{-1/2}; the composition of the two antilinear maps
// with the linear modular power is linear in x.  This is the map that
// transports system-side Kraus operators to reverser Kraus operators.
inline Operator q_map(const Operator& sigma, const Conjugation& theta,
                      const Operator& x) {
  require(theta.dim() == sigma.rows(), "q_map: conjugation/state dimension mismatch");
  return theta_map(theta, adjoint_map(modular_pow(sigma, -0.5, x)));
}

}  // namespace qrev
