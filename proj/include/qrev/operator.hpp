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
#include "qrev/space.hpp"

namespace qrev {

// Dense complex operator between labeled composite spaces.  Square operators
// (channels, Hamiltonians, density operators) have out_space == in_space;
// cross-space maps (W : A -> B, partial kets) carry distinct layouts.
struct Operator {
  Matrix mat;
  SpaceLayout out_space;
  SpaceLayout in_space;

  Operator() = default;

  Operator(Matrix m, SpaceLayout out, SpaceLayout in)
      : mat(std::move(m)), out_space(std::move(out)), in_space(std::move(in)) {
    require(mat.rows() == out_space.total_dim() && mat.cols() == in_space.total_dim(),
            "operator matrix does not match its space layout");
    require(all_finite(mat), "operator entries must be finite");
  }

  // Square operator on a single layout.
  Operator(Matrix m, SpaceLayout space) : Operator(std::move(m), space, space) {}

  Index rows() const { return mat.rows(); }
  Index cols() const { return mat.cols(); }
  bool is_square() const { return out_space == in_space; }

  static Operator identity(const SpaceLayout& space) {
    return Operator(Matrix::Identity(space.total_dim(), space.total_dim()), space);
  }

  static Operator zero(const SpaceLayout& space) {
    return Operator(Matrix::Zero(space.total_dim(), space.total_dim()), space);
  }
};

// Normalized pure state on a labeled composite space.
struct PureState {
  Vector vec;
  SpaceLayout space;

  PureState() = default;

  PureState(Vector v, SpaceLayout s) : vec(std::move(v)), space(std::move(s)) {
    require(vec.size() == space.total_dim(), "state vector does not match its space layout");
    require(vec.allFinite(), "state entries must be finite");
    require(std::abs(vec.norm() - 1.0) < tol::kStrict,
            "pure state must have unit norm (within 1e-12)");
  }

  Index dim() const { return vec.size(); }

  // Normalizes before constructing; rejects (near-)zero vectors.
  static PureState normalized(Vector v, SpaceLayout s) {
    const double n = v.norm();
    require(n > 1e-14, "cannot normalize a zero vector");
    return PureState(v / n, std::move(s));
  }

  static PureState basis_state(const SpaceLayout& s, Index k) {
    Vector v = Vector::Zero(s.total_dim());
    require(k >= 0 && k < s.total_dim(), "basis index out of range");
    v(k) = 1.0;
    return PureState(std::move(v), s);
  }
};

inline Operator projector(const PureState& psi) {
  return Operator(psi.vec * psi.vec.adjoint(), psi.space);
}

}  // namespace qrev
