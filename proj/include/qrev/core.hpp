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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrev {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Default tolerances used across the library.  Checker pass thresholds are
// one order looser than construction targets to absorb the accumulation of
// O(d^3) rounding operations.
namespace tol {
inline constexpr double kStrict = 1e-12;       // exact-arithmetic identities
inline constexpr double kProperty = 1e-10;     // construction accuracy target
inline constexpr double kCheck = 1e-9;         // checker pass threshold
inline constexpr double kUnitary = 1e-10;      // unitarity defect
inline constexpr double kFrame = 1e-10;        // overcomplete-frame completeness
inline constexpr double kRank = 1e-10;         // relative eigenvalue cutoff (PD checks)
inline constexpr double kSvdCutoff = 1e-12;    // relative singular-value cutoff
}  // namespace tol

// Thrown when an operation's preconditions are violated (bad dimensions,
// singular reference states, non-unitary inputs, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical construction fails to meet its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

inline double unitarity_defect(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

inline bool is_unitary(const Matrix& m, double tolerance = tol::kUnitary) {
  return m.rows() == m.cols() && unitarity_defect(m) < tolerance;
}

}  // namespace qrev
