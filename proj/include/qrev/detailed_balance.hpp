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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qrev/antiunitary.hpp"
#include "qrev/channel.hpp"
#include "qrev/core.hpp"
#include "qrev/reversal.hpp"

namespace qrev {

namespace detail {

inline void require_steady(const KrausChannel& f, const Operator& sigma,
                           double tolerance = tol::kCheck) {
  require(sigma.rows() == f.d_in(), "sigma does not match the channel");
  require_full_rank_density(sigma);
  const double residual = frobenius_distance(apply(f, sigma), sigma);
  require(residual < tolerance,
          "sigma is not steady under the channel: residual " + std::to_string(residual));
}

}  // namespace detail

//=============================================================================
// SQDB-theta condition
//=============================================================================

// Theorem-2 form of the detailed-balance condition: Theta sigma = sigma
// together with F = Theta F^Petz Theta.
inline ReversalReport check_sqdb_theta(const KrausChannel& f, const Operator& sigma,
                                       const Conjugation& theta,
                                       double tolerance = tol::kCheck) {
  detail::require_steady(f, sigma);
  require(theta.dim() == sigma.rows(), "theta does not match the channel");
  const double state_residual =
      frobenius_distance(theta_map(theta, sigma), sigma);
  const SuperoperatorMatrix petz = petz_map(f, sigma);
  const double map_residual =
      map_distance(to_superoperator(f), theta_sandwich(petz, theta));
  const double worst = std::max(state_residual, map_residual);
  std::string witness = state_residual >= map_residual
                            ? "state invariance residual dominates"
                            : "Petz-map residual dominates";
  return make_report("sqdb_theta", worst, tolerance, std::move(witness));
}

// Definition-level check: <F^{n HS} Y, X>_sigma = <F^{n HS} Theta X, Theta Y>_sigma
// for n = 0..n_max over all matrix-unit pairs (exact spanning coverage at
// desk scale).
inline ReversalReport check_sqdb_direct(const KrausChannel& f, const Operator& sigma,
                                        const Conjugation& theta, int n_max,
                                        double tolerance = tol::kCheck) {
  require(n_max >= 0, "n_max must be nonnegative");
  detail::require_steady(f, sigma);
  const Index d = f.d_in();
  const Matrix root = pd_power(sigma.mat, 0.5);
  const SuperoperatorMatrix m = to_superoperator(f);
  const Matrix m_hs = m.mat.adjoint();

  const SpaceLayout space = f.in_space();
  double worst = 0.0;
  std::string witness;
  Matrix power = Matrix::Identity(d * d, d * d);
  for (int n = 0; n <= n_max; ++n) {
    for (Index ax = 0; ax < d; ++ax) {
      for (Index bx = 0; bx < d; ++bx) {
        Matrix x = Matrix::Zero(d, d);
        x(ax, bx) = 1.0;
        const Matrix theta_x = theta_map(theta, Operator(x, space)).mat;
        const Matrix fn_theta_x = unvec(power * vec(theta_x), d, d);
        for (Index ay = 0; ay < d; ++ay) {
          for (Index by = 0; by < d; ++by) {
            Matrix y = Matrix::Zero(d, d);
            y(ay, by) = 1.0;
            const Matrix fn_y = unvec(power * vec(y), d, d);
            const Matrix theta_y = theta_map(theta, Operator(y, space)).mat;
            const Complex lhs = (fn_y.adjoint() * root * x * root).trace();
            const Complex rhs = (fn_theta_x.adjoint() * root * theta_y * root).trace();
            const double err = std::abs(lhs - rhs);
            if (err > worst) {
              worst = err;
              witness = "n=" + std::to_string(n) + " X=E(" + std::to_string(ax) + "," +
                        std::to_string(bx) + ") Y=E(" + std::to_string(ay) + "," +
                        std::to_string(by) + ")";
            }
          }
        }
      }
    }
    power = m_hs * power;
  }
  return make_report("sqdb_direct", worst, tolerance, std::move(witness));
}

//=============================================================================
// The c matrix of Q f_j = sum_k c_jk f_k
//=============================================================================

struct CMatrixResult {
  Matrix c;
  bool valid = false;                   // residual below the acceptance cutoff
  double residual = 0.0;                // least-squares fit residual
  double partial_isometry_defect = 0.0; // ||c c^dag c - c||
  double involution_defect = 0.0;       // ||c^2 - I||
  bool kraus_linearly_independent = false;
  double unitarity_defect = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares solve of Q f_j = sum_k c_jk f_k over the vectorized Kraus
// family, with pseudo-inverse cutoff 1e-12.  Reports the minimal-norm
// solution; the condition guarantees existence, not uniqueness.
inline CMatrixResult solve_c_matrix(const KrausChannel& f, const Operator& sigma,
                                    const Conjugation& theta,
                                    double accept_tol = 1e-8) {
  detail::require_steady(f, sigma);
  const Index d = f.d_in();
  const Index n_kraus = static_cast<Index>(f.kraus().size());
  Matrix f_mat(d * d, n_kraus);
  Matrix qf_mat(d * d, n_kraus);
  for (Index j = 0; j < n_kraus; ++j) {
    f_mat.col(j) = vec(f.kraus()[static_cast<size_t>(j)].mat);
    qf_mat.col(j) = vec(q_map(sigma, theta, f.kraus()[static_cast<size_t>(j)]).mat);
  }

  // Q F = F c^T columnwise.
  Eigen::JacobiSVD<Matrix> svd(f_mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double top = svd.singularValues()(0);
  Index rank = 0;
  Vector inv_s = Vector::Zero(svd.singularValues().size());
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol::kSvdCutoff * top) {
      inv_s(i) = 1.0 / svd.singularValues()(i);
      ++rank;
    }
  }
  const Matrix f_pinv = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
  const Matrix c_t = f_pinv * qf_mat;

  CMatrixResult result;
  result.c = c_t.transpose();
  result.residual = (f_mat * c_t - qf_mat).norm();
  result.valid = result.residual < accept_tol;
  result.partial_isometry_defect =
      (result.c * result.c.adjoint() * result.c - result.c).norm();
  result.involution_defect =
      (result.c * result.c - Matrix::Identity(n_kraus, n_kraus)).norm();
  // Lemma-7 regime: a linearly independent family forces a unitary c.
  result.kraus_linearly_independent =
      rank == n_kraus && svd.singularValues().minCoeff() > tol::kProperty * top;
  if (result.kraus_linearly_independent) {
    result.unitarity_defect = unitarity_defect(result.c);
  }
  return result;
}

// Reverser Kraus operators through the c matrix: g_j = sum_k c_jk W f_k.
inline std::vector<Operator> reverser_kraus_via_c(const KrausChannel& f, const Matrix& c,
                                                  const Operator& w) {
  const Index n_kraus = static_cast<Index>(f.kraus().size());
  require(c.rows() == n_kraus && c.cols() == n_kraus, "c matrix has wrong shape");
  std::vector<Operator> wf;
  wf.reserve(static_cast<size_t>(n_kraus));
  for (const auto& fk : f.kraus()) wf.push_back(unitary_conj_map(w, fk));
  std::vector<Operator> g;
  g.reserve(static_cast<size_t>(n_kraus));
  for (Index j = 0; j < n_kraus; ++j) {
    Matrix acc = Matrix::Zero(w.rows(), w.rows());
    for (Index k = 0; k < n_kraus; ++k) {
      acc += c(j, k) * wf[static_cast<size_t>(k)].mat;
    }
    g.emplace_back(std::move(acc), w.out_space);
  }
  return g;
}

//=============================================================================
// Detailed balance mirrored onto the reverser
//=============================================================================

// Under detailed balance of system A and the reversal condition, G satisfies
// the SQDB condition for the transported conjugation theta~ = w theta w^dag
// and state sigma~ = W Theta sigma.
inline ReversalReport check_corollary3(const ReversalModel& m, double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(), "check_corollary3: missing v/chi_tilde");
  const KrausChannel f = f_channel(m);
  const ReversalReport reversal = check_theorem1(m, tolerance);
  require(reversal.pass, "check_corollary3: model does not satisfy the reversal condition");
  const ReversalReport db = check_sqdb_theta(f, m.sigma, m.theta, tolerance);
  require(db.pass, "check_corollary3: system A does not satisfy SQDB-theta");

  const Conjugation theta_tilde = m.theta.transported(m.w);
  const Operator sigma_tilde = unitary_conj_map(m.w, theta_map(m.theta, m.sigma));
  const KrausChannel g = g_channel(m);
  const ReversalReport mirrored = check_sqdb_theta(g, sigma_tilde, theta_tilde, tolerance);
  return make_report("corollary3", mirrored.residual, tolerance, mirrored.witness);
}

}  // namespace qrev
