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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrev/antiunitary.hpp"
#include "qrev/channel.hpp"
#include "qrev/core.hpp"
#include "qrev/operator.hpp"
#include "qrev/tensor.hpp"

namespace qrev {

inline const std::string kLabelA = "A";
inline const std::string kLabelB = "B";
inline const std::string kLabelE = "E";

//=============================================================================
// The model
//=============================================================================

// A full problem instance: system A interacts with a field mode E through u,
// the reverser B interacts through v, and the pair starts in the canonical
// purification of the steady state sigma determined by (w, theta).
struct ReversalModel {
  Index d = 0;    // d_A = d_B
  Index d_E = 0;
  Operator u;                          // unitary on A*E
  PureState chi;                       // field input state on E
  Operator sigma;                      // full-rank density on A, steady under F
  Operator w;                          // unitary A -> B
  Conjugation theta;                   // conjugation on A
  std::optional<Operator> v;           // unitary on B*E
  std::optional<PureState> chi_tilde;  // field output state on E
  std::optional<Operator> u_E;         // intermediate field unitary on E

  SpaceLayout space_A() const { return SpaceLayout::single(kLabelA, d); }
  SpaceLayout space_B() const { return SpaceLayout::single(kLabelB, d); }
  SpaceLayout space_E() const { return SpaceLayout::single(kLabelE, d_E); }
  SpaceLayout space_AB() const { return space_A().joined(space_B()); }
  SpaceLayout space_ABE() const { return space_AB().joined(space_E()); }
  SpaceLayout space_BE() const { return space_B().joined(space_E()); }
};

struct ReversalReport {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string witness;
};

inline ReversalReport make_report(std::string name, double residual, double tolerance,
                                  std::string witness = {}) {
  ReversalReport r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = residual < tolerance;
  r.witness = std::move(witness);
  return r;
}

//=============================================================================
// Channels of the model
//=============================================================================

inline KrausChannel f_channel(const ReversalModel& m) {
  return channel_from_unitary(m.u, m.chi, OvercompleteFrame::standard(m.space_E()));
}

// G is built from (v^dag, chi_tilde): its Kraus operators are
// g_j = <j|_E v^dag |chi_tilde>_E.
inline KrausChannel g_channel(const ReversalModel& m) {
  require(m.v.has_value() && m.chi_tilde.has_value(),
          "g_channel: model has no reverser (v, chi_tilde)");
  return channel_from_unitary(adjoint_map(*m.v), *m.chi_tilde,
                              OvercompleteFrame::standard(m.space_E()));
}

//=============================================================================
// Model validation and the canonical purification
//=============================================================================

inline void validate(const ReversalModel& m) {
  require(m.d >= 1 && m.d_E >= 1, "model dimensions must be positive");
  require(m.u.in_space == m.space_A().joined(m.space_E()), "u must act on A*E");
  require(is_unitary(m.u.mat), "u is not unitary within 1e-10");
  require(m.chi.space == m.space_E(), "chi must live on E");
  require(m.sigma.in_space == m.space_A(), "sigma must live on A");
  require_full_rank_density(m.sigma);
  require(m.w.in_space == m.space_A() && m.w.out_space == m.space_B(),
          "w must map A to B");
  require(is_unitary(m.w.mat), "w is not unitary within 1e-10");
  require(m.theta.dim() == m.d, "theta must act on A");
  if (m.v.has_value()) {
    require(m.v->in_space == m.space_BE(), "v must act on B*E");
    require(is_unitary(m.v->mat), "v is not unitary within 1e-10");
  }
  if (m.chi_tilde.has_value()) {
    require(m.chi_tilde->space == m.space_E(), "chi_tilde must live on E");
  }
  if (m.u_E.has_value()) {
    require(m.u_E->in_space == m.space_E(), "u_E must act on E");
    require(is_unitary(m.u_E->mat), "u_E is not unitary within 1e-10");
  }
  const double steady_residual =
      frobenius_distance(apply(f_channel(m), m.sigma), m.sigma);
  require(steady_residual < tol::kCheck,
          "sigma is not steady under F: residual " + std::to_string(steady_residual));
}

// |psi>_AB = sum_n sqrt(p_n) |n>_A (x) w theta |n>_A over the spectral
// decomposition of sigma.  The vector is independent of the eigenbasis choice
// within degenerate blocks of sigma.
inline PureState purify_steady_state(const ReversalModel& m) {
  require_full_rank_density(m.sigma);
  Eigen::SelfAdjointEigenSolver<Matrix> es((m.sigma.mat + m.sigma.mat.adjoint()) / 2.0);
  Vector psi = Vector::Zero(m.d * m.d);
  for (Index n = 0; n < m.d; ++n) {
    const Vector a = es.eigenvectors().col(n);
    const Vector b = m.w.mat * m.theta.apply(a);
    psi += std::sqrt(es.eigenvalues()(n)) *
           Eigen::kroneckerProduct(a, b).eval();
  }
  return PureState(std::move(psi), m.space_AB());
}

//=============================================================================
// Reverser construction
//=============================================================================

namespace detail {

// Reshape a state on `layout` into a matrix (complement x labeled factor).
inline Matrix state_matrix(const PureState& psi, const std::string& cut) {
  const SpaceLayout& layout = psi.space;
  auto pos = layout.find(cut);
  require(pos.has_value(), "state_matrix: unknown label '" + cut + "'");
  const SpaceLayout rest = layout.without(cut);
  const Index d_cut = layout.factor(*pos).dim;
  Matrix m(rest.total_dim(), d_cut);
  std::vector<Index> full_idx(static_cast<size_t>(layout.num_factors()));
  for (Index r = 0; r < rest.total_dim(); ++r) {
    const auto rest_idx = rest.unravel(r);
    for (Index e = 0; e < d_cut; ++e) {
      size_t ri = 0;
      for (Index f = 0; f < layout.num_factors(); ++f) {
        if (f == *pos) {
          full_idx[static_cast<size_t>(f)] = e;
        } else {
          full_idx[static_cast<size_t>(f)] = rest_idx[ri++];
        }
      }
      m(r, e) = psi.vec(layout.ravel(full_idx));
    }
  }
  return m;
}

// Extend a set of orthonormal columns to a full orthonormal basis, sweeping
// the standard basis and keeping directions with norm above the cutoff.
inline Matrix complete_orthonormal(const Matrix& cols) {
  const Index d = cols.rows();
  Matrix basis(d, d);
  Index have = cols.cols();
  basis.leftCols(have) = cols;
  for (Index k = 0; k < d && have < d; ++k) {
    Vector cand = Vector::Zero(d);
    cand(k) = 1.0;
    cand -= basis.leftCols(have) * (basis.leftCols(have).adjoint() * cand);
    const double n = cand.norm();
    if (n > 1e-7) {
      basis.col(have++) = cand / n;
    }
  }
  require(have == d, "orthonormal completion failed");
  return basis;
}

}  // namespace detail

// The purifications |phi_1> = (U (x) I_B)|psi>|chi> and |psi> share the
// system-A marginal sigma, so they are related by an isometry
// R : H_B -> H_B*H_E with |phi_1> = (I_A (x) R)|psi>.  Solved through the
// Schmidt data: reshaping across the A : (BE) cut gives Phi_1 = Psi R^T with
// Psi invertible for full-rank sigma.
inline Operator solve_purification_isometry(const ReversalModel& m, const PureState& psi,
                                            const PureState& phi1) {
  const Matrix psi_mat = detail::state_matrix(psi, kLabelA).transpose();   // d x d
  const Matrix phi_mat = detail::state_matrix(phi1, kLabelA).transpose();  // d x (d*d_E)
  // Pseudo-inverse of Psi with the repo-wide SVD cutoff; sigma full-rank
  // keeps all singular values sqrt(p_n) above it.
  Eigen::JacobiSVD<Matrix> svd(psi_mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double top = svd.singularValues()(0);
  require(svd.singularValues().minCoeff() > tol::kSvdCutoff * top,
          "sigma is singular: purification isometry is ill-defined");
  Vector inv_s(svd.singularValues().size());
  for (Index i = 0; i < inv_s.size(); ++i) inv_s(i) = 1.0 / svd.singularValues()(i);
  const Matrix psi_pinv =
      svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
  Matrix r = (psi_pinv * phi_mat).transpose();  // (d*d_E) x d
  const double isometry_defect =
      (r.adjoint() * r - Matrix::Identity(m.d, m.d)).norm();
  require(isometry_defect < tol::kProperty,
          "phi_1 and psi are not purifications of the same state");
  return Operator(std::move(r), m.space_BE(), m.space_B());
}

// Builds a reverser unitary V on B*E satisfying the special reversal
// condition with the requested field output state: V maps R|n~>_B to
// |n~>_B (x) |chi_tilde> and is completed orthonormally on both sides.  The
// completion freedom is genuine; this picks one deterministic representative.
inline Operator build_reverser_unitary(const ReversalModel& m, const PureState& chi_tilde) {
  require(chi_tilde.space == m.space_E(), "chi_tilde must live on E");
  const PureState psi = purify_steady_state(m);
  const SpaceLayout abe = m.space_ABE();
  const Operator u_full = embed(m.u, abe);
  const PureState phi1 =
      PureState(u_full.mat * tensor_product(psi, m.chi).vec, abe);
  const Operator r = solve_purification_isometry(m, psi, phi1);

  // Images of the B basis transported by theta and w (the |n~> basis).
  Eigen::SelfAdjointEigenSolver<Matrix> es((m.sigma.mat + m.sigma.mat.adjoint()) / 2.0);
  Matrix sources(m.d * m.d_E, m.d);
  Matrix targets(m.d * m.d_E, m.d);
  const Operator ket_chi_tilde = partial_ket(chi_tilde, m.space_BE());
  for (Index n = 0; n < m.d; ++n) {
    const Vector n_tilde = m.w.mat * m.theta.apply(es.eigenvectors().col(n));
    sources.col(n) = r.mat * n_tilde;
    targets.col(n) = ket_chi_tilde.mat * n_tilde;
  }
  const Matrix source_basis = detail::complete_orthonormal(sources);
  const Matrix target_basis = detail::complete_orthonormal(targets);
  Operator v(target_basis * source_basis.adjoint(), m.space_BE());
  require(is_unitary(v.mat), "reverser construction produced a non-unitary V");

  // Self-check against the defining equation, phase-blind.
  const Operator v_full = embed(v, abe);
  const Vector out = v_full.mat * phi1.vec;
  const Vector want = tensor_product(psi, chi_tilde).vec;
  const double infidelity = 1.0 - std::norm(want.dot(out));
  require(infidelity < tol::kProperty, "reverser construction failed its self-check");
  return v;
}

// Default field output state: chi_tilde = chi.
inline Operator build_reverser_unitary(const ReversalModel& m) {
  return build_reverser_unitary(m, m.chi);
}

// Kraus operators of the reverser: g_j = W Q f_j.
inline std::vector<Operator> reverser_kraus(const ReversalModel& m, const KrausChannel& f) {
  std::vector<Operator> g;
  g.reserve(f.kraus().size());
  for (const auto& fj : f.kraus()) {
    g.push_back(unitary_conj_map(m.w, q_map(m.sigma, m.theta, fj)));
  }
  const double defect = completeness_defect(KrausMap::make(g));
  require(defect < tol::kFrame, "reverser Kraus family is not complete");
  return g;
}

// Alternative reverser construction through the Kraus condition: V is any
// unitary whose Kraus data <j|V^dag|chi_tilde> equal W Q f_j.  V^dag is
// determined on the subspace H_B (x) chi_tilde and completed orthonormally.
inline Operator build_reverser_from_kraus(const ReversalModel& m, const PureState& chi_tilde) {
  require(chi_tilde.space == m.space_E(), "chi_tilde must live on E");
  const KrausChannel f = f_channel(m);
  const std::vector<Operator> g = reverser_kraus(m, f);

  // V^dag (xi (x) chi_tilde) = sum_j (g_j xi) (x) |j>.
  Matrix t = Matrix::Zero(m.d * m.d_E, m.d);
  for (Index j = 0; j < m.d_E; ++j) {
    Vector e_j = Vector::Zero(m.d_E);
    e_j(j) = 1.0;
    t += Eigen::kroneckerProduct(g[static_cast<size_t>(j)].mat, e_j);
  }
  const Matrix k = partial_ket(chi_tilde, m.space_BE()).mat;
  const Matrix t_basis = detail::complete_orthonormal(t);
  const Matrix k_basis = detail::complete_orthonormal(k);
  Operator v((t_basis * k_basis.adjoint()).adjoint(), m.space_BE());
  require(is_unitary(v.mat), "Kraus-route reverser construction failed");
  return v;
}

//=============================================================================
// Checkers -- each verifies one statement of the theory by an independent
// numerical route.
//=============================================================================

// (F (x) I_B) |psi><psi| = (I_A (x) G) |psi><psi|.
inline ReversalReport check_lemma_fg(const ReversalModel& m, double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(), "check_lemma_fg: missing v/chi_tilde");
  const PureState psi = purify_steady_state(m);
  const Operator rho_psi = projector(psi);
  const Operator id_b = Operator::identity(m.space_B());
  const Operator id_a = Operator::identity(m.space_A());

  const KrausChannel f = f_channel(m);
  const KrausChannel g = g_channel(m);
  Matrix lhs = Matrix::Zero(m.d * m.d, m.d * m.d);
  for (const auto& fj : f.kraus()) {
    const Matrix k = tensor_product(fj, id_b).mat;
    lhs += k * rho_psi.mat * k.adjoint();
  }
  Matrix rhs = Matrix::Zero(m.d * m.d, m.d * m.d);
  for (const auto& gj : g.kraus()) {
    const Matrix k = tensor_product(id_a, gj).mat;
    rhs += k * rho_psi.mat * k.adjoint();
  }
  return make_report("lemma_fg", (lhs - rhs).norm(), tolerance);
}

// G = W Theta F^Petz Theta W^{-1} as superoperators.
inline ReversalReport check_theorem1(const ReversalModel& m, double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(), "check_theorem1: missing v/chi_tilde");
  const SuperoperatorMatrix petz = petz_map(f_channel(m), m.sigma);
  const SuperoperatorMatrix transported =
      w_sandwich(theta_sandwich(petz, m.theta), m.w);
  const SuperoperatorMatrix g = to_superoperator(g_channel(m));
  return make_report("theorem1", map_distance(g, transported), tolerance);
}

// G sigma~ = sigma~ with sigma~ = W Theta sigma.
inline ReversalReport check_corollary_steady(const ReversalModel& m,
                                             double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(),
          "check_corollary_steady: missing v/chi_tilde");
  const Operator sigma_tilde = unitary_conj_map(m.w, theta_map(m.theta, m.sigma));
  const double residual =
      frobenius_distance(apply(g_channel(m), sigma_tilde), sigma_tilde);
  return make_report("corollary_steady", residual, tolerance);
}

// Direct statevector simulation of the special reversal condition:
// (I_A (x) V)(U (x) I_B)|psi>|chi> = |psi>|chi_tilde>.
inline ReversalReport check_special_reversal(const ReversalModel& m,
                                             double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(),
          "check_special_reversal: missing v/chi_tilde");
  const PureState psi = purify_steady_state(m);
  const SpaceLayout abe = m.space_ABE();
  const Vector in = tensor_product(psi, m.chi).vec;
  const Vector evolved = embed(*m.v, abe).mat * (embed(m.u, abe).mat * in);
  const Vector want = tensor_product(psi, *m.chi_tilde).vec;
  return make_report("special_reversal", (evolved - want).norm(), tolerance);
}

// Kraus-level condition g_j = W Q f_j, operator by operator over the
// standard frame.
inline ReversalReport check_theorem3(const ReversalModel& m, double tolerance = tol::kCheck) {
  require(m.v.has_value() && m.chi_tilde.has_value(), "check_theorem3: missing v/chi_tilde");
  const KrausChannel f = f_channel(m);
  const KrausChannel g = g_channel(m);
  const std::vector<Operator> wqf = reverser_kraus(m, f);
  double worst = 0.0;
  size_t worst_j = 0;
  for (size_t j = 0; j < wqf.size(); ++j) {
    const double dist = frobenius_distance(g.kraus()[j], wqf[j]);
    if (dist > worst) {
      worst = dist;
      worst_j = j;
    }
  }
  return make_report("theorem3", worst, tolerance, "worst Kraus index " + std::to_string(worst_j));
}

//=============================================================================
// Intermediate unitary extraction
//=============================================================================

// Given two purifications with equal marginals across the (..):E cut, find a
// unitary u_E with (I (x) u_E)|phi_1> = |phi_2>.  Determined on the Schmidt
// support of phi_1 and completed orthonormally elsewhere.
inline Operator extract_intermediate_unitary(const PureState& phi1, const PureState& phi2,
                                             const std::string& field_label = kLabelE,
                                             double tolerance = tol::kCheck) {
  require(phi1.space == phi2.space, "purifications must share a layout");
  const Matrix m1 = detail::state_matrix(phi1, field_label);
  const Matrix m2 = detail::state_matrix(phi2, field_label);
  const double marginal_mismatch = (m1 * m1.adjoint() - m2 * m2.adjoint()).norm();
  require(marginal_mismatch < tolerance,
          "states are not purifications of the same operator (marginal mismatch " +
              std::to_string(marginal_mismatch) + ")");

  Eigen::JacobiSVD<Matrix> svd(m1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index d_E = m1.cols();
  const double top = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  Index rank = 0;
  while (rank < svd.singularValues().size() &&
         svd.singularValues()(rank) > tol::kSvdCutoff * top) {
    ++rank;
  }
  require(rank > 0, "zero state cannot be matched");

  // phi_2 = A_1 S C^dag with C orthonormal when the marginals agree; the
  // intermediate unitary is B_1 C^dag on the support.
  const Matrix a1 = svd.matrixU().leftCols(rank);
  const Matrix b1 = svd.matrixV().leftCols(rank);
  Vector inv_s(rank);
  for (Index i = 0; i < rank; ++i) inv_s(i) = 1.0 / svd.singularValues()(i);
  const Matrix c = m2.adjoint() * a1 * inv_s.asDiagonal();

  const Matrix b_full = detail::complete_orthonormal(b1);
  const Matrix c_full = detail::complete_orthonormal(c);
  Matrix x = Matrix::Zero(d_E, d_E);
  x = b_full * c_full.adjoint();
  // x solves m1 * x = m2; the unitary acts on kets as its transpose.
  Operator u_E(x.transpose(),
               SpaceLayout::single(field_label, d_E));
  require(is_unitary(u_E.mat), "intermediate unitary extraction failed");
  require((m1 * x - m2).norm() < tolerance,
          "intermediate unitary does not relate the purifications");
  return u_E;
}

}  // namespace qrev
