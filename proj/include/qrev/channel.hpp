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

#include <algorithm>
#include <utility>
#include <vector>

#include "qrev/antiunitary.hpp"
#include "qrev/core.hpp"
#include "qrev/operator.hpp"
#include "qrev/tensor.hpp"

namespace qrev {

//=============================================================================
// Vectorization (column-stacking, fixed repo-wide)
//=============================================================================

inline Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  require(v.size() == rows * cols, "unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

// Superoperator of X -> A X B under column-stacking: B^T (x) A.
inline Matrix sandwich_superop(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(b.transpose(), a);
}

//=============================================================================
// Kraus maps and channels
//=============================================================================

// A completely positive map rho -> sum_j k_j rho k_j^dag given by its ordered
// Kraus family.  No trace-preservation is implied at this level; adjoints of
// channels land here.
struct KrausMap {
  std::vector<Operator> kraus;

  const SpaceLayout& in_space() const { return kraus.front().in_space; }
  const SpaceLayout& out_space() const { return kraus.front().out_space; }
  Index d_in() const { return kraus.front().cols(); }
  Index d_out() const { return kraus.front().rows(); }

  static KrausMap make(std::vector<Operator> ops) {
    require(!ops.empty(), "Kraus family must be nonempty");
    for (const auto& k : ops) {
      require(k.rows() == ops.front().rows() && k.cols() == ops.front().cols(),
              "Kraus operators must share dimensions");
    }
    return KrausMap{std::move(ops)};
  }
};

inline double completeness_defect(const KrausMap& m) {
  Matrix sum = Matrix::Zero(m.d_in(), m.d_in());
  for (const auto& k : m.kraus) sum += k.mat.adjoint() * k.mat;
  return (sum - Matrix::Identity(m.d_in(), m.d_in())).norm();
}

// A CPTP channel: Kraus completeness sum_j k_j^dag k_j = I is verified at
// construction (tolerance 1e-10).
class KrausChannel {
 public:
  static KrausChannel make(std::vector<Operator> ops, double tolerance = tol::kFrame) {
    KrausMap m = KrausMap::make(std::move(ops));
    const double defect = completeness_defect(m);
    require(defect < tolerance,
            "Kraus family is not trace-preserving: completeness defect " +
                std::to_string(defect));
    return KrausChannel(std::move(m));
  }

  const std::vector<Operator>& kraus() const { return map_.kraus; }
  const KrausMap& as_map() const { return map_; }
  const SpaceLayout& in_space() const { return map_.in_space(); }
  const SpaceLayout& out_space() const { return map_.out_space(); }
  Index d_in() const { return map_.d_in(); }
  Index d_out() const { return map_.d_out(); }

 private:
  explicit KrausChannel(KrausMap m) : map_(std::move(m)) {}
  KrausMap map_;
};

inline Operator apply(const KrausMap& m, const Operator& rho) {
  require(rho.is_square() && rho.rows() == m.d_in(), "apply: dimension mismatch");
  Matrix out = Matrix::Zero(m.d_out(), m.d_out());
  for (const auto& k : m.kraus) out += k.mat * rho.mat * k.mat.adjoint();
  return Operator(std::move(out), m.out_space());
}

inline Operator apply(const KrausChannel& c, const Operator& rho) {
  return apply(c.as_map(), rho);
}

// Channel induced by a unitary u on system*ancilla with the ancilla prepared
// in chi: Kraus operators k_j = <j| u |chi> over the given overcomplete
// system of the ancilla space.
inline KrausChannel channel_from_unitary(const Operator& u, const PureState& chi,
                                         const OvercompleteFrame& frame) {
  require(is_unitary(u.mat), "channel_from_unitary: u is not unitary within 1e-10");
  require(chi.space.num_factors() == 1 && frame.space() == chi.space,
          "channel_from_unitary: chi must live on the frame's space");
  const std::string& label = frame.label();
  require(u.in_space.contains(label), "channel_from_unitary: u does not act on '" + label + "'");
  const Operator ket_chi = detail::partial_ket_raw(chi.vec, label, u.in_space);
  std::vector<Operator> ops;
  ops.reserve(frame.size());
  for (size_t j = 0; j < frame.size(); ++j) {
    const Operator bra_j = detail::partial_bra_raw(frame[j], label, u.out_space);
    ops.emplace_back(bra_j.mat * u.mat * ket_chi.mat, bra_j.out_space, ket_chi.in_space);
  }
  return KrausChannel::make(std::move(ops));
}

// HS adjoint of a Kraus map: X -> sum_j k_j^dag X k_j.  Unital (not trace
// preserving) when the input is a channel.
inline KrausMap hs_adjoint(const KrausMap& m) {
  std::vector<Operator> ops;
  ops.reserve(m.kraus.size());
  for (const auto& k : m.kraus) ops.push_back(adjoint_map(k));
  return KrausMap::make(std::move(ops));
}

inline KrausMap hs_adjoint(const KrausChannel& c) { return hs_adjoint(c.as_map()); }

//=============================================================================
// Superoperator matrices
//=============================================================================

// Dense d_out^2 x d_in^2 matrix representing a linear map on operators under
// the column-stacking convention: mat * vec(rho) = vec(map(rho)).
struct SuperoperatorMatrix {
  Matrix mat;
  Index d_in = 0;
  Index d_out = 0;

  SuperoperatorMatrix() = default;
  SuperoperatorMatrix(Matrix m, Index din, Index dout)
      : mat(std::move(m)), d_in(din), d_out(dout) {
    require(mat.rows() == d_out * d_out && mat.cols() == d_in * d_in,
            "superoperator matrix has wrong shape");
  }

  static SuperoperatorMatrix identity(Index d) {
    return SuperoperatorMatrix(Matrix::Identity(d * d, d * d), d, d);
  }

  Matrix operator()(const Matrix& rho) const {
    require(rho.rows() == d_in && rho.cols() == d_in, "superoperator: dimension mismatch");
    return unvec(mat * vec(rho), d_out, d_out);
  }
};

inline SuperoperatorMatrix to_superoperator(const KrausMap& m) {
  Matrix s = Matrix::Zero(m.d_out() * m.d_out(), m.d_in() * m.d_in());
  for (const auto& k : m.kraus) s += Eigen::kroneckerProduct(k.mat.conjugate(), k.mat);
  return SuperoperatorMatrix(std::move(s), m.d_in(), m.d_out());
}

inline SuperoperatorMatrix to_superoperator(const KrausChannel& c) {
  return to_superoperator(c.as_map());
}

// Assemble a superoperator column by column from any linear map on operators.
template <typename Fn>
SuperoperatorMatrix superoperator_from_function(Index d_in, Index d_out, Fn&& f) {
  Matrix s(d_out * d_out, d_in * d_in);
  for (Index j = 0; j < d_in; ++j) {
    for (Index i = 0; i < d_in; ++i) {
      Matrix unit = Matrix::Zero(d_in, d_in);
      unit(i, j) = 1.0;
      s.col(j * d_in + i) = vec(f(unit));
    }
  }
  return SuperoperatorMatrix(std::move(s), d_in, d_out);
}

inline double map_distance(const SuperoperatorMatrix& a, const SuperoperatorMatrix& b) {
  require(a.d_in == b.d_in && a.d_out == b.d_out, "map_distance: dimension mismatch");
  return (a.mat - b.mat).norm();
}

// HS adjoint at the superoperator level is the conjugate transpose.
inline SuperoperatorMatrix hs_adjoint(const SuperoperatorMatrix& m) {
  return SuperoperatorMatrix(m.mat.adjoint(), m.d_out, m.d_in);
}

// Composition: (a.b)(rho) = a(b(rho)).
inline SuperoperatorMatrix compose(const SuperoperatorMatrix& a,
                                   const SuperoperatorMatrix& b) {
  require(a.d_in == b.d_out, "compose: dimension mismatch");
  return SuperoperatorMatrix(a.mat * b.mat, b.d_in, a.d_out);
}

// Entrywise conjugation of a superoperator in the theta-product basis; this
// realizes the antilinear sandwich X -> theta map(theta X theta) theta, which
// is linear overall.
inline SuperoperatorMatrix theta_sandwich(const SuperoperatorMatrix& m,
                                          const Conjugation& theta_in,
                                          const Conjugation& theta_out) {
  require(theta_in.dim() == m.d_in && theta_out.dim() == m.d_out,
          "theta_sandwich: dimension mismatch");
  const Matrix& bi = theta_in.basis();
  const Matrix& bo = theta_out.basis();
  // X -> B^dag X B as a superoperator, for each side.
  const Matrix t_in = sandwich_superop(bi.adjoint(), bi);
  const Matrix t_out = sandwich_superop(bo.adjoint(), bo);
  const Matrix in_theta_basis = t_out * m.mat * t_in.adjoint();
  return SuperoperatorMatrix(t_out.adjoint() * in_theta_basis.conjugate() * t_in,
                             m.d_in, m.d_out);
}

inline SuperoperatorMatrix theta_sandwich(const SuperoperatorMatrix& m,
                                          const Conjugation& theta) {
  return theta_sandwich(m, theta, theta);
}

// W M W^{-1} at the superoperator level for a unitary w.
inline SuperoperatorMatrix w_sandwich(const SuperoperatorMatrix& m, const Operator& w) {
  require(is_unitary(w.mat), "w_sandwich: w is not unitary");
  require(w.cols() == m.d_in && w.cols() == m.d_out, "w_sandwich: dimension mismatch");
  const Matrix sw = sandwich_superop(w.mat, w.mat.adjoint());
  return SuperoperatorMatrix(sw * m.mat * sw.adjoint(), w.rows(), w.rows());
}

//=============================================================================
// Choi matrix, CPTP verification, Kraus extraction
//=============================================================================

// Unnormalized Choi matrix C = sum_ij E_ij (x) F(E_ij).
inline Matrix choi_matrix(const SuperoperatorMatrix& m) {
  const Index di = m.d_in, dout = m.d_out;
  Matrix c(di * dout, di * dout);
  for (Index i = 0; i < di; ++i) {
    for (Index j = 0; j < di; ++j) {
      for (Index r = 0; r < dout; ++r) {
        for (Index s = 0; s < dout; ++s) {
          c(i * dout + r, j * dout + s) = m.mat(s * dout + r, j * di + i);
        }
      }
    }
  }
  return c;
}

struct CptpReport {
  bool completely_positive = false;
  bool trace_preserving = false;
  double min_choi_eigenvalue = 0.0;
  double tp_defect = 0.0;
  bool ok() const { return completely_positive && trace_preserving; }
};

// Complete positivity via the Choi-matrix PSD check (eigenvalues down to
// -1e-9 allowed) plus the trace-preservation identity on vec(I).
inline CptpReport verify_cptp(const SuperoperatorMatrix& m, double psd_tol = 1e-9,
                              double tp_tol = 1e-9) {
  CptpReport rep;
  const Matrix c = choi_matrix(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es((c + c.adjoint()) / 2.0);
  rep.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  rep.completely_positive =
      hermiticity_defect(c) < psd_tol && rep.min_choi_eigenvalue > -psd_tol;
  const Vector vi = vec(Matrix::Identity(m.d_out, m.d_out));
  rep.tp_defect = (m.mat.adjoint() * vi - vec(Matrix::Identity(m.d_in, m.d_in))).norm();
  rep.trace_preserving = rep.tp_defect < tp_tol;
  return rep;
}

// Kraus family of a CP superoperator, from the eigendecomposition of its Choi
// matrix with the given eigenvalue cutoff.
inline std::vector<Matrix> kraus_from_superoperator(const SuperoperatorMatrix& m,
                                                    double cutoff = 1e-10) {
  const Matrix c = choi_matrix(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es((c + c.adjoint()) / 2.0);
  std::vector<Matrix> ops;
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= cutoff * std::max(top, 1.0)) continue;
    Matrix kr(m.d_out, m.d_in);
    for (Index i = 0; i < m.d_in; ++i) {
      for (Index r = 0; r < m.d_out; ++r) {
        kr(r, i) = std::sqrt(lambda) * es.eigenvectors()(i * m.d_out + r, k);
      }
    }
    ops.push_back(std::move(kr));
  }
  return ops;
}

//=============================================================================
// Connes adjoint and the Petz recovery map
//=============================================================================

// E_rho X = rho^{1/2} X rho^{1/2} as a superoperator.
inline SuperoperatorMatrix state_sandwich_superop(const Operator& rho) {
  require_full_rank_density(rho);
  const Matrix r = pd_power(rho.mat, 0.5);
  return SuperoperatorMatrix(sandwich_superop(r, r), rho.rows(), rho.rows());
}

inline SuperoperatorMatrix state_sandwich_superop_inverse(const Operator& rho) {
  require_full_rank_density(rho);
  const Matrix r = pd_power(rho.mat, -0.5);
  return SuperoperatorMatrix(sandwich_superop(r, r), rho.rows(), rho.rows());
}

// Adjoint with respect to the Connes (KMS) inner products <.,.>_rho on the
// input side and <.,.>_tau on the output side:
//   M^Con = E_tau^{-1} M^HS E_rho.
inline SuperoperatorMatrix connes_adjoint(const SuperoperatorMatrix& m,
                                          const Operator& rho, const Operator& tau) {
  require(rho.rows() == m.d_out && tau.rows() == m.d_in,
          "connes_adjoint: reference states do not match the map");
  return compose(state_sandwich_superop_inverse(tau),
                 compose(hs_adjoint(m), state_sandwich_superop(rho)));
}

// Connes inner product <y, x>_rho = tr(y^dag rho^{1/2} x rho^{1/2}).
inline Complex connes_inner(const Operator& y, const Operator& x, const Operator& rho) {
  require(y.rows() == x.rows() && x.rows() == rho.rows(), "connes_inner: dimension mismatch");
  const Matrix r = pd_power(rho.mat, 0.5);
  return (y.mat.adjoint() * r * x.mat * r).trace();
}

// Petz recovery map of a channel with respect to a full-rank reference state:
//   F^Petz = E_rho F^HS E_{F rho}^{-1}.
// Returned as a superoperator; it is CPTP and recovers rho from F(rho).
inline SuperoperatorMatrix petz_map(const KrausChannel& c, const Operator& rho) {
  require(rho.rows() == c.d_in(), "petz_map: reference state dimension mismatch");
  require_full_rank_density(rho);
  const Operator image = apply(c, rho);
  require_full_rank_density(image);  // throws if F(rho) is singular
  const SuperoperatorMatrix f = to_superoperator(c);
  return compose(state_sandwich_superop(rho),
                 compose(hs_adjoint(f), state_sandwich_superop_inverse(image)));
}

//=============================================================================
// Steady states
//=============================================================================

struct SteadyStateResult {
  Operator sigma;
  bool full_rank = false;
  double residual = 0.0;
};

// Fixed point of a CPTP map, from the eigenvalue-1 subspace of its
// superoperator.  The subspace is taken as the numerical null space of
// (M - I) (singular values below the tolerance, ordered by residual with a
// lexicographic tie-break).  For a degenerate subspace the result is the
// Hermitian part of the fixed space projected onto, and renormalized from,
// the maximally mixed state -- the maximal-rank member of that construction.
inline SteadyStateResult steady_state(const KrausChannel& c, double tolerance = tol::kCheck,
                                      double rank_tol = tol::kRank) {
  require(c.d_in() == c.d_out(), "steady_state: channel must be an endomap");
  const Index d = c.d_in();
  const SuperoperatorMatrix m = to_superoperator(c);
  const Matrix shifted = m.mat - Matrix::Identity(d * d, d * d);
  Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);

  // Null vectors of (M - I), i.e. fixed points; JacobiSVD sorts singular
  // values descending, so walk from the back (smallest residual first).
  std::vector<Vector> fixed;
  for (Index k = svd.singularValues().size(); k-- > 0;) {
    if (svd.singularValues()(k) < tolerance) {
      fixed.push_back(svd.matrixV().col(k));
    } else {
      break;
    }
  }
  require(!fixed.empty(),
          "no fixed point within tolerance: eigenvalue 1 missing (broken channel?)");

  // Real-linear Gram-Schmidt over the Hermitian parts; the fixed space of a
  // CPTP map is closed under the adjoint.
  std::vector<Matrix> herm_basis;
  auto add_candidate = [&](const Matrix& h) {
    Matrix r = h;
    for (const auto& y : herm_basis) {
      r -= y * std::real((y.adjoint() * r).trace());
    }
    if (r.norm() > 1e-8) herm_basis.push_back(r / r.norm());
  };
  for (const auto& v : fixed) {
    const Matrix x = unvec(v, d, d);
    add_candidate((x + x.adjoint()) / 2.0);
    add_candidate((x - x.adjoint()) / (2.0 * kI));
  }
  require(!herm_basis.empty(), "fixed subspace has no Hermitian part (broken channel?)");

  // Project the maximally mixed state onto the Hermitian fixed space.
  Matrix sigma = Matrix::Zero(d, d);
  for (const auto& y : herm_basis) {
    sigma += y * std::real(y.trace()) / static_cast<double>(d);
  }
  const double tr = std::real(sigma.trace());
  require(std::abs(tr) > 1e-12, "fixed subspace contains no trace-carrying element");
  sigma /= tr;
  sigma = (sigma + sigma.adjoint()).eval() / 2.0;

  // Clip tiny negative eigenvalues and renormalize.
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  require(es.eigenvalues().minCoeff() > -tolerance,
          "projected fixed point is not positive semidefinite");
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  clipped /= clipped.sum();
  sigma = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();

  SteadyStateResult result;
  result.sigma = Operator(sigma, c.in_space());
  result.residual = (apply(c, result.sigma).mat - sigma).norm();
  require(result.residual < tolerance, "steady-state candidate fails the fixed-point equation");
  result.full_rank = clipped.minCoeff() > rank_tol * clipped.maxCoeff();
  return result;
}

}  // namespace qrev
