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
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qrev/antiunitary.hpp"
#include "qrev/channel.hpp"
#include "qrev/core.hpp"
#include "qrev/reversal.hpp"
#include "qrev/tensor.hpp"

namespace qrev {

//=============================================================================
// Random unitary channel family
//=============================================================================

// System A couples to the field through U = exp[-i (H (x) I + X (x) Y) t]
// with Y diagonal in the standard field basis.  The induced channel is a
// random unitary channel with the maximally mixed steady state.
struct RandomUnitarySpec {
  Index d = 0;                  // system dimension
  Matrix h;                     // system Hamiltonian (hbar = 1)
  Matrix x;                     // system side of the coupling
  std::vector<double> lambda;   // eigenvalues of the field side Y
  Vector chi_amps;              // field amplitudes in the Y eigenbasis
  double t = 0.0;
  double c_phase = 0.0;

  Index d_E() const { return static_cast<Index>(lambda.size()); }

  static RandomUnitarySpec make(Index d, Matrix h, Matrix x, std::vector<double> lambda,
                                Vector chi_amps, double t, double c_phase = 0.0) {
    require(d >= 1, "system dimension must be positive");
    require(h.rows() == d && h.cols() == d && x.rows() == d && x.cols() == d,
            "H and X must be d x d");
    require(hermiticity_defect(h) < tol::kStrict * (1.0 + h.norm()), "H must be Hermitian");
    require(hermiticity_defect(x) < tol::kStrict * (1.0 + x.norm()), "X must be Hermitian");
    require(!lambda.empty(), "field spectrum must be nonempty");
    require(chi_amps.size() == static_cast<Index>(lambda.size()),
            "chi amplitudes must match the field dimension");
    require(std::abs(chi_amps.norm() - 1.0) < tol::kStrict, "chi must be normalized");
    return RandomUnitarySpec{d, std::move(h), std::move(x), std::move(lambda),
                             std::move(chi_amps), t, c_phase};
  }
};

inline Matrix field_coupling_diagonal(const RandomUnitarySpec& spec) {
  Vector y(spec.d_E());
  for (Index j = 0; j < spec.d_E(); ++j) y(j) = spec.lambda[static_cast<size_t>(j)];
  return y.asDiagonal();
}

// Builds the full model: U from the spec, sigma = I/d, the explicit reverser
// V = e^{-ict} sum_j (W Theta u_j) (x) |j><j|, and chi~ = e^{-ict} chi.
inline ReversalModel build_random_unitary_model(const RandomUnitarySpec& spec,
                                                const Operator& w,
                                                const Conjugation& theta) {
  ReversalModel m;
  m.d = spec.d;
  m.d_E = spec.d_E();
  const SpaceLayout space_a = m.space_A();
  const SpaceLayout space_e = m.space_E();
  const SpaceLayout space_ae = space_a.joined(space_e);

  const Matrix y = field_coupling_diagonal(spec);
  const Matrix generator =
      -kI * spec.t *
      (Eigen::kroneckerProduct(spec.h, Matrix::Identity(m.d_E, m.d_E)).eval() +
       Eigen::kroneckerProduct(spec.x, y).eval());
  m.u = Operator(expm_skew(generator), space_ae);
  m.chi = PureState(spec.chi_amps, space_e);
  m.sigma = Operator(Matrix::Identity(m.d, m.d) / static_cast<double>(m.d), space_a);
  m.w = w;
  m.theta = theta;

  const Complex phase = std::exp(-kI * spec.c_phase * spec.t);
  Matrix v = Matrix::Zero(m.d * m.d_E, m.d * m.d_E);
  for (Index j = 0; j < m.d_E; ++j) {
    const Matrix u_j =
        expm_skew(-kI * spec.t * (spec.h + spec.lambda[static_cast<size_t>(j)] * spec.x));
    const Matrix v_j =
        unitary_conj_map(w, theta_map(theta, Operator(u_j, space_a))).mat;
    Matrix e_jj = Matrix::Zero(m.d_E, m.d_E);
    e_jj(j, j) = 1.0;
    v += phase * Eigen::kroneckerProduct(v_j, e_jj);
  }
  m.v = Operator(std::move(v), m.space_BE());
  m.chi_tilde = PureState((phase * spec.chi_amps).eval(), space_e);
  validate(m);
  return m;
}

// The one-parameter reverser family V = exp[-i (H~ (x) I + X~ (x) Y) tau]
// with H~ = r(-W Theta H + c), X~ = -r W Theta X, and tau = t / r.
inline Operator build_reverser_variant(const RandomUnitarySpec& spec, double r,
                                       const Operator& w, const Conjugation& theta) {
  require(r != 0.0, "r must be nonzero");
  const SpaceLayout space_a = SpaceLayout::single(kLabelA, spec.d);
  const double tau = spec.t / r;
  const Matrix h_tilde =
      r * (-unitary_conj_map(w, theta_map(theta, Operator(spec.h, space_a))).mat +
           spec.c_phase * Matrix::Identity(spec.d, spec.d));
  const Matrix x_tilde =
      -r * unitary_conj_map(w, theta_map(theta, Operator(spec.x, space_a))).mat;
  const Matrix y = field_coupling_diagonal(spec);
  const Matrix generator =
      -kI * tau *
      (Eigen::kroneckerProduct(h_tilde, Matrix::Identity(spec.d_E(), spec.d_E())).eval() +
       Eigen::kroneckerProduct(x_tilde, y).eval());
  const SpaceLayout space_be =
      SpaceLayout::single(kLabelB, spec.d).joined(SpaceLayout::single(kLabelE, spec.d_E()));
  return Operator(expm_skew(generator), space_be);
}

//=============================================================================
// Collision model and its GKSL limit
//=============================================================================

// One collision of duration dt between the system and a fresh field mode of
// J truncated bosonic spatial modes.
struct CollisionSpec {
  Index d = 0;                   // system dimension
  Matrix h;                      // system Hamiltonian
  std::vector<Matrix> jump_ops;  // L_j, carrying sqrt(rate) units
  double dt = 0.0;
  Index fock_cutoff = 1;         // excitation cutoff per spatial mode
  double c_phase = 0.0;

  Index num_modes() const { return static_cast<Index>(jump_ops.size()); }
  Index field_dim() const {
    Index dim = 1;
    for (Index j = 0; j < num_modes(); ++j) dim *= (fock_cutoff + 1);
    return dim;
  }

  static CollisionSpec make(Index d, Matrix h, std::vector<Matrix> jump_ops, double dt,
                            Index fock_cutoff = 1, double c_phase = 0.0) {
    require(d >= 1, "system dimension must be positive");
    require(h.rows() == d && h.cols() == d, "H must be d x d");
    require(hermiticity_defect(h) < tol::kStrict * (1.0 + h.norm()), "H must be Hermitian");
    require(!jump_ops.empty(), "at least one jump operator required");
    for (const auto& l : jump_ops) {
      require(l.rows() == d && l.cols() == d, "jump operators must be d x d");
    }
    require(dt > 0.0, "dt must be positive");
    require(fock_cutoff >= 1, "Fock cutoff too small to represent a^dag on the vacuum");
    return CollisionSpec{d, std::move(h), std::move(jump_ops), dt, fock_cutoff, c_phase};
  }
};

namespace detail {

// Truncated annihilation operator on one bosonic mode.
inline Matrix truncated_annihilator(Index levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (Index n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Annihilator of spatial mode j (1-based) embedded in the J-mode field.
inline Matrix mode_annihilator(const CollisionSpec& spec, Index j) {
  const Index levels = spec.fock_cutoff + 1;
  Matrix op = Matrix::Identity(1, 1);
  for (Index k = 1; k <= spec.num_modes(); ++k) {
    const Matrix factor =
        (k == j) ? truncated_annihilator(levels) : Matrix::Identity(levels, levels);
    op = Eigen::kroneckerProduct(op, factor).eval();
  }
  return op;
}

}  // namespace detail

struct CollisionUnitary {
  Operator u;             // exact unitary on system * field
  KrausChannel channel;   // Kraus family over the product Fock basis
  Index vacuum_index = 0;
  std::vector<Index> excitation_indices;  // flat index of a_j^dag |vac>, j = 1..J
  SpaceLayout field_space;
};

// Exact unitary exp[dt (-iH) (x) I + sqrt(dt) sum_j (L_j (x) a_j^dag -
// L_j^dag (x) a_j)] together with its Kraus family.  The generator is
// anti-Hermitian, so the collision is exactly unitary at every dt; the
// expansion f_0 = I + G dt, f_j = L_j sqrt(dt) holds to the quoted orders.
inline CollisionUnitary build_collision_unitary(const CollisionSpec& spec) {
  const Index d_field = spec.field_dim();
  const SpaceLayout field = SpaceLayout::single(kLabelE, d_field);
  const SpaceLayout system = SpaceLayout::single(kLabelA, spec.d);
  const Matrix id_field = Matrix::Identity(d_field, d_field);

  Matrix generator =
      spec.dt * Eigen::kroneckerProduct((-kI * spec.h).eval(), id_field).eval();
  const double root_dt = std::sqrt(spec.dt);
  for (Index j = 1; j <= spec.num_modes(); ++j) {
    const Matrix a = detail::mode_annihilator(spec, j);
    const Matrix& l = spec.jump_ops[static_cast<size_t>(j - 1)];
    generator += root_dt * (Eigen::kroneckerProduct(l, a.adjoint().eval()).eval() -
                            Eigen::kroneckerProduct(l.adjoint().eval(), a).eval());
  }

  Operator u(expm_skew(generator), system.joined(field));
  const Index levels = spec.fock_cutoff + 1;
  std::vector<Index> excitations;
  Index stride = 1;
  for (Index j = spec.num_modes(); j >= 1; --j) {
    excitations.insert(excitations.begin(), stride);
    stride *= levels;
  }
  const PureState vacuum = PureState::basis_state(field, 0);
  KrausChannel channel =
      channel_from_unitary(u, vacuum, OvercompleteFrame::standard(field));
  return CollisionUnitary{std::move(u), std::move(channel), 0, std::move(excitations),
                          field};
}

// GKSL generator action L rho = G rho + rho G^dag + sum_j L_j rho L_j^dag
// with G = -iH - (1/2) sum_j L_j^dag L_j.
inline Matrix gksl_drift(const CollisionSpec& spec) {
  Matrix g = -kI * spec.h;
  for (const auto& l : spec.jump_ops) g -= 0.5 * (l.adjoint() * l);
  return g;
}

inline Operator gksl_apply(const CollisionSpec& spec, const Operator& rho) {
  require(rho.is_square() && rho.rows() == spec.d, "gksl_apply: dimension mismatch");
  const Matrix g = gksl_drift(spec);
  Matrix out = g * rho.mat + rho.mat * g.adjoint();
  for (const auto& l : spec.jump_ops) out += l * rho.mat * l.adjoint();
  return Operator(std::move(out), rho.out_space);
}

inline SuperoperatorMatrix gksl_superoperator(const CollisionSpec& spec) {
  const Matrix g = gksl_drift(spec);
  const Matrix id = Matrix::Identity(spec.d, spec.d);
  Matrix m = sandwich_superop(g, id) + sandwich_superop(id, g.adjoint());
  for (const auto& l : spec.jump_ops) m += sandwich_superop(l, l.adjoint());
  return SuperoperatorMatrix(std::move(m), spec.d, spec.d);
}

// Semigroup map exp(L t) as a superoperator.
inline SuperoperatorMatrix gksl_semigroup(const CollisionSpec& spec, double t) {
  const SuperoperatorMatrix l = gksl_superoperator(spec);
  return SuperoperatorMatrix((l.mat * t).exp(), spec.d, spec.d);
}

struct GkslReverserOps {
  Matrix h_tilde;
  std::vector<Matrix> jump_ops_tilde;
};

// Reverser operators of the continuous-time limit:
//   H~ = (i/2)(J W Q G - W Q G) + c,   L~_j = -W Q L_j.
// sigma must be steady for the semigroup.
inline GkslReverserOps gksl_reverser_ops(const CollisionSpec& spec, const Operator& sigma,
                                         const Operator& w, const Conjugation& theta) {
  require(sigma.rows() == spec.d, "gksl_reverser_ops: sigma dimension mismatch");
  require_full_rank_density(sigma);
  const double steady_residual = gksl_apply(spec, sigma).mat.norm();
  require(steady_residual < tol::kCheck,
          "sigma is not steady for the semigroup: residual " +
              std::to_string(steady_residual));

  const SpaceLayout space_a = SpaceLayout::single(kLabelA, spec.d);
  auto wq = [&](const Matrix& x) {
    return unitary_conj_map(w, q_map(sigma, theta, Operator(x, space_a))).mat;
  };
  GkslReverserOps out;
  const Matrix wqg = wq(gksl_drift(spec));
  out.h_tilde = 0.5 * kI * (wqg.adjoint() - wqg) +
                spec.c_phase * Matrix::Identity(spec.d, spec.d);
  for (const auto& l : spec.jump_ops) out.jump_ops_tilde.push_back(-wq(l));
  return out;
}

//=============================================================================
// Convergence fitting
//=============================================================================

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Log-log least-squares fit of residual ~ C * x^slope; needs >= 5 points.
inline PowerLawFit fit_power_law(const std::vector<double>& x,
                                 const std::vector<double>& residual) {
  require(x.size() == residual.size() && x.size() >= 5,
          "power-law fit needs at least 5 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && residual[i] > 0.0, "power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(residual[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  PowerLawFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * std::log(x[i]);
    ss_res += (std::log(residual[i]) - pred) * (std::log(residual[i]) - pred);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace qrev
