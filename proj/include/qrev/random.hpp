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
#include <cstdint>
#include <random>
#include <vector>

#include "qrev/channel.hpp"
#include "qrev/core.hpp"
#include "qrev/models.hpp"
#include "qrev/reversal.hpp"

namespace qrev {

// Deterministic random source.  Gaussians come from an explicit Box-Muller
// transform over mt19937_64 uniforms, so a seed reproduces bit-identical
// streams independent of the standard library's distribution choices.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    // 53-bit mantissa uniform in [0, 1).
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Complex complex_gaussian() { return Complex(gaussian(), gaussian()) / std::sqrt(2.0); }

  Matrix ginibre(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
    }
    return m;
  }

  Matrix hermitian(Index d, double scale = 1.0) {
    const Matrix g = ginibre(d, d);
    return scale * (g + g.adjoint()) / 2.0;
  }

  // Haar-distributed unitary via QR of a Ginibre matrix with the phase fix
  // that makes the R diagonal positive.
  Matrix unitary(Index d) {
    const Matrix g = ginibre(d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
      const Complex diag = r(i, i);
      q.col(i) *= (std::abs(diag) > 0.0) ? diag / std::abs(diag) : Complex(1.0);
    }
    return q;
  }

  Vector state_vector(Index d) {
    Vector v = ginibre(d, 1).col(0);
    return v / v.norm();
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Random CPTP channel with the given number of Kraus operators, drawn from a
// Haar isometry (QR of a tall Ginibre block).
inline KrausChannel random_channel(Rng& rng, const SpaceLayout& space, Index n_kraus) {
  const Index d = space.total_dim();
  const Matrix g = rng.ginibre(n_kraus * d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = Matrix(qr.householderQ()).leftCols(d);
  std::vector<Operator> kraus;
  kraus.reserve(static_cast<size_t>(n_kraus));
  for (Index j = 0; j < n_kraus; ++j) {
    kraus.emplace_back(q.middleRows(j * d, d), space);
  }
  return KrausChannel::make(std::move(kraus));
}

// Random channel together with its steady state, redrawing until the steady
// state is unique enough and comfortably full-rank (well-conditioned Petz
// and modular maps).
inline std::pair<KrausChannel, Operator> random_channel_with_steady_state(
    Rng& rng, const SpaceLayout& space, Index n_kraus, double min_eigenvalue = 1e-2,
    int max_attempts = 500) {
  const Index d = space.total_dim();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    KrausChannel c = random_channel(rng, space, n_kraus);
    SteadyStateResult ss = steady_state(c);
    Eigen::SelfAdjointEigenSolver<Matrix> es(ss.sigma.mat);
    if (ss.full_rank && es.eigenvalues().minCoeff() > min_eigenvalue / static_cast<double>(d)) {
      return {std::move(c), std::move(ss.sigma)};
    }
  }
  throw NumericalError("failed to draw a channel with a well-conditioned steady state");
}

struct RandomModelOptions {
  bool random_w = true;          // otherwise W = identity relabeling
  bool random_theta = false;     // otherwise the standard-basis conjugation
  bool construct_reverser = true;
  double min_eigenvalue = 1e-2;  // floor for steady-state eigenvalues (times 1/d)
};

// Random reversal model: Haar u on A*E, random field input, steady state
// computed from the induced channel, and (optionally) the reverser built by
// the isometry-completion construction.
inline ReversalModel random_reversal_model(Rng& rng, Index d, Index d_E,
                                           RandomModelOptions opts = {}) {
  ReversalModel m;
  m.d = d;
  m.d_E = d_E;
  const SpaceLayout space_a = m.space_A();
  const SpaceLayout space_e = m.space_E();

  for (int attempt = 0; attempt < 500; ++attempt) {
    m.u = Operator(rng.unitary(d * d_E), space_a.joined(space_e));
    m.chi = PureState(rng.state_vector(d_E), space_e);
    KrausChannel f =
        channel_from_unitary(m.u, m.chi, OvercompleteFrame::standard(space_e));
    SteadyStateResult ss = steady_state(f);
    if (!ss.full_rank) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ss.sigma.mat);
    if (es.eigenvalues().minCoeff() <= opts.min_eigenvalue / static_cast<double>(d)) continue;
    m.sigma = std::move(ss.sigma);

    m.w = Operator(opts.random_w ? rng.unitary(d) : Matrix::Identity(d, d),
                   m.space_B(), space_a);
    m.theta = opts.random_theta ? Conjugation::make(rng.unitary(d), space_a)
                                : Conjugation::standard(space_a);
    if (opts.construct_reverser) {
      const PureState chi_tilde(rng.state_vector(d_E), space_e);
      m.v = build_reverser_unitary(m, chi_tilde);
      m.chi_tilde = chi_tilde;
    }
    validate(m);
    return m;
  }
  throw NumericalError("failed to draw a reversal model with a full-rank steady state");
}

// Random instance of the coupled-spectrum family.
inline RandomUnitarySpec random_unitary_spec(Rng& rng, Index d, Index d_E, double t,
                                             double c_phase = 0.0,
                                             bool theta_real = false) {
  Matrix h = rng.hermitian(d);
  Matrix x = rng.hermitian(d);
  if (theta_real) {
    h = ((h + h.transpose()) / 2.0).eval();  // real symmetric in the standard basis
    x = ((x + x.transpose()) / 2.0).eval();
    h = h.real().cast<Complex>();
    x = x.real().cast<Complex>();
  }
  std::vector<double> lambda(static_cast<size_t>(d_E));
  for (auto& l : lambda) l = rng.gaussian();
  return RandomUnitarySpec::make(d, std::move(h), std::move(x), std::move(lambda),
                                 rng.state_vector(d_E), t, c_phase);
}

}  // namespace qrev
