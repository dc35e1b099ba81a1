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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrev/channel.hpp"
#include "qrev/core.hpp"
#include "qrev/models.hpp"
#include "qrev/reversal.hpp"

namespace qrev {

using nlohmann::json;

inline constexpr const char* kToolName = "qrev";
inline constexpr const char* kToolVersion = "0.1.0";

//=============================================================================
// JSON <-> matrix conversions (complex numbers as [re, im] pairs)
//=============================================================================

inline Complex parse_complex(const json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex entries must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Matrix parse_matrix(const json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a nonempty nested array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols,
            "matrix rows must have equal length");
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(row[static_cast<size_t>(c)]);
    }
  }
  return m;
}

inline Vector parse_vector(const json& j) {
  require(j.is_array() && !j.empty(), "vector must be a nonempty array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = parse_complex(j[static_cast<size_t>(i)]);
  return v;
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

//=============================================================================
// Model digests
//=============================================================================

// FNV-1a over the canonicalized (sorted-key, minified) config text; used to
// tie reports back to their inputs reproducibly.
inline std::string config_digest(const json& config) {
  const std::string canonical = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

//=============================================================================
// Config parsing
//=============================================================================

enum class ModelKind { kExplicit, kRandomUnitary, kCollision };

inline ModelKind parse_kind(const json& cfg) {
  require(cfg.is_object(), "config must be a JSON object");
  const std::string kind = cfg.value("kind", "explicit");
  if (kind == "explicit") return ModelKind::kExplicit;
  if (kind == "random_unitary") return ModelKind::kRandomUnitary;
  if (kind == "collision") return ModelKind::kCollision;
  throw PreconditionError("unknown model kind '" + kind + "'");
}

namespace detail {

inline Operator parse_w(const json& cfg, Index d) {
  const SpaceLayout a = SpaceLayout::single(kLabelA, d);
  const SpaceLayout b = SpaceLayout::single(kLabelB, d);
  if (!cfg.contains("W")) {
    return Operator(Matrix::Identity(d, d), b, a);
  }
  return Operator(parse_matrix(cfg.at("W")), b, a);
}

inline Conjugation parse_theta(const json& cfg, Index d) {
  const SpaceLayout a = SpaceLayout::single(kLabelA, d);
  if (!cfg.contains("theta_basis")) return Conjugation::standard(a);
  return Conjugation::make(parse_matrix(cfg.at("theta_basis")), a);
}

}  // namespace detail

// Parse an explicit model.  "sigma" may be a matrix or the string "steady",
// in which case the steady state of F is computed; the caller decides how to
// treat rank deficiency.
inline ReversalModel model_from_explicit_config(const json& cfg,
                                                bool* sigma_full_rank = nullptr) {
  require(cfg.contains("d") && cfg.contains("d_E"), "config needs d and d_E");
  ReversalModel m;
  m.d = cfg.at("d").get<Index>();
  m.d_E = cfg.at("d_E").get<Index>();
  require(m.d >= 1 && m.d_E >= 1, "dimensions must be positive");
  require(cfg.contains("U") && cfg.contains("chi"), "config needs U and chi");
  m.u = Operator(parse_matrix(cfg.at("U")), m.space_A().joined(m.space_E()));
  m.chi = PureState(parse_vector(cfg.at("chi")), m.space_E());
  m.w = detail::parse_w(cfg, m.d);
  m.theta = detail::parse_theta(cfg, m.d);

  if (sigma_full_rank) *sigma_full_rank = true;
  if (!cfg.contains("sigma") || (cfg.at("sigma").is_string() &&
                                 cfg.at("sigma").get<std::string>() == "steady")) {
    const KrausChannel f =
        channel_from_unitary(m.u, m.chi, OvercompleteFrame::standard(m.space_E()));
    const SteadyStateResult ss = steady_state(f);
    m.sigma = ss.sigma;
    if (sigma_full_rank) *sigma_full_rank = ss.full_rank;
  } else {
    m.sigma = Operator(parse_matrix(cfg.at("sigma")), m.space_A());
    if (sigma_full_rank) {
      Eigen::SelfAdjointEigenSolver<Matrix> es((m.sigma.mat + m.sigma.mat.adjoint()) / 2.0);
      *sigma_full_rank =
          es.eigenvalues().minCoeff() > tol::kRank * es.eigenvalues().maxCoeff();
    }
  }
  if (cfg.contains("V")) {
    m.v = Operator(parse_matrix(cfg.at("V")), m.space_BE());
  }
  if (cfg.contains("chi_tilde")) {
    m.chi_tilde = PureState(parse_vector(cfg.at("chi_tilde")), m.space_E());
  }
  if (cfg.contains("U_E")) {
    m.u_E = Operator(parse_matrix(cfg.at("U_E")), m.space_E());
  }
  return m;
}

inline RandomUnitarySpec random_spec_from_config(const json& cfg) {
  require(cfg.contains("d"), "config needs d");
  const Index d = cfg.at("d").get<Index>();
  require(cfg.contains("H") && cfg.contains("X") && cfg.contains("lambda") &&
              cfg.contains("chi") && cfg.contains("t"),
          "random_unitary config needs H, X, lambda, chi, t");
  std::vector<double> lambda;
  for (const auto& l : cfg.at("lambda")) lambda.push_back(l.get<double>());
  return RandomUnitarySpec::make(d, parse_matrix(cfg.at("H")), parse_matrix(cfg.at("X")),
                                 std::move(lambda), parse_vector(cfg.at("chi")),
                                 cfg.at("t").get<double>(), cfg.value("c_phase", 0.0));
}

inline CollisionSpec collision_from_config(const json& cfg) {
  require(cfg.contains("d") && cfg.contains("H") && cfg.contains("jump_ops") &&
              cfg.contains("dt"),
          "collision config needs d, H, jump_ops, dt");
  std::vector<Matrix> jumps;
  for (const auto& j : cfg.at("jump_ops")) jumps.push_back(parse_matrix(j));
  return CollisionSpec::make(cfg.at("d").get<Index>(), parse_matrix(cfg.at("H")),
                             std::move(jumps), cfg.at("dt").get<double>(),
                             cfg.value("fock_cutoff", Index{1}),
                             cfg.value("c_phase", 0.0));
}

// Resolve any config kind into a validated ReversalModel.
inline ReversalModel model_from_config(const json& cfg) {
  ReversalModel m;
  switch (parse_kind(cfg)) {
    case ModelKind::kExplicit:
      m = model_from_explicit_config(cfg);
      break;
    case ModelKind::kRandomUnitary: {
      const RandomUnitarySpec spec = random_spec_from_config(cfg);
      m = build_random_unitary_model(spec, detail::parse_w(cfg, spec.d),
                                     detail::parse_theta(cfg, spec.d));
      break;
    }
    case ModelKind::kCollision:
      throw PreconditionError("collision configs drive check-db/demo, not verify");
  }
  validate(m);
  return m;
}

// Serialize a model back to an explicit config (used by `construct`).
inline json config_from_model(const ReversalModel& m) {
  json cfg;
  cfg["kind"] = "explicit";
  cfg["d"] = m.d;
  cfg["d_E"] = m.d_E;
  cfg["U"] = matrix_to_json(m.u.mat);
  cfg["chi"] = vector_to_json(m.chi.vec);
  cfg["sigma"] = matrix_to_json(m.sigma.mat);
  cfg["W"] = matrix_to_json(m.w.mat);
  cfg["theta_basis"] = matrix_to_json(m.theta.basis());
  if (m.v) cfg["V"] = matrix_to_json(m.v->mat);
  if (m.chi_tilde) cfg["chi_tilde"] = vector_to_json(m.chi_tilde->vec);
  if (m.u_E) cfg["U_E"] = matrix_to_json(m.u_E->mat);
  return cfg;
}

//=============================================================================
// Reports
//=============================================================================

struct ReportDocument {
  std::string digest;
  std::vector<ReversalReport> checks;
  json extra;  // command-specific payload (c matrix, convergence tables, ...)
  double wall_time_ms = 0.0;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  json to_json() const {
    json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["model_digest"] = digest;
    json list = json::array();
    for (const auto& c : checks) {
      json entry;
      entry["name"] = c.name;
      entry["pass"] = c.pass;
      entry["residual"] = c.residual;
      entry["tolerance"] = c.tolerance;
      if (!c.witness.empty()) entry["witness"] = c.witness;
      list.push_back(std::move(entry));
    }
    doc["checks"] = std::move(list);
    doc["pass"] = all_pass();
    if (!extra.is_null()) doc["detail"] = extra;
    doc["wall_time_ms"] = wall_time_ms;
    return doc;
  }
};

}  // namespace qrev
