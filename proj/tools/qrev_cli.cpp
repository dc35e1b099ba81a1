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

// Batch front-end: ingest model configs, run the checker suites, and emit
// machine-readable JSON reports.
//
// Exit codes: 0 all requested checks pass, 1 check failure, 2 input error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrev/config.hpp"
#include "qrev/qrev.hpp"

namespace {

using namespace qrev;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw PreconditionError("cannot open config file '" + path + "'");
  return json::parse(in);  // json::exception on malformed input -> exit 2
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out.good()) throw PreconditionError("cannot write to '" + out_path + "'");
    out << doc.dump(2) << "\n";
  }
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<ReversalReport> run_reversal_suite(const ReversalModel& m, double tolerance) {
  return {check_lemma_fg(m, tolerance), check_theorem1(m, tolerance),
          check_theorem3(m, tolerance), check_special_reversal(m, tolerance),
          check_corollary_steady(m, tolerance)};
}

//-----------------------------------------------------------------------------
// verify
//-----------------------------------------------------------------------------

int cmd_verify(const std::string& config_path, const std::string& out_path,
               double tolerance) {
  Stopwatch timer;
  const json cfg = read_config(config_path);
  const ReversalModel m = model_from_config(cfg);
  require(m.v.has_value() && m.chi_tilde.has_value(),
          "verify needs a reverser: config must provide V and chi_tilde "
          "(or use `construct` first)");

  ReportDocument report;
  report.digest = config_digest(cfg);
  report.checks = run_reversal_suite(m, tolerance);
  report.wall_time_ms = timer.ms();
  emit(report.to_json(), out_path);
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

//-----------------------------------------------------------------------------
// construct
//-----------------------------------------------------------------------------

int cmd_construct(const std::string& config_path, const std::string& out_path,
                  const std::string& method, double tolerance) {
  Stopwatch timer;
  const json cfg = read_config(config_path);
  require(parse_kind(cfg) == ModelKind::kExplicit,
          "construct expects an explicit-kind config");
  bool full_rank = true;
  ReversalModel m = model_from_explicit_config(cfg, &full_rank);
  if (!full_rank) {
    std::cerr << "construct: sigma is rank-deficient; the reverser construction "
                 "assumes a full-rank steady state\n";
    return kExitCheckFailure;
  }
  m.v.reset();
  m.chi_tilde.reset();
  validate(m);

  const PureState chi_tilde = cfg.contains("chi_tilde")
                                  ? PureState(parse_vector(cfg.at("chi_tilde")), m.space_E())
                                  : m.chi;
  if (method == "isometry-completion") {
    m.v = build_reverser_unitary(m, chi_tilde);
  } else if (method == "kraus-theorem3") {
    m.v = build_reverser_from_kraus(m, chi_tilde);
  } else {
    throw PreconditionError("unknown --method '" + method +
                            "' (expected isometry-completion or kraus-theorem3)");
  }
  m.chi_tilde = chi_tilde;
  validate(m);

  json augmented = config_from_model(m);
  if (cfg.contains("tolerance")) augmented["tolerance"] = cfg.at("tolerance");
  json g_list = json::array();
  for (const auto& g : reverser_kraus(m, f_channel(m))) g_list.push_back(matrix_to_json(g.mat));
  augmented["g_kraus"] = g_list;

  ReportDocument report;
  report.digest = config_digest(cfg);
  report.checks = run_reversal_suite(m, tolerance);
  report.extra["method"] = method;
  report.wall_time_ms = timer.ms();

  if (out_path.empty()) {
    emit(augmented, "");
  } else {
    emit(augmented, out_path);
    emit(report.to_json(), "");
  }
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

//-----------------------------------------------------------------------------
// check-db
//-----------------------------------------------------------------------------

int cmd_check_db(const std::string& config_path, const std::string& out_path, int n_max,
                 double tolerance) {
  Stopwatch timer;
  const json cfg = read_config(config_path);
  require(cfg.contains("d"), "check-db config needs d");
  const Index d = cfg.at("d").get<Index>();
  const SpaceLayout space_a = SpaceLayout::single(kLabelA, d);

  KrausChannel channel = [&] {
    if (cfg.contains("kraus")) {
      std::vector<Operator> ops;
      for (const auto& k : cfg.at("kraus")) ops.emplace_back(parse_matrix(k), space_a);
      return KrausChannel::make(std::move(ops));
    }
    require(cfg.contains("U") && cfg.contains("chi") && cfg.contains("d_E"),
            "check-db config needs either `kraus` or U, chi, d_E");
    const Index d_E = cfg.at("d_E").get<Index>();
    const SpaceLayout space_e = SpaceLayout::single(kLabelE, d_E);
    const Operator u(parse_matrix(cfg.at("U")), space_a.joined(space_e));
    const PureState chi(parse_vector(cfg.at("chi")), space_e);
    return channel_from_unitary(u, chi, OvercompleteFrame::standard(space_e));
  }();

  Operator sigma = Operator::identity(space_a);
  if (!cfg.contains("sigma") ||
      (cfg.at("sigma").is_string() && cfg.at("sigma").get<std::string>() == "steady")) {
    sigma = steady_state(channel).sigma;
  } else {
    sigma = Operator(parse_matrix(cfg.at("sigma")), space_a);
  }
  const Conjugation theta = cfg.contains("theta_basis")
                                ? Conjugation::make(parse_matrix(cfg.at("theta_basis")), space_a)
                                : Conjugation::standard(space_a);

  ReportDocument report;
  report.digest = config_digest(cfg);
  report.checks.push_back(check_sqdb_theta(channel, sigma, theta, tolerance));
  report.checks.push_back(check_sqdb_direct(channel, sigma, theta, n_max, tolerance));

  const CMatrixResult c = solve_c_matrix(channel, sigma, theta);
  ReversalReport c_report;
  c_report.name = "c_matrix";
  c_report.pass = c.valid;
  c_report.residual = c.residual;
  c_report.tolerance = 1e-8;
  c_report.witness = c.valid ? "" : "no valid c: Q f_j is not a combination of the f_k";
  report.checks.push_back(c_report);

  report.extra["c"] = matrix_to_json(c.c);
  report.extra["c_residual"] = c.residual;
  report.extra["c_partial_isometry_defect"] = c.partial_isometry_defect;
  report.extra["c_involution_defect"] = c.involution_defect;
  report.extra["kraus_linearly_independent"] = c.kraus_linearly_independent;
  if (c.kraus_linearly_independent) {
    report.extra["c_unitarity_defect"] = c.unitarity_defect;
  }
  report.wall_time_ms = timer.ms();
  emit(report.to_json(), out_path);
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

//-----------------------------------------------------------------------------
// demo
//-----------------------------------------------------------------------------

int demo_random_unitary(Index d, Index d_E, std::uint64_t seed, double t, double c_phase,
                        const std::string& out_path, double tolerance) {
  Stopwatch timer;
  Rng rng(seed);
  const RandomUnitarySpec spec = random_unitary_spec(rng, d, d_E, t, c_phase);
  const SpaceLayout space_a = SpaceLayout::single(kLabelA, d);
  const Operator w(Matrix::Identity(d, d), SpaceLayout::single(kLabelB, d), space_a);
  const Conjugation theta = Conjugation::standard(space_a);
  const ReversalModel m = build_random_unitary_model(spec, w, theta);

  json params;
  params["demo"] = "random-unitary";
  params["d"] = d;
  params["d_E"] = d_E;
  params["seed"] = seed;
  params["t"] = t;
  params["c_phase"] = c_phase;

  ReportDocument report;
  report.digest = config_digest(params);
  report.checks = run_reversal_suite(m, tolerance);
  report.extra = params;
  report.extra["config"] = config_from_model(m);
  report.wall_time_ms = timer.ms();
  emit(report.to_json(), out_path);
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

std::vector<double> parse_dt_sweep(const std::string& sweep, size_t points) {
  const auto colon = sweep.find(':');
  require(colon != std::string::npos, "--dt-sweep expects the form a:b");
  const double a = std::stod(sweep.substr(0, colon));
  const double b = std::stod(sweep.substr(colon + 1));
  require(a > 0.0 && b > 0.0, "--dt-sweep bounds must be positive");
  std::vector<double> dts;
  const double log_a = std::log(a);
  const double log_b = std::log(b);
  for (size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    dts.push_back(std::exp(log_a + f * (log_b - log_a)));
  }
  return dts;
}

int demo_collision_gksl(std::uint64_t seed, const std::string& dt_sweep,
                        const std::string& out_path, double tolerance) {
  Stopwatch timer;
  Rng rng(seed);
  const Index d = 2;
  const SpaceLayout space_a = SpaceLayout::single(kLabelA, d);

  // Thermal pair of jumps with a diagonal Hamiltonian: the steady state is
  // the explicit thermal diagonal and the model satisfies detailed balance.
  const double gamma_down = 0.5 + 0.5 * rng.uniform();
  const double gamma_up = 0.1 + 0.3 * rng.uniform();
  const double omega = 0.5 + rng.uniform();
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = std::sqrt(gamma_down);
  Matrix raise = Matrix::Zero(2, 2);
  raise(1, 0) = std::sqrt(gamma_up);
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = omega;
  Matrix sigma_mat = Matrix::Zero(2, 2);
  sigma_mat(0, 0) = gamma_down / (gamma_down + gamma_up);
  sigma_mat(1, 1) = gamma_up / (gamma_down + gamma_up);
  const Operator sigma(sigma_mat, space_a);
  const Operator w(Matrix::Identity(d, d), SpaceLayout::single(kLabelB, d), space_a);
  const Conjugation theta = Conjugation::standard(space_a);

  const std::vector<double> dts = parse_dt_sweep(dt_sweep, 7);
  std::vector<double> f0_residuals, fj_residuals, reverser_residuals;
  json table = json::array();
  for (double dt : dts) {
    const CollisionSpec spec = CollisionSpec::make(d, h, {lower, raise}, dt);
    const CollisionUnitary col = build_collision_unitary(spec);
    const Matrix g_drift_mat = gksl_drift(spec);
    const double f0_res =
        (col.channel.kraus()[0].mat - Matrix::Identity(d, d) - g_drift_mat * dt).norm();
    double fj_res = 0.0;
    const std::vector<Matrix> jumps{lower, raise};
    for (size_t j = 0; j < jumps.size(); ++j) {
      const size_t idx = static_cast<size_t>(col.excitation_indices[j]);
      fj_res = std::max(fj_res,
                        (col.channel.kraus()[idx].mat - std::sqrt(dt) * jumps[j]).norm());
    }
    const GkslReverserOps rev = gksl_reverser_ops(spec, sigma, w, theta);
    double rev_res = frobenius_distance(
        unitary_conj_map(w, q_map(sigma, theta, col.channel.kraus()[0])),
        Operator(Matrix(Matrix::Identity(d, d) +
                        dt * unitary_conj_map(w, q_map(sigma, theta,
                                                       Operator(g_drift_mat, space_a)))
                                 .mat),
                 w.out_space));
    for (size_t j = 0; j < rev.jump_ops_tilde.size(); ++j) {
      const size_t idx = static_cast<size_t>(col.excitation_indices[j]);
      rev_res = std::max(
          rev_res,
          (unitary_conj_map(w, q_map(sigma, theta, col.channel.kraus()[idx])).mat +
           std::sqrt(dt) * rev.jump_ops_tilde[j])
              .norm());
    }
    f0_residuals.push_back(f0_res);
    fj_residuals.push_back(fj_res);
    reverser_residuals.push_back(rev_res);
    json row;
    row["dt"] = dt;
    row["f0_residual"] = f0_res;
    row["fj_residual"] = fj_res;
    row["reverser_residual"] = rev_res;
    table.push_back(std::move(row));
  }

  const PowerLawFit f0_fit = fit_power_law(dts, f0_residuals);
  const PowerLawFit fj_fit = fit_power_law(dts, fj_residuals);
  std::vector<double> sqrt_dts;
  for (double dt : dts) sqrt_dts.push_back(std::sqrt(dt));
  const PowerLawFit rev_fit = fit_power_law(sqrt_dts, reverser_residuals);

  // Semigroup convergence under dt halvings at t = 1.
  json semigroup = json::array();
  double prev_err = 0.0;
  bool monotone = true;
  for (int k = 3; k <= 7; ++k) {
    const double dt = std::pow(2.0, -k);
    const CollisionSpec spec = CollisionSpec::make(d, h, {lower, raise}, dt);
    const SuperoperatorMatrix step = to_superoperator(build_collision_unitary(spec).channel);
    Matrix power = Matrix::Identity(d * d, d * d);
    for (int i = 0; i < (1 << k); ++i) power = step.mat * power;
    const double err = (power - gksl_semigroup(spec, 1.0).mat).norm();
    if (k > 3 && err >= prev_err) monotone = false;
    prev_err = err;
    json row;
    row["dt"] = dt;
    row["semigroup_error"] = err;
    semigroup.push_back(std::move(row));
  }

  // Human-readable table on stderr; the JSON report stays parseable.
  std::ostringstream tbl;
  tbl << "    dt        |f0-I-G dt|   max|fj-L sqrt(dt)|   reverser match\n";
  for (size_t i = 0; i < dts.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof(line), "  %9.3e   %11.4e   %15.4e   %13.4e\n", dts[i],
                  f0_residuals[i], fj_residuals[i], reverser_residuals[i]);
    tbl << line;
  }
  char fits[200];
  std::snprintf(fits, sizeof(fits),
                "  fitted orders: f0 %.3f (R^2 %.4f), fj %.3f, reverser %.3f (sqrt-dt units)\n",
                f0_fit.slope, f0_fit.r_squared, fj_fit.slope, rev_fit.slope);
  tbl << fits;
  std::cerr << tbl.str();

  json params;
  params["demo"] = "collision-gksl";
  params["seed"] = seed;
  params["dt_sweep"] = dt_sweep;

  ReportDocument report;
  report.digest = config_digest(params);
  ReversalReport order_check;
  order_check.name = "collision_f0_order";
  order_check.residual = f0_fit.slope;
  order_check.tolerance = 1.4;
  order_check.pass = f0_fit.slope >= 1.4;
  order_check.witness = "fitted log-log slope (pass means slope >= tolerance)";
  report.checks.push_back(order_check);
  ReversalReport monotone_check;
  monotone_check.name = "semigroup_monotone_convergence";
  monotone_check.pass = monotone;
  monotone_check.residual = prev_err;
  monotone_check.tolerance = 1.0;
  report.checks.push_back(monotone_check);
  ReversalReport rev_check;
  rev_check.name = "gksl_reverser_match_order";
  rev_check.residual = rev_fit.slope;
  rev_check.tolerance = 0.9;
  rev_check.pass = rev_fit.slope >= 0.9;
  rev_check.witness = "fitted slope in sqrt(dt) units (pass means slope >= tolerance)";
  report.checks.push_back(rev_check);

  report.extra = params;
  report.extra["convergence_table"] = table;
  report.extra["semigroup_table"] = semigroup;
  report.extra["f0_order"] = f0_fit.slope;
  report.extra["f0_r_squared"] = f0_fit.r_squared;
  report.extra["fj_order"] = fj_fit.slope;
  report.extra["reverser_order_sqrt_dt"] = rev_fit.slope;
  report.extra["tolerance"] = tolerance;
  report.wall_time_ms = timer.ms();
  emit(report.to_json(), out_path);
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum reversal toolkit: verify, construct, and analyze coherent reversers"};
  app.require_subcommand(1);

  std::string config_path, out_path, method = "isometry-completion";
  std::string demo_name, dt_sweep = "1e-2:1e-5";
  double tolerance = tol::kCheck;
  int n_max = 3;
  std::uint64_t seed = 1;
  Index demo_d = 2, demo_d_E = 3;
  double demo_t = 0.7, demo_c = 0.3;

  auto* verify = app.add_subcommand("verify", "run the reversal checker suite on a config");
  verify->add_option("config", config_path, "model config path")->required();
  verify->add_option("--out", out_path, "write the report here instead of stdout");
  verify->add_option("--tol", tolerance, "pass threshold for every check");

  auto* construct = app.add_subcommand("construct", "build a reverser V for a config");
  construct->add_option("config", config_path, "model config path (no V required)")->required();
  construct->add_option("--out", out_path, "write the augmented config here");
  construct->add_option("--tol", tolerance, "pass threshold for the self-check");
  construct->add_option("--method", method,
                        "isometry-completion (default) or kraus-theorem3");

  auto* check_db = app.add_subcommand("check-db", "detailed-balance checks and the c matrix");
  check_db->add_option("config", config_path, "channel config path")->required();
  check_db->add_option("--out", out_path, "write the report here instead of stdout");
  check_db->add_option("--tol", tolerance, "pass threshold");
  check_db->add_option("--n-max", n_max, "largest power in the direct condition");

  auto* demo = app.add_subcommand("demo", "run a built-in example end to end");
  demo->add_option("name", demo_name, "random-unitary or collision-gksl")->required();
  demo->add_option("--out", out_path, "write the report here instead of stdout");
  demo->add_option("--tol", tolerance, "pass threshold");
  demo->add_option("--seed", seed, "RNG seed");
  demo->add_option("--d", demo_d, "system dimension");
  demo->add_option("--d-E", demo_d_E, "field dimension");
  demo->add_option("--t", demo_t, "interaction time");
  demo->add_option("--c", demo_c, "phase constant");
  demo->add_option("--dt-sweep", dt_sweep, "collision step sweep, form a:b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*verify) return cmd_verify(config_path, out_path, tolerance);
    if (*construct) return cmd_construct(config_path, out_path, method, tolerance);
    if (*check_db) return cmd_check_db(config_path, out_path, n_max, tolerance);
    if (*demo) {
      if (demo_name == "random-unitary") {
        return demo_random_unitary(demo_d, demo_d_E, seed, demo_t, demo_c, out_path,
                                   tolerance);
      }
      if (demo_name == "collision-gksl") {
        return demo_collision_gksl(seed, dt_sweep, out_path, tolerance);
      }
      throw PreconditionError("unknown demo '" + demo_name +
                              "' (expected random-unitary or collision-gksl)");
    }
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
