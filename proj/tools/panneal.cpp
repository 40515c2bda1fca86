// Batch front end: single simulations, engine-vs-oracle verification,
// threshold searches, parameter sweeps, scaling fits and adiabatic reports.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
// 3 numerical convergence failure, 4 resource cap exceeded.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panneal/collision_engine.hpp"
#include "panneal/core_model.hpp"
#include "panneal/dense_oracle.hpp"
#include "panneal/experiments.hpp"
#include "panneal/report.hpp"

namespace {

using namespace panneal;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalidParams = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitResourceCap = 4;

struct CommonFlags {
  double epsilon = 0.5;
  int n = 1;
  double h = 0.5;
  double gamma = 0.5;
  double t_final = 10.0;
  int substeps = 0;
  std::string case_name = "phi";

  SimParams to_params() const {
    SimParams p;
    p.epsilon = epsilon;
    p.n_qubits = n;
    p.h = h;
    p.gamma = gamma;
    p.t_final = t_final;
    p.substeps_per_segment = substeps;
    p.case_label = case_name == "psi" ? CaseLabel::Psi : CaseLabel::Phi;
    return p;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags* f, bool need_n = true) {
  cmd->add_option("--epsilon", f->epsilon, "state parameter in (0,1]")
      ->required();
  auto* n_opt = cmd->add_option("--n", f->n, "number of register qubits");
  if (need_n) n_opt->required();
  cmd->add_option("--h", f->h, "problem field strength (default 0.5)");
  cmd->add_option("--gamma", f->gamma, "driver strength (default 0.5)");
  cmd->add_option("--t-final", f->t_final, "total schedule time (default 10)");
  cmd->add_option("--substeps", f->substeps,
                  "integrator substeps per segment (0 = auto)");
  cmd->add_option("--case", f->case_name, "prepared case: phi|psi")
      ->check(CLI::IsMember({"phi", "psi"}));
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::string token;
  std::istringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + csv);
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

int cmd_simulate(const CommonFlags& flags, const std::string& engine_name,
                 int samples, const std::string& out_path,
                 const std::string& format) {
  SimParams p = flags.to_params();
  validate(p);
  const EngineKind engine =
      engine_name == "dense" ? EngineKind::Dense : EngineKind::Collision;

  RunManifest manifest;
  manifest.params = p;
  manifest.engine = engine_name;
  manifest.started_at = iso_timestamp_now();

  std::vector<TimePoint> rows = time_series(p, samples, engine);
  double fidelity = 0.0;
  if (engine == EngineKind::Collision) {
    const RunResult r = run(p, p.n_qubits);
    manifest.final_p0 = r.final_p0;
    manifest.final_p1 = r.final_p1;
    fidelity = r.fidelity;
  } else {
    const DenseRun r = evolve_full(p, std::vector<double>{0.0, p.t_final});
    const PointerDensity rho = pointer_reduced(r.final_state);
    manifest.final_p0 = rho.p0();
    manifest.final_p1 = rho.p1();
    fidelity = fidelity_before_after(r.final_state, p);
  }
  manifest.fidelity = fidelity;

  if (!out_path.empty()) {
    if (format == "json") {
      write_trajectory_json(out_path, rows);
    } else {
      write_trajectory_csv(out_path, rows);
    }
    manifest.outputs.push_back(out_path);
    manifest.finished_at = iso_timestamp_now();
    write_manifest(out_path + ".manifest.json", manifest);
  }
  std::printf("final_p1=%s fidelity=%s\n",
              format_double(manifest.final_p1).c_str(),
              format_double(fidelity).c_str());
  return kExitOk;
}

int cmd_verify(const CommonFlags& flags, double tol) {
  SimParams p = flags.to_params();
  if (p.substeps_per_segment == 0) {
    // fine grid so that the two integration routes agree well below tol
    p.substeps_per_segment = std::max(default_substeps_per_segment(p.n_qubits),
                                      (32768 + p.n_qubits - 1) / p.n_qubits);
  }
  validate(p);
  if (p.n_qubits > kDenseQubitCap) {
    throw ResourceError("verify needs the dense oracle; N is capped at 16");
  }

  const CouplingSchedule sched(p);
  std::vector<double> boundaries;
  for (int j = 0; j <= p.n_qubits; ++j) boundaries.push_back(sched.boundary(j));

  const RunResult eng = run_sampled(p, boundaries);
  const DenseRun dense = evolve_full(p, boundaries);

  double max_diff = 0.0;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const PointerDensity& a = eng.pointer_samples[i].second;
    const PointerDensity& b = dense.pointer_traj[i].second;
    max_diff = std::max(max_diff, std::abs(a.p0() - b.p0()));
    max_diff = std::max(max_diff, std::abs(a.p1() - b.p1()));
  }
  const double fid_dense = fidelity_before_after(dense.final_state, p);
  const double fid_diff = std::abs(eng.fidelity - fid_dense);
  max_diff = std::max(max_diff, fid_diff);

  std::printf("max_discrepancy=%s fidelity_engine=%s fidelity_dense=%s tol=%s\n",
              format_double(max_diff).c_str(),
              format_double(eng.fidelity).c_str(),
              format_double(fid_dense).c_str(), format_double(tol).c_str());
  if (max_diff < tol) return kExitOk;
  std::fprintf(stderr, "verify: discrepancy %s exceeds tolerance %s\n",
               format_double(max_diff).c_str(), format_double(tol).c_str());
  return kExitVerifyFailed;
}

int cmd_threshold(const std::string& eps_list, double target,
                  const std::string& quantity_name,
                  const std::string& grid_name, int n_cap,
                  const CommonFlags& flags, const std::string& out_path) {
  const std::vector<double> eps = parse_double_list(eps_list);
  SimParams base = flags.to_params();

  ThresholdQuery proto;
  proto.target = target;
  proto.quantity = quantity_name == "fidelity" ? ThresholdQuantity::Fidelity
                                               : ThresholdQuantity::SuccessP1;
  proto.grid = grid_name == "bisect" ? SearchGrid::IntegerBisection
                                     : SearchGrid::PowersOfTwo;
  proto.n_cap = n_cap;

  std::vector<ThresholdResult> results(eps.size());
  parallel_for(static_cast<int>(eps.size()), [&](int i) {
    ThresholdQuery q = proto;
    q.epsilon = eps[i];
    results[i] = min_n(q, base);
  });

  std::vector<ThresholdRow> rows;
  std::vector<std::pair<double, int>> fit_points;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    ThresholdRow row;
    row.epsilon = eps[i];
    row.n_min = results[i].n_min;
    row.value_at_n_min = results[i].value_at_n_min;
    rows.push_back(row);
    if (results[i].n_min) fit_points.emplace_back(eps[i], *results[i].n_min);
    if (results[i].n_min) {
      std::printf("epsilon=%s n_min=%d value=%s\n",
                  format_double(eps[i]).c_str(), *results[i].n_min,
                  format_double(results[i].value_at_n_min).c_str());
    } else {
      std::printf("epsilon=%s n_min= (not found below cap %d)\n",
                  format_double(eps[i]).c_str(), n_cap);
    }
  }
  if (!out_path.empty()) {
    write_threshold_csv(out_path, rows);
  }
  if (!fit_points.empty()) {
    const ScalingFit fit = fit_lambda(fit_points);
    std::printf("lambda_hat=%s residual=%s\n",
                format_double(fit.lambda_hat).c_str(),
                format_double(fit.residual).c_str());
  }
  return kExitOk;
}

int cmd_sweep(const std::string& eps_list, const std::string& n_list,
              const CommonFlags& flags, const std::string& out_path) {
  std::vector<double> eps = parse_double_list(eps_list);
  std::vector<int> ns = parse_int_list(n_list);
  std::sort(eps.begin(), eps.end());
  std::sort(ns.begin(), ns.end());
  SimParams base = flags.to_params();

  std::vector<SweepRow> rows(eps.size() * ns.size());
  parallel_for(static_cast<int>(rows.size()), [&](int i) {
    const std::size_t ei = static_cast<std::size_t>(i) / ns.size();
    const std::size_t ni = static_cast<std::size_t>(i) % ns.size();
    SimParams p = base;
    p.epsilon = eps[ei];
    p.n_qubits = ns[ni];
    const RunResult r = run(p, p.n_qubits);
    rows[i] = {eps[ei], ns[ni], r.final_p1, r.final_p0, r.fidelity};
  });
  if (!out_path.empty()) {
    write_sweep_csv(out_path, rows);
  }
  for (const SweepRow& r : rows) {
    std::printf("epsilon=%s n=%d final_p1=%s fidelity=%s\n",
                format_double(r.epsilon).c_str(), r.n,
                format_double(r.final_p1).c_str(),
                format_double(r.fidelity).c_str());
  }
  return kExitOk;
}

int cmd_fit(const std::string& in_path) {
  const std::vector<ThresholdRow> rows = read_threshold_csv(in_path);
  std::vector<std::pair<double, int>> points;
  for (const ThresholdRow& r : rows) {
    if (r.n_min) points.emplace_back(r.epsilon, *r.n_min);
  }
  const ScalingFit fit = fit_lambda(points);
  std::printf("lambda_hat=%s residual=%s points=%zu\n",
              format_double(fit.lambda_hat).c_str(),
              format_double(fit.residual).c_str(), fit.points.size());
  return kExitOk;
}

int cmd_adiabatic(const CommonFlags& flags, int samples,
                  const std::string& out_path) {
  SimParams p = flags.to_params();
  validate(p);
  const std::vector<AdiabaticPoint> rows = adiabatic_report(p, samples);
  double max_metric = 0.0;
  for (const AdiabaticPoint& r : rows) {
    max_metric = std::max(max_metric, r.metric);
  }
  if (!out_path.empty()) {
    write_adiabatic_csv(out_path, rows);
  }
  std::printf("max_metric=%s samples=%d\n", format_double(max_metric).c_str(),
              samples);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panneal: collective-state pointer-measurement simulator"};
  // --h is the field-strength flag, so help stays on --help only
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", panneal::kVersion);
  app.require_subcommand(1);

  // simulate
  CommonFlags sim_flags;
  std::string sim_engine = "collision";
  std::string sim_out;
  std::string sim_format = "csv";
  int sim_samples = 256;
  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  add_common_flags(simulate, &sim_flags);
  simulate->add_option("--engine", sim_engine, "collision|dense")
      ->check(CLI::IsMember({"collision", "dense"}));
  simulate->add_option("--samples", sim_samples, "trajectory rows - 1");
  simulate->add_option("--out", sim_out, "trajectory output path");
  simulate->add_option("--format", sim_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // verify
  CommonFlags verify_flags;
  double verify_tol = 1e-8;
  auto* verify = app.add_subcommand(
      "verify", "run both engines and compare (N <= 16)");
  add_common_flags(verify, &verify_flags);
  verify->add_option("--tol", verify_tol, "max allowed discrepancy");

  // threshold
  CommonFlags thr_flags;
  thr_flags.epsilon = 0.5;  // unused; epsilon comes from the list
  std::string thr_eps_list;
  std::string thr_quantity = "p1";
  std::string thr_grid = "pow2";
  std::string thr_out;
  double thr_target = 0.9;
  int thr_cap = 1 << 18;
  auto* threshold =
      app.add_subcommand("threshold", "minimum-N search per epsilon");
  threshold->add_option("--epsilon-list", thr_eps_list, "comma-separated")
      ->required();
  threshold->add_option("--target", thr_target, "threshold value in (0,1)");
  threshold->add_option("--quantity", thr_quantity, "p1|fidelity")
      ->check(CLI::IsMember({"p1", "fidelity"}));
  threshold->add_option("--grid", thr_grid, "pow2|bisect")
      ->check(CLI::IsMember({"pow2", "bisect"}));
  threshold->add_option("--n-cap", thr_cap, "search cap");
  threshold->add_option("--h", thr_flags.h, "problem field strength");
  threshold->add_option("--gamma", thr_flags.gamma, "driver strength");
  threshold->add_option("--t-final", thr_flags.t_final, "schedule time");
  threshold->add_option("--substeps", thr_flags.substeps, "0 = auto");
  threshold->add_option("--case", thr_flags.case_name, "phi|psi")
      ->check(CLI::IsMember({"phi", "psi"}));
  threshold->add_option("--out", thr_out, "CSV output path");

  // sweep
  CommonFlags sweep_flags;
  std::string sweep_eps_list;
  std::string sweep_n_list;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "grid of (epsilon, N) runs");
  sweep->add_option("--epsilon-list", sweep_eps_list, "comma-separated")
      ->required();
  sweep->add_option("--n-list", sweep_n_list, "comma-separated")->required();
  sweep->add_option("--h", sweep_flags.h, "problem field strength");
  sweep->add_option("--gamma", sweep_flags.gamma, "driver strength");
  sweep->add_option("--t-final", sweep_flags.t_final, "schedule time");
  sweep->add_option("--substeps", sweep_flags.substeps, "0 = auto");
  sweep->add_option("--case", sweep_flags.case_name, "phi|psi")
      ->check(CLI::IsMember({"phi", "psi"}));
  sweep->add_option("--out", sweep_out, "CSV output path");

  // fit
  std::string fit_in;
  auto* fit = app.add_subcommand("fit", "scaling fit from a threshold CSV");
  fit->add_option("--in", fit_in, "CSV of epsilon,n_min[,value]")->required();

  // adiabatic
  CommonFlags adia_flags;
  int adia_samples = 256;
  std::string adia_out;
  auto* adiabatic =
      app.add_subcommand("adiabatic", "metric and gap over the schedule");
  adiabatic->add_option("--samples", adia_samples, "grid intervals");
  adiabatic->add_option("--h", adia_flags.h, "problem field strength");
  adiabatic->add_option("--gamma", adia_flags.gamma, "driver strength");
  adiabatic->add_option("--t-final", adia_flags.t_final, "schedule time");
  adiabatic->add_option("--case", adia_flags.case_name, "phi|psi")
      ->check(CLI::IsMember({"phi", "psi"}));
  adiabatic->add_option("--out", adia_out, "CSV output path");

  for (CLI::App* sub : app.get_subcommands(nullptr)) {
    sub->set_help_flag("--help", "print help");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidParams;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim_flags, sim_engine, sim_samples, sim_out,
                          sim_format);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_flags, verify_tol);
    }
    if (threshold->parsed()) {
      return cmd_threshold(thr_eps_list, thr_target, thr_quantity, thr_grid,
                           thr_cap, thr_flags, thr_out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_eps_list, sweep_n_list, sweep_flags, sweep_out);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_in);
    }
    if (adiabatic->parsed()) {
      return cmd_adiabatic(adia_flags, adia_samples, adia_out);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidParams;
  } catch (const panneal::ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResourceCap;
  } catch (const panneal::ConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const panneal::ConsistencyError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
