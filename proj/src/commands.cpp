#include "inhomo/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "inhomo/error.hpp"
#include "inhomo/io.hpp"
#include "inhomo/lab.hpp"
#include "inhomo/parallel.hpp"
#include "inhomo/picard.hpp"

namespace inhomo {
namespace {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json index_json(const BesovIndex& idx) { return {{"s", idx.s}, {"p", number(idx.p)}, {"r", number(idx.r)}}; }

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("expected a number or 'inf', got '" + s + "'");
  return v;
}

}  // namespace

int cmd_run(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err) {
  const InitialData data = build_initial_data(sc);
  SolverOptions opts = sc.solver;
  opts.keep_states = sc.state_every > 0;
  const RunResult r = run(data, opts);
  std::filesystem::create_directories(out);
  write_diagnostics_csv(out / "diagnostics.csv", r.records);
  if (sc.state_every > 0) {
    for (std::size_t i = 0; i < r.states.size(); i += static_cast<std::size_t>(sc.state_every)) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "state-%04zu", i);
      write_state(out, stem, r.states[i], sc.idx);
    }
  }
  write_state(out, "state-final", r.final_state, sc.idx);

  const double e0 = r.records.front().energy;
  double drift = 0.0;
  for (const auto& rec : r.records) {
    drift = std::max(drift, e0 > 0 ? std::abs((rec.energy - rec.forcing_work) / e0 - 1.0) : std::abs(rec.energy));
  }
  const BkmReport bkm = bkm_monitor(r.records, sc.idx, sc.dim);
  json rep = {{"grid", {{"dim", sc.dim}, {"points", sc.points}}},
              {"preset", sc.initial.preset},
              {"seed", sc.initial.seed},
              {"index", index_json(sc.idx)},
              {"dt", opts.dt},
              {"t_end", opts.t_end},
              {"t_reached", r.final_state.t},
              {"records", r.records.size()},
              {"max_relative_energy_drift", number(drift)},
              {"max_divergence", number(r.max_divergence)},
              {"bkm_integral", number(r.records.back().bkm_integral)},
              {"bkm_log_slope", number(bkm.log_slope)},
              {"bkm_superlinear", bkm.superlinear},
              {"lifespan_estimate", number(lifespan_estimate(data, sc.lifespan))},
              {"aborted", r.abort_reason.has_value()}};
  if (r.abort_reason) {
    rep["abort_reason"] = *r.abort_reason;
    rep["abort_time"] = r.abort_time;
  }
  write_json(out / "report-run.json", rep);
  log << "t = " << fmt(r.final_state.t) << ", " << r.records.size() << " records, energy drift " << fmt(drift)
      << ", wrote " << (out / "diagnostics.csv").string() << '\n';
  if (r.abort_reason) {
    err << "error: run aborted at t = " << fmt(r.abort_time) << ": " << *r.abort_reason << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_lab(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err) {
  const LabOptions opts{sc.lab.samples, sc.lab.points, sc.lab.seed};
  std::filesystem::create_directories(out);
  std::vector<SuiteReport> reports;
  for (const auto& name : sc.lab.suites) {
    reports.push_back(run_lab_suite(name, opts));
    write_json(out / ("report-" + name + ".json"), suite_json(reports.back(), opts));
  }
  log << lab_summary_csv(reports);
  std::vector<std::string> failing;
  for (const auto& r : reports) {
    for (auto& f : r.failing()) failing.push_back(std::move(f));
  }
  if (failing.empty()) return kExitOk;
  err << "error: " << failing.size() << " lab check(s) failed:\n";
  for (const auto& f : failing) err << "  " << f << '\n';
  return kExitSuite;
}

int cmd_norms(const std::filesystem::path& field_file, const BesovIndex& idx, std::ostream& log) {
  idx.validate();
  const SpectralField f = read_field_file(field_file);
  const DyadicCutoffs cut(f.grid());
  const BesovNormReport rep = besov_norm(f, idx, cut);
  char buf[64];
  log << "q,weighted_block_norm\n";
  for (const auto& [q, v] : rep.blocks) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", q, v);
    log << buf;
  }
  std::snprintf(buf, sizeof buf, "total,%.17g\n", rep.total);
  log << buf;
  return kExitOk;
}

int cmd_picard(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err) {
  const InitialData data = build_initial_data(sc);
  const double lifespan = lifespan_estimate(data, sc.lifespan);
  const double horizon = sc.picard.horizon.value_or(lifespan);
  if (!std::isfinite(horizon)) {
    throw ParseError("picard.horizon is required when the lifespan estimate is infinite");
  }
  if (horizon > lifespan) {
    err << "warning: horizon " << fmt(horizon) << " exceeds the lifespan estimate " << fmt(lifespan)
        << "; the iteration may not contract\n";
  }
  PicardOptions po;
  po.t_horizon = horizon;
  po.n_iters = sc.picard.n_iters;
  po.steps = sc.picard.steps;
  const PicardResult r = picard_iterate(data, po, sc.solver);
  log << "n,delta_n,ratio\n";
  char buf[96];
  for (std::size_t n = 0; n < r.deltas.size(); ++n) {
    const double ratio = n == 0 ? std::nan("") : r.ratios[n - 1];
    std::snprintf(buf, sizeof buf, "%zu,%.6e,%.4f\n", n, r.deltas[n], ratio);
    log << buf;
  }
  json ratios = json::array();
  for (double x : r.ratios) ratios.push_back(number(x));
  json deltas = json::array();
  for (double x : r.deltas) deltas.push_back(number(x));
  std::filesystem::create_directories(out);
  write_json(out / "report-picard.json", {{"horizon", horizon},
                                          {"lifespan_estimate", number(lifespan)},
                                          {"n_iters", po.n_iters},
                                          {"steps", po.steps},
                                          {"deltas", deltas},
                                          {"ratios", ratios},
                                          {"floor", r.floor}});
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Density-dependent incompressible Euler solver and estimate lab"};
  app.require_subcommand(1);
  std::string config, out = ".";
  std::int64_t seed = -1;
  int threads = 0;
  app.add_option("--config", config, "Scenario file (YAML)");
  app.add_option("--seed", seed, "Override the random seed of the scenario")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "Cap on worker threads (0 = one per hardware thread)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output directory (INHOMO_EULER_OUT overrides)");

  auto* run_cmd = app.add_subcommand("run", "Integrate a scenario and write diagnostics and state dumps");
  auto* lab_cmd = app.add_subcommand("lab", "Run verification suites and write JSON reports");
  auto* picard_cmd = app.add_subcommand("picard", "Run the Picard iteration and print its Cauchy table");
  auto* norms_cmd = app.add_subcommand("norms", "Print the Besov norm of a coefficient file");
  std::string field_file, p_text = "2", r_text = "2";
  double s = 0.0;
  norms_cmd->add_option("file", field_file, "Spectral coefficient file")->required();
  norms_cmd->add_option("s", s, "Regularity index")->required();
  norms_cmd->add_option("p", p_text, "Integrability exponent (number or inf)")->required();
  norms_cmd->add_option("r", r_text, "Summability exponent (number or inf)")->required();
  for (auto* sub : {run_cmd, lab_cmd, picard_cmd}) sub->fallthrough();
  norms_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    set_worker_limit(threads);
    if (const char* env = std::getenv("INHOMO_EULER_OUT"); env && *env) out = env;
    if (norms_cmd->parsed()) {
      return cmd_norms(field_file, {s, parse_exponent(p_text), parse_exponent(r_text)}, std::cout);
    }
    if (config.empty()) throw ParseError("--config is required for this command");
    Scenario sc = load_scenario(config);
    if (seed >= 0) apply_seed(sc, static_cast<std::uint64_t>(seed));
    if (run_cmd->parsed()) return cmd_run(sc, out, std::cout, std::cerr);
    if (lab_cmd->parsed()) return cmd_lab(sc, out, std::cout, std::cerr);
    return cmd_picard(sc, out, std::cout, std::cerr);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: solver failed: " << e.what() << '\n';
    return kExitSolver;
  } catch (const IntegrationAbort& e) {
    std::cerr << "error: integration aborted at t = " << fmt(e.time()) << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitUnexpected;
  }
}

}  // namespace inhomo
