#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "inhomo/error.hpp"
#include "inhomo/io.hpp"
#include "inhomo/lab.hpp"
#include "inhomo/random_field.hpp"
#include "inhomo/scenario.hpp"

using namespace inhomo;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("inhomo-unit-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string error_of(const std::string& yaml) {
  try {
    parse_scenario(yaml);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("diagnostics CSV has the fixed header and full precision") {
  DiagnosticsRecord r;
  r.t = 0.1;
  r.energy = 1.0 / 3.0;
  const std::string csv = diagnostics_csv({r});
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == kDiagnosticsHeader);
  CHECK(row.rfind("0.10000000000000001,0.33333333333333331,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}

TEST_CASE("state dumps round trip bitwise") {
  const fs::path dir = scratch_dir("state");
  const InitialData d = benchmark_datum(16, 3, 0.2);
  const FlowState s = initial_state(d, SolverOptions{});
  write_state(dir, "state-x", s, {3, 2, 1});
  for (const auto& path : {dir / "state-x.json", dir / "state-x.bin"}) {
    const StateDump back = read_state(path);
    CHECK(back.dim == 2);
    CHECK(back.points == 16);
    REQUIRE(back.fields.size() == 4);
    CHECK(back.names == std::vector<std::string>{"a", "u1", "u2", "pi"});
    CHECK(l2_norm(back.fields[0] - s.a.field()) == 0.0);
    CHECK(l2_norm(back.fields[2] - s.u[1]) == 0.0);
    CHECK(l2_norm(back.fields[3] - s.pi) == 0.0);
  }
  fs::resize_file(dir / "state-x.bin", 100);
  CHECK_THROWS_AS(read_state(dir / "state-x.json"), ParseError);
  CHECK_THROWS_AS(read_state(dir / "missing.json"), ParseError);
}

TEST_CASE("field files round trip and report malformed lines") {
  const fs::path dir = scratch_dir("field");
  const SpectralField f = random_field(TorusGrid(2, 32), {0, 10, 0}, 4);
  write_field_file(dir / "f.txt", f);
  CHECK(l2_norm(read_field_file(dir / "f.txt") - f) == 0.0);

  // A single listed mode fills in its conjugate: 0.5 e^{3 i x1} + c.c. = cos 3 x1.
  write_text(dir / "mode.txt", "# one mode\ndim 2\npoints 32\n3 0 0.5 0\n");
  const SpectralField m = read_field_file(dir / "mode.txt");
  const RealField v = to_physical(m);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(m.coefficient({-3, 0, 0}) == Complex(0.5, 0.0));

  auto message = [&](const std::string& text) {
    write_text(dir / "bad.txt", text);
    try {
      read_field_file(dir / "bad.txt");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("dim 2\npoints 32\n1 0 x 0\n").find("bad.txt:3:") != std::string::npos);
  CHECK(message("dim 2\npoints 32\n1 0\n").find(":3:") != std::string::npos);
  CHECK(message("dim 2\npoints 32\n16 0 1 0\n").find("outside the grid") != std::string::npos);
  CHECK(message("1 0 1 0\n").find(":1:") != std::string::npos);
  CHECK(message("dim 2\npoints 30\n1 0 1 0\n").find(":3:") != std::string::npos);
  CHECK(message("dim 2\npoints 32\n1 0 1 0 7\n").find("trailing") != std::string::npos);
  CHECK(message("dim two\n").find(":1:") != std::string::npos);
  CHECK_THROWS_AS(read_field_file(dir / "absent.txt"), ParseError);

  write_text(dir / "zero.txt", "dim 3\npoints 16\n");
  CHECK(l2_norm(read_field_file(dir / "zero.txt")) == 0.0);
}

TEST_CASE("scenario defaults and overrides") {
  const Scenario d = parse_scenario("");
  CHECK(d.dim == 2);
  CHECK(d.points == 64);
  CHECK(d.initial.preset == "benchmark");
  CHECK(d.lab.suites == lab_suite_names());

  const Scenario s = parse_scenario(
      "grid: {dim: 2, points: 32}\n"
      "index: {s: 2, p: inf, r: 1}\n"
      "solver: {dt: 0.02, t_end: 0.5, method: perturbative, lagged_pressure: true}\n"
      "picard: {horizon: 0.3}\n"
      "lab: {suites: [bony], samples: 3, seed: 9}\n");
  CHECK(s.points == 32);
  CHECK(std::isinf(s.idx.p));
  CHECK(s.solver.method == EllipticMethod::Perturbative);
  CHECK(s.solver.lagged_pressure);
  CHECK(s.picard.horizon.value() == 0.3);
  CHECK(s.lab.suites == std::vector<std::string>{"bony"});

  Scenario t = s;
  apply_seed(t, 77);
  CHECK(t.initial.seed == 77);
  CHECK(t.lab.seed == 77);
}

TEST_CASE("scenario errors name the line and field") {
  CHECK(error_of("grid:\n  dim: 2\n  pointz: 64\n") == "line 3: field 'grid.pointz': unknown key");
  CHECK(error_of("grid:\n  points: many\n") == "line 2: field 'grid.points': expected an integer");
  CHECK(error_of("grid: {points: 48}\n").find("power of two") != std::string::npos);
  CHECK(error_of("lab:\n  suites: [bony, nope]\n").find("line 2: field 'lab.suites': unknown suite 'nope'") == 0);
  CHECK(error_of("solver:\n  dt: -1\n").find("field 'solver'") != std::string::npos);
  CHECK(error_of("initial: {preset: magic}\n").find("unknown preset") != std::string::npos);
  CHECK(error_of("index: {s: 3, p: fish}\n").find("field 'index'") != std::string::npos);
  CHECK(error_of("grid: {dim: 2\n").find("line ") == 0);
  CHECK(error_of("grid: [1, 2]\n").find("expected a mapping") != std::string::npos);
  CHECK(error_of("initial: {preset: file}\n").find("density_file") != std::string::npos);
}

TEST_CASE("flow runs need existing files and condition C") {
  Scenario low = parse_scenario("index: {s: 1.5, p: 2, r: 2}\n");
  CHECK_THROWS_AS(require_flow_ready(low), ParseError);
  CHECK_THROWS_AS(build_initial_data(low), ParseError);

  const fs::path dir = scratch_dir("scenario");
  write_text(dir / "s.yaml",
             "grid: {dim: 2, points: 16}\n"
             "initial: {preset: file, density_file: rho.txt, velocity_files: [u1.txt, u2.txt]}\n");
  Scenario sc = load_scenario(dir / "s.yaml");
  CHECK(sc.initial.density_file == dir / "rho.txt");
  CHECK_THROWS_AS(require_flow_ready(sc), ParseError);

  write_text(dir / "rho.txt", "dim 2\npoints 16\n0 0 1.5 0\n1 0 0.1 0\n");
  write_text(dir / "u1.txt", "dim 2\npoints 16\n0 1 0.5 0\n");
  write_text(dir / "u2.txt", "dim 2\npoints 16\n");
  const InitialData d = build_initial_data(sc);
  CHECK(d.rho0.mean() == doctest::Approx(1.5));
  CHECK(l2_norm(d.u0[0]) > 0.0);

  // u1 = cos x1 is not divergence free.
  write_text(dir / "u1.txt", "dim 2\npoints 16\n1 0 0.5 0\n");
  CHECK_THROWS_AS(build_initial_data(sc), ParseError);
  CHECK_THROWS_AS(load_scenario(dir / "none.yaml"), ParseError);
}

TEST_CASE("rest preset builds a quiescent constant-density datum") {
  const InitialData d = build_initial_data(parse_scenario("grid: {points: 16}\ninitial: {preset: rest}\n"));
  CHECK(l2_norm(d.u0) == 0.0);
  CHECK(d.rho0.mean() == 1.0);
}

TEST_CASE("lab summary and JSON rendering") {
  SuiteReport r{"demo", {{"ok", 0.5, "<", 1.0, true}, {"bad", 3.0, "<", 2.0, false}}, nlohmann::json::object()};
  CHECK_FALSE(r.pass());
  CHECK(r.failing() == std::vector<std::string>{"demo/bad"});
  CHECK(lab_summary_csv({r}) == "suite,check,value,threshold,verdict\ndemo,ok,0.5,<1,PASS\ndemo,bad,3,<2,FAIL\n");
  r.checks[0].value = std::numeric_limits<double>::infinity();
  const nlohmann::json j = suite_json(r, {});
  CHECK(j["checks"][0]["value"] == "inf");
  CHECK(j["pass"] == false);
  CHECK_THROWS_AS(run_lab_suite("nope", {}), DomainError);
}

TEST_CASE("lab suites are deterministic") {
  const LabOptions o{3, 64, 5};
  const auto a = suite_json(run_lab_suite("bony", o), o).dump();
  const auto b = suite_json(run_lab_suite("bony", o), o).dump();
  CHECK(a == b);
  const SuiteReport t = run_lab_suite("transport", o);
  for (const auto& c : t.checks) CHECK_MESSAGE(c.pass, c.name);
}
