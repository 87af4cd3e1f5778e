#pragma once

// Scenario files: one YAML tree per experiment with grid, initial data,
// Besov index, solver, Picard and lab settings. Unknown keys and ill-typed
// values raise ParseError naming the line and the field.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inhomo/euler.hpp"

namespace inhomo {

struct InitialSpec {
  // benchmark: rho0 = 1 + amplitude cos x1 and a unit B^1_{2,2} band [4, 8] velocity;
  // homogeneous: the same velocity with rho0 = 1; rest: rho0 = 1, u0 = 0;
  // file: coefficients from density_file and velocity_files.
  std::string preset = "benchmark";
  double amplitude = 0.2;
  std::uint64_t seed = 42;
  std::filesystem::path density_file;
  std::vector<std::filesystem::path> velocity_files;
};

struct PicardSpec {
  int n_iters = 8;
  int steps = 8;
  std::optional<double> horizon;  // lifespan_estimate when absent
};

struct LabSpec {
  std::vector<std::string> suites;
  int samples = 20;
  int points = 64;
  std::uint64_t seed = 1;
};

struct Scenario {
  std::filesystem::path source;
  int dim = 2;
  int points = 64;
  InitialSpec initial;
  BesovIndex idx{3.0, 2.0, 1.0};
  SolverOptions solver;
  LifespanParams lifespan;
  PicardSpec picard;
  LabSpec lab;
  int state_every = 0;  // also dump the state every this many records; 0 dumps only the final state
};

// Names accepted under lab.suites, in the order the lab runs them.
const std::vector<std::string>& lab_suite_names();

// base_dir resolves relative file paths.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

// --seed replaces both the initial-data seed and the lab seed.
void apply_seed(Scenario& sc, std::uint64_t seed);

// Throws ParseError when referenced files are missing or the index fails
// condition (C) for the grid dimension; both are required for flow runs.
void require_flow_ready(const Scenario& sc);

InitialData build_initial_data(const Scenario& sc);

}  // namespace inhomo
