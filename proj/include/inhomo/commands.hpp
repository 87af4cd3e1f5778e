#pragma once

// Command-line front end. Exit codes:
//   0  success
//   1  unexpected internal error
//   2  bad command line, scenario or input file
//   3  solver failure (aborted run, elliptic or Picard failure)
//   4  one or more lab checks failed

#include <filesystem>
#include <iosfwd>
#include <string>

#include "inhomo/littlewood_paley.hpp"
#include "inhomo/scenario.hpp"

namespace inhomo {

enum ExitCode : int { kExitOk = 0, kExitUnexpected = 1, kExitConfig = 2, kExitSolver = 3, kExitSuite = 4 };

// Writes diagnostics.csv, state-final.{bin,json} (plus state-NNNN every
// state_every records) and report-run.json into out.
int cmd_run(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err);

// Runs sc.lab.suites, writes report-<suite>.json and prints the CSV summary.
int cmd_lab(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err);

// Prints the per-block terms and the total of the B^s_{p,r} norm of a field file.
int cmd_norms(const std::filesystem::path& field_file, const BesovIndex& idx, std::ostream& log);

// Prints the table of Picard differences and writes report-picard.json.
int cmd_picard(const Scenario& sc, const std::filesystem::path& out, std::ostream& log, std::ostream& err);

// Parses argv and dispatches; never throws.
int run_cli(int argc, char** argv);

}  // namespace inhomo
