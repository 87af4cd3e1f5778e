#pragma once

// File formats: diagnostics CSV, binary state dumps with a JSON sidecar,
// plain-text spectral coefficient files and JSON reports.

#include <filesystem>
#include <string>
#include <vector>

#include "inhomo/euler.hpp"
#include "json.hpp"

namespace inhomo {

// One row per record under kDiagnosticsHeader; doubles printed with 17
// significant digits so output is bitwise reproducible.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

// <stem>.bin holds the spectral coefficients of a, u_1..u_N and Pi, each as
// spectral_size() complex128 pairs in storage order (last axis k >= 0), host
// byte order. <stem>.json describes grid, time, index and layout.
void write_state(const std::filesystem::path& dir, const std::string& stem, const FlowState& state,
                 const BesovIndex& idx);

struct StateDump {
  int dim = 0;
  int points = 0;
  double t = 0.0;
  std::vector<std::string> names;
  std::vector<SpectralField> fields;
};

// Reads a dump written by write_state, given the path of either file.
StateDump read_state(const std::filesystem::path& path);

// Text format, '#' starts a comment:
//   dim <N>
//   points <n>
//   <k_1> ... <k_N> <re> <im>     one line per coefficient
// Coefficients follow f(x) = sum_k c_k e^{i k.x}; the conjugate mode is
// filled in, so each pair needs to be listed once. Throws ParseError with the
// line number on malformed input.
SpectralField read_field_file(const std::filesystem::path& path);
void write_field_file(const std::filesystem::path& path, const SpectralField& f);

// Pretty-printed with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace inhomo
