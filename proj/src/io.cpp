#include "inhomo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "inhomo/error.hpp"

namespace inhomo {
namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string s = kDiagnosticsHeader;
  s += '\n';
  for (const auto& r : records) {
    const double row[] = {r.t,        r.energy,         r.forcing_work,   r.grad_u_inf, r.grad_pi_besov, r.bkm_integral,
                          r.vort_inf, r.vort_source_l2, r.u_besov,        r.da_besov,   r.rho_min,       r.rho_max};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) s += ',';
      s += fmt17(row[i]);
    }
    s += '\n';
  }
  return s;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  open_out(path) << diagnostics_csv(records);
}

void write_state(const std::filesystem::path& dir, const std::string& stem, const FlowState& state,
                 const BesovIndex& idx) {
  const TorusGrid& g = state.u.grid();
  std::vector<const SpectralField*> fields{&state.a.field()};
  std::vector<std::string> names{"a"};
  for (int j = 0; j < state.u.dim(); ++j) {
    fields.push_back(&state.u[j]);
    names.push_back("u" + std::to_string(j + 1));
  }
  fields.push_back(&state.pi);
  names.push_back("pi");

  std::ofstream bin = open_out(dir / (stem + ".bin"), std::ios::binary);
  for (const auto* f : fields) {
    const auto c = f->coeffs();
    bin.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(Complex)));
  }
  if (!bin) throw Error("failed writing " + (dir / (stem + ".bin")).string());

  nlohmann::json side;
  side["format"] = "inhomo-state-1";
  side["grid"] = {{"dim", g.dim()}, {"points", g.points()}};
  side["time"] = state.t;
  side["index"] = {{"s", idx.s}, {"p", idx.p}, {"r", idx.r}};
  side["fields"] = names;
  side["coefficients_per_field"] = g.spectral_size();
  side["layout"] = "complex128 pairs, storage order, last axis k >= 0, host byte order";
  side["binary"] = stem + ".bin";
  write_json(dir / (stem + ".json"), side);
}

StateDump read_state(const std::filesystem::path& path) {
  std::filesystem::path json_path = path, bin_path = path;
  json_path.replace_extension(".json");
  bin_path.replace_extension(".bin");
  std::ifstream js(json_path);
  if (!js) throw ParseError("cannot open state sidecar " + json_path.string());
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }
  StateDump d;
  try {
    d.dim = side.at("grid").at("dim").get<int>();
    d.points = side.at("grid").at("points").get<int>();
    d.t = side.at("time").get<double>();
    d.names = side.at("fields").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }
  const TorusGrid g(d.dim, d.points);
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw ParseError("cannot open state data " + bin_path.string());
  for (std::size_t i = 0; i < d.names.size(); ++i) {
    SpectralField f(g);
    auto c = f.coeffs();
    bin.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(Complex)));
    if (!bin) throw ParseError(bin_path.string() + ": truncated at field " + d.names[i]);
    d.fields.push_back(std::move(f));
  }
  return d;
}

SpectralField read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open field file " + path.string());
  auto fail = [&](int line, const std::string& why) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + why);
  };
  int dim = 0, points = 0, lineno = 0;
  std::optional<SpectralField> f;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head)) continue;
    if (head == "dim" || head == "points") {
      if (f) fail(lineno, "'" + head + "' after the first coefficient");
      int v = 0;
      std::string extra;
      if (!(ss >> v) || (ss >> extra)) fail(lineno, "expected '" + head + " <integer>'");
      (head == "dim" ? dim : points) = v;
      continue;
    }
    if (!f) {
      if (dim == 0 || points == 0) fail(lineno, "coefficients before 'dim' and 'points'");
      try {
        f.emplace(TorusGrid(dim, points));
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
    }
    std::istringstream row(line);
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      if (!(row >> k[static_cast<std::size_t>(a)])) fail(lineno, "expected " + std::to_string(dim) + " integer wavenumbers");
    }
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(row >> re >> im)) fail(lineno, "expected real and imaginary parts");
    if (row >> extra) fail(lineno, "trailing text '" + extra + "'");
    for (int a = 0; a < dim; ++a) {
      if (2 * std::abs(k[static_cast<std::size_t>(a)]) >= points) fail(lineno, "wavenumber outside the grid");
    }
    f->set_coefficient(k, Complex(re, im));
  }
  if (!f) {
    if (dim == 0 || points == 0) fail(lineno, "missing 'dim' or 'points'");
    try {
      f.emplace(TorusGrid(dim, points));
    } catch (const Error& e) {
      fail(lineno, e.what());
    }
  }
  return *f;
}

void write_field_file(const std::filesystem::path& path, const SpectralField& f) {
  const TorusGrid& g = f.grid();
  const auto tables = grid_tables(g);
  std::ofstream out = open_out(path);
  out << "dim " << g.dim() << "\npoints " << g.points() << '\n';
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == Complex(0.0) || tables->nyquist_mask[i] == 0.0) continue;
    const auto& k = tables->index_k[i];
    for (int a = 0; a < g.dim(); ++a) out << k[static_cast<std::size_t>(a)] << ' ';
    out << fmt17(c[i].real()) << ' ' << fmt17(c[i].imag()) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { open_out(path) << j.dump(2) << '\n'; }

}  // namespace inhomo
