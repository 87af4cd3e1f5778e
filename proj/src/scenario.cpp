#include "inhomo/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "inhomo/error.hpp"
#include "inhomo/io.hpp"

namespace inhomo {
namespace {

std::string where(const YAML::Node& n, const std::string& field) {
  std::string s = "field '" + field + "'";
  if (!n.IsDefined()) return s;
  const YAML::Mark m = n.Mark();
  if (m.line >= 0) s = "line " + std::to_string(m.line + 1) + ": " + s;
  return s;
}

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path) : path_(std::move(path)) {
    if (!present(node)) return;
    if (!node.IsMap()) throw ParseError(where(node, path_) + ": expected a mapping");
    node_ = node;
  }

  // Rejects keys that no accessor asked for.
  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ParseError(where(kv.first, join(key)) + ": unknown key");
    }
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_) return;
    const YAML::Node v = node_[key];
    if (!present(v)) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ParseError(where(v, join(key)) + ": expected " + type_name<T>());
    }
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(node_ ? node_[key] : YAML::Node(YAML::NodeType::Undefined), join(key));
  }

  // Undefined node when the key is absent or null.
  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    if (!node_ || !present(node_[key])) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  // Node of key for error locations, falling back to the mapping itself.
  YAML::Node at(const std::string& key) const {
    if (node_ && present(node_[key])) return node_[key];
    return node_;
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <class T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "true or false";
    if constexpr (std::is_integral_v<T>) return "an integer";
    if constexpr (std::is_floating_point_v<T>) return "a number";
    if constexpr (std::is_same_v<T, std::string>) return "a string";
    return "a list of strings";
  }

  YAML::Node node_{YAML::NodeType::Undefined};
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const YAML::Node& root, const std::string& field, const std::string& why) {
  if (!ok) throw ParseError(where(root, field) + ": " + why);
}

void check(bool ok, const Reader& r, const std::string& key, const std::string& why) {
  if (!ok) throw ParseError(where(r.at(key), r.join(key)) + ": " + why);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path q(p);
  return q.is_absolute() ? q : base / q;
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == ".inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

const std::vector<std::string>& lab_suite_names() {
  static const std::vector<std::string> names{"elliptic", "commutator", "weighted-bernstein",
                                              "bony",     "bernstein",  "transport"};
  return names;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  Scenario sc;
  Reader top(root, "");

  Reader grid = top.child("grid");
  grid.get("dim", sc.dim);
  grid.get("points", sc.points);
  grid.finish();
  check(sc.dim == 2 || sc.dim == 3, grid, "dim", "must be 2 or 3");
  check(sc.points >= 16 && (sc.points & (sc.points - 1)) == 0, grid, "points", "must be a power of two >= 16");

  Reader init = top.child("initial");
  init.get("preset", sc.initial.preset);
  init.get("amplitude", sc.initial.amplitude);
  init.get("seed", sc.initial.seed);
  std::string density;
  std::vector<std::string> velocity;
  init.get("density_file", density);
  init.get("velocity_files", velocity);
  init.finish();
  const std::set<std::string> presets{"benchmark", "homogeneous", "rest", "file"};
  check(presets.count(sc.initial.preset) > 0, init, "preset",
        "unknown preset '" + sc.initial.preset + "' (benchmark, homogeneous, rest, file)");
  check(std::abs(sc.initial.amplitude) < 1.0, init, "amplitude", "must lie in (-1, 1) to keep rho0 positive");
  if (sc.initial.preset == "file") {
    check(!density.empty(), init, "density_file", "required for preset 'file'");
    check(static_cast<int>(velocity.size()) == sc.dim, init, "velocity_files", "needs one file per axis");
    sc.initial.density_file = resolve(base_dir, density);
    for (const auto& v : velocity) sc.initial.velocity_files.push_back(resolve(base_dir, v));
  } else {
    check(density.empty() && velocity.empty(), root, "initial", "coefficient files need preset 'file'");
    check(sc.dim == 2, init, "preset", "presets are two-dimensional; use preset 'file' in 3D");
  }

  Reader index = top.child("index");
  std::string p_text = "2", r_text = "1";
  index.get("s", sc.idx.s);
  {
    YAML::Node pn = index.raw("p"), rn = index.raw("r");
    try {
      if (pn.IsDefined()) p_text = pn.as<std::string>();
      if (rn.IsDefined()) r_text = rn.as<std::string>();
      sc.idx.p = parse_exponent(p_text);
      sc.idx.r = parse_exponent(r_text);
    } catch (const std::exception&) {
      throw ParseError(where(pn.IsDefined() ? pn : index.at(""), "index") + ": p and r must be numbers or 'inf'");
    }
  }
  index.finish();
  try {
    sc.idx.validate();
  } catch (const DomainError& e) {
    throw ParseError(where(index.at(""), "index") + ": " + e.what());
  }

  Reader solver = top.child("solver");
  solver.get("dt", sc.solver.dt);
  solver.get("t_end", sc.solver.t_end);
  solver.get("cfl", sc.solver.cfl);
  solver.get("record_every", sc.solver.record_every);
  std::string method = method_name(sc.solver.method);
  solver.get("method", method);
  solver.get("tol", sc.solver.elliptic_tol);
  solver.get("max_iter", sc.solver.elliptic_max_iter);
  solver.get("lagged_pressure", sc.solver.lagged_pressure);
  solver.get("state_every", sc.state_every);
  solver.finish();
  try {
    sc.solver.method = parse_method(method);
    sc.solver.validate();
  } catch (const DomainError& e) {
    throw ParseError(where(solver.at(""), "solver") + ": " + e.what());
  }
  check(sc.state_every >= 0, solver, "state_every", "must be >= 0");

  Reader life = top.child("lifespan");
  life.get("c", sc.lifespan.c);
  life.get("gamma", sc.lifespan.gamma);
  life.finish();
  check(sc.lifespan.c > 0.0, life, "c", "must be positive");
  check(sc.lifespan.gamma >= 0.0, life, "gamma", "must be nonnegative");

  Reader picard = top.child("picard");
  picard.get("n_iters", sc.picard.n_iters);
  picard.get("steps", sc.picard.steps);
  double horizon = -1.0;
  picard.get("horizon", horizon);
  picard.finish();
  if (horizon >= 0.0) sc.picard.horizon = horizon;
  check(sc.picard.n_iters >= 1, picard, "n_iters", "must be >= 1");
  check(sc.picard.steps >= 1, picard, "steps", "must be >= 1");

  Reader lab = top.child("lab");
  lab.get("suites", sc.lab.suites);
  lab.get("samples", sc.lab.samples);
  lab.get("points", sc.lab.points);
  lab.get("seed", sc.lab.seed);
  lab.finish();
  for (const auto& s : sc.lab.suites) {
    const auto& known = lab_suite_names();
    check(std::find(known.begin(), known.end(), s) != known.end(), lab, "suites", "unknown suite '" + s + "'");
  }
  if (sc.lab.suites.empty()) sc.lab.suites = lab_suite_names();
  check(sc.lab.samples >= 1, lab, "samples", "must be >= 1");
  check(sc.lab.points >= 64 && (sc.lab.points & (sc.lab.points - 1)) == 0, lab, "points",
        "must be a power of two >= 64");

  top.finish();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    Scenario sc = parse_scenario(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
    sc.source = path;
    return sc;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void apply_seed(Scenario& sc, std::uint64_t seed) {
  sc.initial.seed = seed;
  sc.lab.seed = seed;
}

void require_flow_ready(const Scenario& sc) {
  if (sc.initial.preset == "file") {
    std::vector<std::filesystem::path> files{sc.initial.density_file};
    files.insert(files.end(), sc.initial.velocity_files.begin(), sc.initial.velocity_files.end());
    for (const auto& f : files) {
      if (!std::filesystem::exists(f)) throw ParseError("initial data file not found: " + f.string());
    }
  }
  if (!sc.idx.condition_c(sc.dim)) {
    throw ParseError("index (s, p, r) must satisfy condition (C) for a flow run: s > 1 + N/p, or s = 1 + N/p with r = 1");
  }
}

InitialData build_initial_data(const Scenario& sc) {
  require_flow_ready(sc);
  const TorusGrid g(sc.dim, sc.points);
  InitialData d{SpectralField::constant(g, 1.0), VectorField(g), {}, sc.idx};
  const std::string& preset = sc.initial.preset;
  if (preset == "benchmark" || preset == "homogeneous") {
    d = benchmark_datum(sc.points, sc.initial.seed, preset == "benchmark" ? sc.initial.amplitude : 0.0);
    d.idx = sc.idx;
  } else if (preset == "file") {
    auto load = [&](const std::filesystem::path& p) {
      SpectralField f = read_field_file(p);
      if (!(f.grid() == g)) throw ParseError(p.string() + ": grid differs from the scenario grid");
      return f;
    };
    d.rho0 = load(sc.initial.density_file);
    for (int j = 0; j < sc.dim; ++j) d.u0[j] = load(sc.initial.velocity_files[static_cast<std::size_t>(j)]);
  }
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("initial data: ") + e.what());
  }
  return d;
}

}  // namespace inhomo
