#include "inhomo/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "inhomo/bony.hpp"
#include "inhomo/commutator.hpp"
#include "inhomo/elliptic.hpp"
#include "inhomo/error.hpp"
#include "inhomo/parallel.hpp"
#include "inhomo/random_field.hpp"
#include "inhomo/transport.hpp"

namespace inhomo {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json numbers(const std::vector<double>& xs) {
  json j = json::array();
  for (double x : xs) j.push_back(number(x));
  return j;
}

class Checks {
 public:
  void add(std::string name, double value, std::string rel, double threshold) {
    bool ok = false;
    if (rel == "<") ok = value < threshold;
    else if (rel == "<=") ok = value <= threshold;
    else if (rel == ">") ok = value > threshold;
    else if (rel == ">=") ok = value >= threshold;
    out.push_back({std::move(name), value, std::move(rel), threshold, ok});
  }
  std::vector<LabCheck> out;
};

SpectralField sample(const TorusGrid& g, const std::function<double(const Point&)>& fn) {
  return to_spectral(RealField::sample(g, fn));
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// exp(log(contrast) t) with t the random field rescaled to [0, 1].
Coefficient contrast_coefficient(const TorusGrid& g, double contrast, std::uint64_t seed, std::uint64_t stream) {
  const RealField pr = to_physical(random_field(g, {1, 4, 0}, seed, stream));
  const double lo = min_value(pr), hi = max_value(pr);
  RealField a(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::exp(std::log(contrast) * (pr[i] - lo) / (hi - lo));
  return Coefficient(to_spectral(a));
}

SuiteReport elliptic_suite(const LabOptions& o) {
  SuiteReport rep{"elliptic", {}, json::object()};
  Checks c;
  const TorusGrid g(2, o.points);
  const int n = o.samples;

  // a_* ||grad Pi|| <= ||F|| with contrasts spread over [1.5, 10].
  std::vector<double> ratio(static_cast<std::size_t>(n)), contrast(static_cast<std::size_t>(n));
  std::vector<int> iters(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const double target = n == 1 ? 10.0 : 1.5 + 8.5 * i / (n - 1);
    const Coefficient a = contrast_coefficient(g, target, o.seed, 2 * static_cast<std::uint64_t>(i));
    const VectorField F = random_vector_field(g, {1, 12, 0}, o.seed, 2 * static_cast<std::uint64_t>(i) + 1);
    const EllipticSolution s = solve_variable_krylov(a, F, 1e-10, 500);
    const auto k = static_cast<std::size_t>(i);
    ratio[k] = s.converged ? a.a_star() * l2_norm(s.grad_pi) / l2_norm(F) : kInf;
    contrast[k] = a.contrast();
    iters[k] = s.iterations;
  });
  c.add("l2_estimate_max_ratio", max_of(ratio), "<=", 1.0 + 1e-6);
  rep.details["l2_estimate"] = {{"ratio", numbers(ratio)}, {"contrast", numbers(contrast)}, {"iterations", iters}};

  // Krylov against the perturbative iteration where the latter converges.
  const double tol = 1e-9;
  std::vector<double> gap(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const Coefficient a = contrast_coefficient(g, 1.4, o.seed + 1, 2 * static_cast<std::uint64_t>(i));
    const VectorField F = random_vector_field(g, {1, 12, 0}, o.seed + 1, 2 * static_cast<std::uint64_t>(i) + 1);
    const EllipticSolution k = solve_variable_krylov(a, F, tol, 500);
    const EllipticSolution p = solve_variable_perturbative(a, F, tol, 500);
    gap[static_cast<std::size_t>(i)] =
        k.converged && p.converged ? l2_norm(k.grad_pi - p.grad_pi) / (tol * l2_norm(F)) : kInf;
  });
  c.add("krylov_perturbative_gap_over_tol", max_of(gap), "<", 10.0);
  rep.details["solver_agreement"] = {{"tol", tol}, {"gap_over_tol", numbers(gap)}};

  // Manufactured Pi* = sin x1 sin x2 with a = 2.5 + 1.5 cos x1 (contrast 4).
  {
    const SpectralField pi_star = sample(g, [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); });
    const Coefficient a(sample(g, [](const Point& x) { return 2.5 + 1.5 * std::cos(x[0]); }));
    const VectorField gp = gradient(pi_star);
    VectorField F(g);
    for (int j = 0; j < 2; ++j) F[j] = -1.0 * coefficient_product(a, gp[j]);
    const EllipticSolution s = solve_variable_krylov(a, F, 1e-12, 500);
    const double err = l2_norm(s.pi - pi_star);
    c.add("manufactured_l2_error", err, "<", 1e-8);
    c.add("manufactured_cg_iterations", s.iterations, "<", 200);
    rep.details["manufactured"] = {{"contrast", a.contrast()}, {"error", number(err)}, {"iterations", s.iterations}};
  }

  // Besov estimates: fitted exponent of the energy variant over a deviation sweep.
  {
    const DyadicCutoffs cut(g);
    const VectorField F = random_vector_field(g, {1, 10, 0}, o.seed, 1000);
    const BesovIndex idx{3, 2, 1};
    std::vector<EllipticEstimateReport> sweep;
    std::vector<double> interior;
    for (double dev : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const Coefficient a(sample(g, [dev](const Point& x) { return 1 + dev * std::cos(x[0] + 2 * x[1]); }));
      sweep.push_back(verify_besov_elliptic(a, F, idx, 2, EllipticVariant::Energy, cut));
      interior.push_back(verify_besov_elliptic(a, F, idx, 2, EllipticVariant::Interior, cut).ratio);
    }
    const GammaFit fit = fit_elliptic_gamma(sweep);
    c.add("besov_energy_fitted_constant", fit.constant, "<", kInf);
    c.add("besov_interior_max_ratio", max_of(interior), "<", kInf);
    std::vector<double> energy;
    for (const auto& r : sweep) energy.push_back(r.ratio);
    rep.details["besov"] = {{"gamma", fit.gamma},
                            {"constant", number(fit.constant)},
                            {"energy_ratio", numbers(energy)},
                            {"interior_ratio", numbers(interior)}};
  }
  rep.checks = std::move(c.out);
  return rep;
}

SuiteReport commutator_suite(const LabOptions& o) {
  SuiteReport rep{"commutator", {}, json::array()};
  Checks c;
  const std::vector<CommutatorCase> cases{{CommutatorLemma::Com, {3, 2, 1}, 1.0},
                                          {CommutatorLemma::Com, {3, 2, 1}, 2.0},
                                          {CommutatorLemma::Com, {2, 4, 1}, 0.5},
                                          {CommutatorLemma::Combis, {3, 2, 1}, 1.0}};
  for (const auto& cc : cases) {
    const CommutatorSuiteResult r = run_commutator_suite(cc, o.samples, {o.points, 2 * o.points}, o.seed);
    char tag[96];
    std::snprintf(tag, sizeof tag, "%s(s=%g,p=%g,r=%g,varsigma=%g)", cc.lemma == CommutatorLemma::Com ? "com" : "combis",
                  cc.idx.s, cc.idx.p, cc.idx.r, cc.varsigma);
    const std::string t(tag);
    c.add(t + ".finite", r.finite ? 1.0 : 0.0, ">=", 1.0);
    c.add(t + ".refinement_factor", r.max_refinement_factor, "<", 2.0);
    c.add(t + ".ensemble_spread", r.ensemble_spread, "<", 2.0);
    json norms = json::array();
    for (const auto& row : r.norms) norms.push_back(numbers(row));
    rep.details.push_back({{"case", t}, {"grids", r.grids}, {"ell_r_norms", norms}});
  }
  rep.checks = std::move(c.out);
  return rep;
}

SuiteReport weighted_bernstein_suite(const LabOptions& o) {
  SuiteReport rep{"weighted-bernstein", {}, json::object()};
  Checks c;
  const BernsteinSuiteResult r = run_weighted_bernstein_suite({1.5, 2, 3, 4}, {4, 8}, 2.0, o.samples, o.points, o.seed);
  json per_p = json::array();
  for (std::size_t i = 0; i < r.ps.size(); ++i) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "p=%g", r.ps[i]);
    const std::string t(tag);
    c.add(t + ".identity_residual", r.residual_max[i], "<",
          r.ps[i] >= 2.0 ? kBernsteinResidualTol : kBernsteinResidualTolSmallP);
    c.add(t + ".min_lower_ratio", *std::min_element(r.min_ratio[i].begin(), r.min_ratio[i].end()), ">", 0.0);
    c.add(t + ".radius_stability", r.stability_factor[i], "<", kBernsteinStabilityFactor);
    per_p.push_back({{"p", r.ps[i]}, {"min_ratio_by_r1", numbers(r.min_ratio[i])}});
  }
  rep.details = {{"r1", r.r1s}, {"r2_over_r1", r.r2_over_r1}, {"per_p", per_p}};
  rep.checks = std::move(c.out);
  return rep;
}

SuiteReport bony_suite(const LabOptions& o) {
  SuiteReport rep{"bony", {}, json::object()};
  Checks c;
  const TorusGrid g(2, o.points);
  const DyadicCutoffs cut(g);
  const int n = o.samples;
  const double kmax = g.dealias_cutoff();
  std::vector<double> split(static_cast<std::size_t>(n)), unity(static_cast<std::size_t>(n)),
      idem(static_cast<std::size_t>(n)), orth(static_cast<std::size_t>(n)), tame(static_cast<std::size_t>(n)),
      para(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n)),
      comp(static_cast<std::size_t>(n));
  const ScalarMap recip{[](double x) { return 1.0 / x; }, 0.25, 4.0};
  parallel_for(n, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    const std::uint64_t s = 8 * static_cast<std::uint64_t>(i);
    SpectralField u = random_field(g, {0, kmax, 0}, o.seed, s);
    const SpectralField v = random_field(g, {0, kmax, 0}, o.seed, s + 1);
    u.coeffs()[0] = 0.7;
    const SpectralField uv = product(u, v);
    const BonySplit b = bony_decompose(u, v, cut);
    split[k] = l2_norm(b.t_uv + b.t_vu + b.remainder - uv) / l2_norm(uv);

    SpectralField sum(g);
    for (const auto& blk : dyadic_blocks(u, cut)) sum += blk;
    unity[k] = l2_norm(sum - u) / l2_norm(u);

    const VectorField w = random_vector_field(g, {0, kmax, 0}, o.seed, s + 2);
    const VectorField z = random_vector_field(g, {0, kmax, 0}, o.seed, s + 4);
    const VectorField pw = leray_project(w);
    idem[k] = l2_norm(leray_project(pw) - pw) / l2_norm(w);
    orth[k] = std::abs(inner_product(pw, potential_part(z))) / (l2_norm(w) * l2_norm(z));

    const SpectralField x = random_field(g, {1, 12, 1}, o.seed, s + 6);
    const SpectralField y = random_field(g, {1, 12, 1}, o.seed, s + 7);
    tame[k] = tame_bound_check(x, y, {2, 2, 1}, cut);
    para[k] = paraproduct_bound_check(x, y, {1, 2, 1}, cut);
    neg[k] = negative_paraproduct_check(x, y, {1, 2, 1}, -0.5, cut);
    const SpectralField a = SpectralField::constant(g, 1.0) + (0.5 / std::max(1e-300, sup_norm_refined(x))) * x;
    comp[k] = composition_check(recip, a, {2, 2, 1}, cut);
  });
  c.add("bony_reconstruction_rel_error", max_of(split), "<", 1e-12);
  c.add("partition_of_unity_rel_error", max_of(unity), "<", 1e-12);
  c.add("leray_idempotence_rel_error", max_of(idem), "<", 1e-12);
  c.add("leray_orthogonality", max_of(orth), "<", 1e-12);
  c.add("tame_max_ratio", max_of(tame), "<", kInf);
  c.add("paraproduct_max_ratio", max_of(para), "<", kInf);
  c.add("negative_paraproduct_max_ratio", max_of(neg), "<", kInf);
  c.add("composition_max_ratio", max_of(comp), "<", kInf);
  rep.details = {{"tame_ratio", numbers(tame)}, {"paraproduct_ratio", numbers(para)},
                 {"negative_paraproduct_ratio", numbers(neg)}, {"composition_ratio", numbers(comp)}};
  rep.checks = std::move(c.out);
  return rep;
}

SuiteReport bernstein_suite(const LabOptions& o) {
  SuiteReport rep{"bernstein", {}, json::object()};
  Checks c;
  const TorusGrid g(2, o.points);
  const DyadicCutoffs cut(g);
  const int n = o.samples;
  const BernsteinRegion annulus{BernsteinRegion::Kind::Annulus, 0.75, 8.0 / 3.0};
  const BernsteinRegion ball{BernsteinRegion::Kind::Ball, 0.0, 4.0 / 3.0};
  std::vector<double> lambdas;
  for (double l = 2; 8.0 / 3.0 * l <= g.dealias_cutoff(); l *= 2) lambdas.push_back(l);

  // Parseval pins ||grad f||_2 / (lambda ||f||_2) to [3/4, 8/3] on the annulus.
  double lo22 = kInf, hi22 = 0.0, ball_excess = 0.0;
  std::vector<double> max44;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double l = lambdas[li];
    std::vector<double> r22(static_cast<std::size_t>(n)), r44(static_cast<std::size_t>(n)), rb(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
      const auto k = static_cast<std::size_t>(i);
      const std::uint64_t s = 4 * static_cast<std::uint64_t>(i) + 1000 * li;
      const SpectralField f = random_field(g, {0.75 * l, 8.0 / 3.0 * l, 0}, o.seed, s);
      r22[k] = bernstein_check(f, 2, 2, 1, l, annulus).ratio;
      r44[k] = bernstein_check(f, 4, 4, 1, l, annulus).ratio;
      const SpectralField h = random_field(g, {0, 4.0 / 3.0 * l, 0}, o.seed, s + 1);
      rb[k] = bernstein_check(h, 2, kInf, 0, l, ball).ratio;
    });
    // Cauchy-Schwarz over the modes of the ball bounds the L2 -> Linf ratio.
    const double R = 4.0 / 3.0 * l;
    int count = 0;
    const int m = static_cast<int>(R) + 1;
    for (int a = -m; a <= m; ++a) {
      for (int b = -m; b <= m; ++b) count += a * a + b * b <= R * R ? 1 : 0;
    }
    const double bound = std::sqrt(static_cast<double>(count)) / (2 * std::acos(-1.0)) / l;
    for (double x : r22) {
      lo22 = std::min(lo22, x);
      hi22 = std::max(hi22, x);
    }
    ball_excess = std::max(ball_excess, max_of(rb) / bound);
    max44.push_back(max_of(r44));
  }
  c.add("annulus_l2_ratio_min", lo22, ">=", 0.75 - 1e-12);
  c.add("annulus_l2_ratio_max", hi22, "<=", 8.0 / 3.0 + 1e-12);
  c.add("ball_l2_linf_ratio_over_bound", ball_excess, "<=", 1.0 + 1e-12);
  const double spread44 = max_of(max44) / *std::min_element(max44.begin(), max44.end());
  c.add("annulus_l4_ratio_scale_stability", spread44, "<", 2.0);

  std::vector<double> emb(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const SpectralField f = random_field(g, {1, static_cast<double>(g.dealias_cutoff()), 2}, o.seed, 50000 + i);
    emb[static_cast<std::size_t>(i)] = embedding_check(f, {2, 2, 1}, {1, kInf, 1}, cut).value_or(0.0);
  });
  c.add("embedding_max_ratio", max_of(emb), "<", kInf);
  rep.details = {{"lambdas", lambdas}, {"annulus_l4_max_ratio", numbers(max44)}, {"embedding_ratio", numbers(emb)}};
  rep.checks = std::move(c.out);
  return rep;
}

SuiteReport transport_suite(const LabOptions& o) {
  SuiteReport rep{"transport", {}, json::object()};
  Checks c;
  const TorusGrid g(2, o.points);
  const DyadicCutoffs cut(g);
  const double h = g.spacing();

  auto constant_velocity = [&](double v1, double v2) {
    VectorField v(g);
    v[0] = SpectralField::constant(g, v1);
    v[1] = SpectralField::constant(g, v2);
    return VelocityProvider([v](double) { return v; });
  };
  auto translation_error = [&](int k, double dt) {
    TransportProblem pb{sample(g, [k](const Point& x) { return std::cos(k * x[0]); }), constant_velocity(1, 0), {}, 1.0,
                        true};
    const SpectralField exact = sample(g, [k](const Point& x) { return std::cos(k * (x[0] - 1.0)); });
    return l2_norm(advect(pb, dt).states.back() - exact);
  };
  const double e1 = translation_error(3, 0.5 * h), e2 = translation_error(3, 0.25 * h);
  c.add("translation_dt_halving_ratio", e1 / e2, ">=", 8.0);
  const double e_abs = translation_error(1, 2 * std::acos(-1.0) / 512);
  c.add("translation_l2_error", e_abs, "<", 1e-8);

  // L2 drift under divergence-free shear (sin x2, 0), resolved on any grid here.
  VectorField shear(g);
  shear[0] = sample(g, [](const Point& x) { return std::sin(x[1]); });
  const VelocityProvider vel = [shear](double) { return shear; };
  const SpectralField f0 = random_field(g, {1, 2, 0}, o.seed, 7);
  TransportProblem pb{f0, vel, {}, 1.0, true};
  const TransportTrajectory tr = advect(pb, 0.5 * h, 8);
  double drift = 0.0;
  for (const auto& f : tr.states) drift = std::max(drift, std::abs(l2_norm(f) / l2_norm(f0) - 1.0));
  c.add("shear_l2_drift_per_unit_time", drift / pb.t_end, "<", 1e-6);

  // Estimate monitor: constant finite and insensitive to dt.
  const SpectralField g0 = sample(g, [](const Point& x) { return std::cos(x[0]) + 0.5 * std::sin(2 * x[1]); });
  TransportProblem mp{g0, vel, {}, 2.0, true};
  const BesovIndex idx{1.5, 2, 1};
  const auto m1 = transport_estimate_monitor(advect(mp, 0.5 * h, 4), vel, {}, idx, cut);
  const auto m2 = transport_estimate_monitor(advect(mp, 0.25 * h, 8), vel, {}, idx, cut);
  c.add("monitor_fitted_constant", m1.fitted_constant, "<", kInf);
  c.add("monitor_dt_halving_change", std::abs(m1.fitted_constant / m2.fitted_constant - 1.0), "<", 1e-3);
  rep.details = {{"translation_errors", numbers({e1, e2})},
                 {"translation_abs_error", number(e_abs)},
                 {"shear_drift", number(drift)},
                 {"monitor_constants", numbers({m1.fitted_constant, m2.fitted_constant})}};
  rep.checks = std::move(c.out);
  return rep;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LabCheck& c) { return c.pass; });
}

std::vector<std::string> SuiteReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(suite + "/" + c.name);
  }
  return out;
}

SuiteReport run_lab_suite(const std::string& name, const LabOptions& opts) {
  if (opts.samples < 1 || opts.points < 64) throw DomainError("lab needs samples >= 1 and points >= 64");
  if (name == "elliptic") return elliptic_suite(opts);
  if (name == "commutator") return commutator_suite(opts);
  if (name == "weighted-bernstein") return weighted_bernstein_suite(opts);
  if (name == "bony") return bony_suite(opts);
  if (name == "bernstein") return bernstein_suite(opts);
  if (name == "transport") return transport_suite(opts);
  throw DomainError("unknown lab suite '" + name + "'");
}

json suite_json(const SuiteReport& r, const LabOptions& opts) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"relation", c.relation},
                      {"threshold", number(c.threshold)},
                      {"pass", c.pass}});
  }
  return {{"suite", r.suite},
          {"samples", opts.samples},
          {"points", opts.points},
          {"seed", opts.seed},
          {"pass", r.pass()},
          {"checks", checks},
          {"details", r.details}};
}

std::string lab_summary_csv(const std::vector<SuiteReport>& reports) {
  std::ostringstream os;
  os << "suite,check,value,threshold,verdict\n";
  char buf[64];
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      os << r.suite << ',' << c.name << ',';
      std::snprintf(buf, sizeof buf, "%.6g", c.value);
      os << buf << ',' << c.relation;
      std::snprintf(buf, sizeof buf, "%.6g", c.threshold);
      os << buf << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
    }
  }
  return os.str();
}

}  // namespace inhomo
