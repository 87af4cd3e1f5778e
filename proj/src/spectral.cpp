#include "inhomo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "inhomo/error.hpp"
#include "inhomo/kernels.hpp"

namespace inhomo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const double* as_doubles(const Complex* c) { return reinterpret_cast<const double*>(c); }
double* as_doubles(Complex* c) { return reinterpret_cast<double*>(c); }

int wrap_index(int k, int n) { return k >= 0 ? k : k + n; }
int signed_wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

std::shared_ptr<GridTables> build_tables(const TorusGrid& grid) {
  auto t = std::make_shared<GridTables>(GridTables{grid, {}, {}, {}, {}, {}, {}, {}, {}});
  const int n = grid.points();
  const int dim = grid.dim();
  const int half = n / 2 + 1;
  const std::size_t size = grid.spectral_size();
  for (auto& a : t->k) a.assign(size, 0.0);
  t->k_norm.assign(size, 0.0);
  t->k_sq.assign(size, 0.0);
  t->inv_k_sq.assign(size, 0.0);
  t->parseval_weight.assign(size, 0.0);
  t->nyquist_mask.assign(size, 0.0);
  t->dealias_mask.assign(size, 0.0);
  t->index_k.assign(size, {0, 0, 0});
  const int cutoff = grid.dealias_cutoff();

  const int outer1 = n;
  const int outer2 = dim == 3 ? n : 1;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < outer1; ++i1) {
    for (int i2 = 0; i2 < outer2; ++i2) {
      for (int j = 0; j < half; ++j, ++idx) {
        std::array<int, 3> k{};
        k[0] = signed_wavenumber(i1, n);
        if (dim == 3) {
          k[1] = signed_wavenumber(i2, n);
          k[2] = j;
        } else {
          k[1] = j;
        }
        t->index_k[idx] = k;
        bool nyquist = false;
        bool kept = true;
        double ksq = 0.0;
        for (int a = 0; a < dim; ++a) {
          if (std::abs(k[a]) == n / 2) nyquist = true;
          if (std::abs(k[a]) > cutoff) kept = false;
          ksq += static_cast<double>(k[a]) * k[a];
        }
        if (nyquist) continue;
        for (int a = 0; a < dim; ++a) t->k[a][idx] = k[a];
        t->k_sq[idx] = ksq;
        t->k_norm[idx] = std::sqrt(ksq);
        t->inv_k_sq[idx] = ksq > 0 ? 1.0 / ksq : 0.0;
        t->nyquist_mask[idx] = 1.0;
        t->dealias_mask[idx] = kept ? 1.0 : 0.0;
        t->parseval_weight[idx] = k[dim - 1] == 0 ? 1.0 : 2.0;
      }
    }
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------- TorusGrid

TorusGrid::TorusGrid(int dim, int points_per_axis) : dim_(dim), n_(points_per_axis) {
  if (dim != 2 && dim != 3) throw DomainError("torus dimension must be 2 or 3, got " + std::to_string(dim));
  if (points_per_axis < 16 || (points_per_axis & (points_per_axis - 1)) != 0) {
    throw DomainError("points per axis must be a power of two >= 16, got " + std::to_string(points_per_axis));
  }
}

std::size_t TorusGrid::physical_size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim_; ++i) s *= static_cast<std::size_t>(n_);
  return s;
}

std::size_t TorusGrid::spectral_size() const { return physical_size() / n_ * (n_ / 2 + 1); }

double TorusGrid::spacing() const { return kTwoPi / n_; }

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double TorusGrid::volume() const { return std::pow(kTwoPi, dim_); }

double TorusGrid::max_wavenumber() const { return std::sqrt(static_cast<double>(dim_)) * (n_ / 2); }

std::shared_ptr<const GridTables> grid_tables(const TorusGrid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<GridTables>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(grid.dim(), grid.points());
  auto& slot = cache[key];
  if (!slot) slot = build_tables(grid);
  return slot;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) {
    throw ShapeError(std::string(what) + ": grid mismatch (" + std::to_string(a.dim()) + "D/" +
                     std::to_string(a.points()) + " vs " + std::to_string(b.dim()) + "D/" +
                     std::to_string(b.points()) + ")");
  }
}

// ---------------------------------------------------------------- RealField

RealField::RealField(const TorusGrid& grid) : grid_(grid), values_(grid.physical_size(), 0.0) {}

RealField::RealField(const TorusGrid& grid, AlignedVector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid.physical_size()) {
    throw ShapeError("real field has " + std::to_string(values_.size()) + " values, grid needs " +
                     std::to_string(grid.physical_size()));
  }
}

Point RealField::coordinates(std::size_t i) const {
  const int n = grid_.points();
  const double h = grid_.spacing();
  Point x{0.0, 0.0, 0.0};
  for (int a = grid_.dim() - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(i % n);
    i /= n;
  }
  return x;
}

RealField RealField::sample(const TorusGrid& grid, const std::function<double(const Point&)>& fn) {
  RealField g(grid);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = fn(g.coordinates(i));
  return g;
}

// ------------------------------------------------------------ SpectralField

SpectralField::SpectralField(const TorusGrid& grid) : grid_(grid), coeffs_(grid.spectral_size(), Complex(0.0, 0.0)) {}

SpectralField SpectralField::constant(const TorusGrid& grid, double c) {
  SpectralField f(grid);
  f.coeffs_[0] = c;
  return f;
}

std::size_t SpectralField::index_of(const std::array<int, 3>& k) const {
  const int n = grid_.points();
  const int half = n / 2 + 1;
  for (int a = 0; a < grid_.dim(); ++a) {
    if (std::abs(k[a]) >= n / 2) throw DomainError("wavevector component outside the unaliased range");
  }
  if (grid_.dim() == 2) {
    return static_cast<std::size_t>(wrap_index(k[0], n)) * half + static_cast<std::size_t>(k[1]);
  }
  return (static_cast<std::size_t>(wrap_index(k[0], n)) * n + static_cast<std::size_t>(wrap_index(k[1], n))) * half +
         static_cast<std::size_t>(k[2]);
}

Complex SpectralField::coefficient(const std::array<int, 3>& k) const {
  const int last = grid_.dim() - 1;
  if (k[last] < 0) {
    std::array<int, 3> m{-k[0], -k[1], -k[2]};
    return std::conj(coeffs_[index_of(m)]);
  }
  return coeffs_[index_of(k)];
}

void SpectralField::set_coefficient(const std::array<int, 3>& k, Complex value) {
  const int last = grid_.dim() - 1;
  std::array<int, 3> kk = k;
  if (kk[last] < 0) {
    kk = {-k[0], -k[1], -k[2]};
    value = std::conj(value);
  }
  if (kk[last] == 0) {
    const std::array<int, 3> m{-kk[0], -kk[1], -kk[2]};
    if (m == kk) value = Complex(value.real(), 0.0);
    coeffs_[index_of(m)] = std::conj(value);
  }
  coeffs_[index_of(kk)] = value;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField +=");
  kernels::active().axpy(1.0, as_doubles(o.coeffs_.data()), as_doubles(coeffs_.data()), 2 * coeffs_.size());
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField -=");
  kernels::active().axpy(-1.0, as_doubles(o.coeffs_.data()), as_doubles(coeffs_.data()), 2 * coeffs_.size());
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double alpha, const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField axpy");
  kernels::active().axpy(alpha, as_doubles(o.coeffs_.data()), as_doubles(coeffs_.data()), 2 * coeffs_.size());
  return *this;
}

// -------------------------------------------------------------- VectorField

VectorField::VectorField(const TorusGrid& grid) {
  for (int i = 0; i < grid.dim(); ++i) components_.emplace_back(grid);
}

VectorField::VectorField(std::vector<SpectralField> components) : components_(std::move(components)) {
  if (components_.empty()) throw ShapeError("vector field needs at least one component");
  for (const auto& c : components_) require_same_grid(c.grid(), components_.front().grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.dim() != dim()) throw ShapeError("vector field component count mismatch");
  for (int i = 0; i < dim(); ++i) (*this)[i] += o[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.dim() != dim()) throw ShapeError("vector field component count mismatch");
  for (int i = 0; i < dim(); ++i) (*this)[i] -= o[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

VectorField& VectorField::axpy(double alpha, const VectorField& o) {
  if (o.dim() != dim()) throw ShapeError("vector field component count mismatch");
  for (int i = 0; i < dim(); ++i) (*this)[i].axpy(alpha, o[i]);
  return *this;
}

// --------------------------------------------------------------- transforms

RealField to_physical(const SpectralField& f) {
  const TorusGrid& grid = f.grid();
  AlignedVector<Complex> scratch(f.coeffs().begin(), f.coeffs().end());
  AlignedVector<double> out(grid.physical_size());
  detail::fft_inverse(grid, scratch.data(), out.data());
  return RealField(grid, std::move(out));
}

SpectralField to_spectral(const RealField& g) {
  const TorusGrid& grid = g.grid();
  SpectralField f(grid);
  detail::fft_forward(grid, g.values().data(), f.coeffs().data());
  const auto tables = grid_tables(grid);
  const double scale = 1.0 / static_cast<double>(grid.physical_size());
  auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= scale * tables->nyquist_mask[i];
  return f;
}

std::vector<RealField> to_physical(const VectorField& v) {
  std::vector<RealField> out;
  out.reserve(static_cast<std::size_t>(v.dim()));
  for (int i = 0; i < v.dim(); ++i) out.push_back(to_physical(v[i]));
  return out;
}

// ---------------------------------------------------------------- operators

SpectralField partial(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw ShapeError("derivative axis out of range");
  const auto tables = grid_tables(f.grid());
  SpectralField out(f.grid());
  kernels::active().scale_complex_imag(as_doubles(f.coeffs().data()), tables->k[axis].data(),
                                       as_doubles(out.coeffs().data()), f.size());
  return out;
}

VectorField gradient(const SpectralField& f) {
  std::vector<SpectralField> comps;
  for (int a = 0; a < f.grid().dim(); ++a) comps.push_back(partial(f, a));
  return VectorField(std::move(comps));
}

SpectralField divergence(const VectorField& v) {
  if (v.dim() != v.grid().dim()) throw ShapeError("divergence needs dim components");
  SpectralField out = partial(v[0], 0);
  for (int a = 1; a < v.dim(); ++a) out += partial(v[a], a);
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const auto tables = grid_tables(f.grid());
  SpectralField out(f.grid());
  kernels::active().scale_complex(as_doubles(f.coeffs().data()), tables->k_sq.data(), as_doubles(out.coeffs().data()),
                                  f.size());
  out *= -1.0;
  return out;
}

SpectralField curl2d(const VectorField& v) {
  if (v.grid().dim() != 2 || v.dim() != 2) throw ShapeError("curl2d needs a 2D vector field");
  return partial(v[1], 0) - partial(v[0], 1);
}

VectorField curl(const VectorField& v) {
  if (v.grid().dim() == 2) return VectorField(std::vector<SpectralField>{curl2d(v)});
  if (v.dim() != 3) throw ShapeError("curl needs 3 components in 3D");
  return VectorField(std::vector<SpectralField>{partial(v[2], 1) - partial(v[1], 2), partial(v[0], 2) - partial(v[2], 0),
                                                partial(v[1], 0) - partial(v[0], 1)});
}

SpectralField apply_mask(const SpectralField& f, std::span<const double> mask) {
  if (mask.size() != f.size()) throw ShapeError("mask size does not match spectral field");
  SpectralField out(f.grid());
  kernels::active().scale_complex(as_doubles(f.coeffs().data()), mask.data(), as_doubles(out.coeffs().data()), f.size());
  return out;
}

void apply_mask_inplace(SpectralField& f, std::span<const double> mask) {
  if (mask.size() != f.size()) throw ShapeError("mask size does not match spectral field");
  kernels::active().scale_complex(as_doubles(f.coeffs().data()), mask.data(), as_doubles(f.coeffs().data()), f.size());
}

SpectralField fourier_multiplier(const SpectralField& f, const std::function<double(const Wavevector&)>& symbol,
                                 double value_at_zero) {
  const auto tables = grid_tables(f.grid());
  AlignedVector<double> sym(f.size(), 0.0);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    if (tables->nyquist_mask[i] == 0.0) continue;
    if (i == 0) {
      sym[i] = value_at_zero;
    } else {
      sym[i] = symbol({tables->k[0][i], tables->k[1][i], tables->k[2][i]});
    }
    if (!std::isfinite(sym[i])) throw DomainError("Fourier multiplier symbol is not finite at a grid wavevector");
  }
  return apply_mask(f, sym);
}

SpectralField inverse_minus_laplacian(const SpectralField& f) {
  return apply_mask(f, grid_tables(f.grid())->inv_k_sq);
}

VectorField potential_part(const VectorField& v) {
  const TorusGrid& grid = v.grid();
  if (v.dim() != grid.dim()) throw ShapeError("projection needs dim components");
  const auto tables = grid_tables(grid);
  // Q v = k (k . v) / |k|^2
  SpectralField kdotv(grid);
  const std::size_t n = kdotv.size();
  auto acc = kdotv.coeffs();
  for (int a = 0; a < grid.dim(); ++a) {
    auto c = v[a].coeffs();
    const auto& ka = tables->k[a];
    for (std::size_t i = 0; i < n; ++i) acc[i] += ka[i] * c[i];
  }
  for (std::size_t i = 0; i < n; ++i) acc[i] *= tables->inv_k_sq[i];
  VectorField out(grid);
  for (int a = 0; a < grid.dim(); ++a) {
    kernels::active().scale_complex(as_doubles(kdotv.coeffs().data()), tables->k[a].data(),
                                    as_doubles(out[a].coeffs().data()), n);
  }
  return out;
}

VectorField leray_project(const VectorField& v) { return v - potential_part(v); }

SpectralField dealias(const SpectralField& f) { return apply_mask(f, grid_tables(f.grid())->dealias_mask); }

VectorField dealias(const VectorField& v) {
  std::vector<SpectralField> comps;
  for (int a = 0; a < v.dim(); ++a) comps.push_back(dealias(v[a]));
  return VectorField(std::move(comps));
}

SpectralField product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "product");
  const RealField pu = to_physical(dealias(u));
  const RealField pv = to_physical(dealias(v));
  RealField w(u.grid());
  kernels::active().mul(pu.values().data(), pv.values().data(), w.values().data(), w.size());
  return dealias(to_spectral(w));
}

// -------------------------------------------------------------------- norms

double l2_norm(const SpectralField& f) {
  const auto tables = grid_tables(f.grid());
  const double s =
      kernels::active().weighted_norm2_complex(as_doubles(f.coeffs().data()), tables->parseval_weight.data(), f.size());
  return std::sqrt(f.grid().volume() * s);
}

double l2_norm(const VectorField& v) {
  double s = 0.0;
  for (int a = 0; a < v.dim(); ++a) {
    const double n = l2_norm(v[a]);
    s += n * n;
  }
  return std::sqrt(s);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const auto tables = grid_tables(f.grid());
  double s = 0.0;
  auto a = f.coeffs();
  auto b = g.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += tables->parseval_weight[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  }
  return f.grid().volume() * s;
}

double inner_product(const VectorField& v, const VectorField& w) {
  double s = 0.0;
  for (int a = 0; a < v.dim(); ++a) s += inner_product(v[a], w[a]);
  return s;
}

double lp_norm(const RealField& g, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
  const auto& k = kernels::active();
  const auto vals = g.values();
  if (std::isinf(p)) return k.max_abs(vals.data(), vals.size());
  if (p == 2.0) return std::sqrt(k.dot(vals.data(), vals.data(), vals.size()) * g.grid().cell_volume());
  double s = 0.0;
  if (p == 1.0) {
    for (double x : vals) s += std::abs(x);
    return s * g.grid().cell_volume();
  }
  for (double x : vals) s += std::pow(std::abs(x), p);
  return std::pow(s * g.grid().cell_volume(), 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) { return lp_norm(to_physical(f), p); }

double lp_norm(const VectorField& v, double p) { return lp_norm(magnitude(to_physical(v)), p); }

double max_value(const RealField& g) { return *std::max_element(g.values().begin(), g.values().end()); }

double min_value(const RealField& g) { return *std::min_element(g.values().begin(), g.values().end()); }

RealField magnitude(const std::vector<RealField>& comps) {
  if (comps.empty()) throw ShapeError("magnitude of an empty component list");
  RealField out(comps.front().grid());
  for (const auto& c : comps) {
    kernels::active().fma_acc(c.values().data(), c.values().data(), out.values().data(), out.size());
  }
  for (auto& x : out.values()) x = std::sqrt(x);
  return out;
}

RealField gradient_magnitude(const VectorField& v) {
  RealField out(v.grid());
  for (int i = 0; i < v.dim(); ++i) {
    for (int j = 0; j < v.grid().dim(); ++j) {
      const RealField d = to_physical(partial(v[i], j));
      kernels::active().fma_acc(d.values().data(), d.values().data(), out.values().data(), out.size());
    }
  }
  for (auto& x : out.values()) x = std::sqrt(x);
  return out;
}

// ------------------------------------------------------- point evaluation

namespace {

struct LocalJet {
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

// Fourier series with its first and second derivatives at x. Only entries
// above a relative threshold are visited.
LocalJet evaluate_jet(const SpectralField& f, const GridTables& t, const std::vector<std::size_t>& active,
                      const Point& x) {
  const int dim = f.grid().dim();
  const int n = f.grid().points();
  std::array<std::vector<Complex>, 3> phase;
  for (int a = 0; a < dim; ++a) {
    phase[a].resize(static_cast<std::size_t>(n));
    for (int k = -n / 2; k < n / 2; ++k) phase[a][static_cast<std::size_t>(k + n / 2)] = std::polar(1.0, k * x[a]);
  }
  LocalJet jet;
  auto c = f.coeffs();
  for (std::size_t idx : active) {
    const auto& k = t.index_k[idx];
    Complex e(1.0, 0.0);
    for (int a = 0; a < dim; ++a) e *= phase[a][static_cast<std::size_t>(k[a] + n / 2)];
    const Complex term = t.parseval_weight[idx] * c[idx] * e;
    jet.value += term.real();
    for (int a = 0; a < dim; ++a) {
      jet.grad[a] -= k[a] * term.imag();
      for (int b = 0; b < dim; ++b) jet.hess[a][b] -= static_cast<double>(k[a]) * k[b] * term.real();
    }
  }
  return jet;
}

std::vector<std::size_t> active_entries(const SpectralField& f, const GridTables& t) {
  double cmax = 0.0;
  for (auto c : f.coeffs()) cmax = std::max(cmax, std::abs(c));
  std::vector<std::size_t> active;
  auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (t.parseval_weight[i] > 0 && std::abs(c[i]) > 1e-17 * cmax) active.push_back(i);
  }
  return active;
}

// Solves H d = g for symmetric H of size dim; returns false if singular.
bool solve_small(int dim, const std::array<std::array<double, 3>, 3>& H, const std::array<double, 3>& g,
                 std::array<double, 3>& d) {
  if (dim == 2) {
    const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
    if (std::abs(det) < 1e-300) return false;
    d[0] = (g[0] * H[1][1] - g[1] * H[0][1]) / det;
    d[1] = (H[0][0] * g[1] - H[1][0] * g[0]) / det;
    return true;
  }
  const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                     H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                     H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
  if (std::abs(det) < 1e-300) return false;
  for (int c = 0; c < 3; ++c) {
    auto M = H;
    for (int r = 0; r < 3; ++r) M[r][c] = g[r];
    d[c] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
            M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
           det;
  }
  return true;
}

}  // namespace

double evaluate(const SpectralField& f, const Point& x) {
  const auto tables = grid_tables(f.grid());
  return evaluate_jet(f, *tables, active_entries(f, *tables), x).value;
}

double sup_norm_refined(const SpectralField& f, int candidates) {
  const RealField g = to_physical(f);
  const TorusGrid& grid = f.grid();
  const int n = grid.points();
  const int dim = grid.dim();
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(g[a]) > std::abs(g[b]); });

  auto is_local_max = [&](std::size_t i) {
    std::array<int, 3> idx{};
    std::size_t r = i;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % n);
      r /= n;
    }
    for (int a = 0; a < dim; ++a) {
      for (int s : {-1, 1}) {
        auto j = idx;
        j[a] = (j[a] + s + n) % n;
        std::size_t lin = 0;
        for (int b = 0; b < dim; ++b) lin = lin * n + static_cast<std::size_t>(j[b]);
        if (std::abs(g[lin]) > std::abs(g[i])) return false;
      }
    }
    return true;
  };

  const auto tables = grid_tables(grid);
  const auto active = active_entries(f, *tables);
  double best = order.empty() ? 0.0 : std::abs(g[order.front()]);
  int used = 0;
  for (std::size_t r = 0; r < order.size() && used < candidates; ++r) {
    const std::size_t i = order[r];
    if (!is_local_max(i)) continue;
    ++used;
    Point x = g.coordinates(i);
    const double sign = g[i] >= 0 ? 1.0 : -1.0;
    double current = std::abs(g[i]);
    for (int it = 0; it < 8; ++it) {
      const LocalJet jet = evaluate_jet(f, *tables, active, x);
      current = std::max(current, sign * jet.value);
      std::array<double, 3> d{};
      if (!solve_small(dim, jet.hess, jet.grad, d)) break;
      double step = 0.0;
      for (int a = 0; a < dim; ++a) step += d[a] * d[a];
      if (std::sqrt(step) > grid.spacing()) break;
      Point trial = x;
      for (int a = 0; a < dim; ++a) trial[a] -= d[a];
      const double v = sign * evaluate_jet(f, *tables, active, trial).value;
      if (v < current) break;
      current = v;
      x = trial;
      if (std::sqrt(step) < 1e-13) break;
    }
    best = std::max(best, current);
  }
  return best;
}

bool spectrum_within(const SpectralField& f, double inner, double outer, double rel_tol) {
  const auto tables = grid_tables(f.grid());
  auto c = f.coeffs();
  double cmax = 0.0;
  for (auto x : c) cmax = std::max(cmax, std::abs(x));
  if (cmax == 0.0) return true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = tables->k_norm[i];
    if ((k < inner || k > outer) && std::abs(c[i]) > rel_tol * cmax) return false;
  }
  return true;
}

}  // namespace inhomo
