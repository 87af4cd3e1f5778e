#pragma once

// Real-to-complex spectral representation of periodic fields on the torus
// [0, 2pi)^N together with exact spectral differential operators, Fourier
// multipliers and the Leray projector.
//
// Coefficient convention: f(x) = sum_k c_k exp(i k.x), so the k = 0 coefficient
// is the mean of f. Only the half spectrum (last axis k_N >= 0) is stored;
// Hermitian symmetry supplies the rest. Coefficients on the Nyquist planes
// (|k_i| = n/2 on any axis) are kept at zero.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace inhomo {

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
  using value_type = T;
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) {}
  T* allocate(std::size_t n) {
    const std::size_t bytes = ((n * sizeof(T) + Align - 1) / Align) * Align;
    void* p = std::aligned_alloc(Align, bytes == 0 ? Align : bytes);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { std::free(p); }
  template <class U>
  bool operator==(const AlignedAllocator<U, Align>&) const {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

using Complex = std::complex<double>;
using Wavevector = std::array<double, 3>;
using Point = std::array<double, 3>;

class TorusGrid {
 public:
  TorusGrid(int dim, int points_per_axis);

  int dim() const { return dim_; }
  int points() const { return n_; }
  std::size_t physical_size() const;
  std::size_t spectral_size() const;
  double spacing() const;
  double cell_volume() const;
  double volume() const;
  // Largest |k_i| kept by the 2/3 rule.
  int dealias_cutoff() const { return (n_ - 1) / 3; }
  // sqrt(N) * n/2, the Euclidean length of the grid corner wavevector.
  double max_wavenumber() const;

  bool operator==(const TorusGrid&) const = default;

 private:
  int dim_;
  int n_;
};

// Per-grid wavevector tables shared by all fields on the grid.
struct GridTables {
  TorusGrid grid;
  std::array<AlignedVector<double>, 3> k;  // wavevector components, 0 on Nyquist entries
  AlignedVector<double> k_norm;
  AlignedVector<double> k_sq;
  AlignedVector<double> inv_k_sq;       // 1/|k|^2, 0 at k = 0
  AlignedVector<double> parseval_weight;  // multiplicity of each stored mode, 0 on Nyquist
  AlignedVector<double> nyquist_mask;
  AlignedVector<double> dealias_mask;
  // Integer wavevector of each stored entry.
  std::vector<std::array<int, 3>> index_k;
};

std::shared_ptr<const GridTables> grid_tables(const TorusGrid& grid);

class RealField {
 public:
  explicit RealField(const TorusGrid& grid);
  RealField(const TorusGrid& grid, AlignedVector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  Point coordinates(std::size_t i) const;

  // Samples fn at every grid node.
  static RealField sample(const TorusGrid& grid, const std::function<double(const Point&)>& fn);

 private:
  TorusGrid grid_;
  AlignedVector<double> values_;
};

class SpectralField {
 public:
  explicit SpectralField(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  // Coefficient of wavevector k; k must have its last component >= 0.
  Complex coefficient(const std::array<int, 3>& k) const;
  void set_coefficient(const std::array<int, 3>& k, Complex value);
  double mean() const { return coeffs_[0].real(); }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  // this += alpha * o
  SpectralField& axpy(double alpha, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  static SpectralField constant(const TorusGrid& grid, double c);

 private:
  std::size_t index_of(const std::array<int, 3>& k) const;

  TorusGrid grid_;
  AlignedVector<Complex> coeffs_;
};

class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid);
  explicit VectorField(std::vector<SpectralField> components);

  const TorusGrid& grid() const { return components_.front().grid(); }
  int dim() const { return static_cast<int>(components_.size()); }
  SpectralField& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }
  const SpectralField& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double alpha, const VectorField& o);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  std::vector<SpectralField> components_;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

// Transforms.
RealField to_physical(const SpectralField& f);
SpectralField to_spectral(const RealField& g);
std::vector<RealField> to_physical(const VectorField& v);

// Differential operators (exact multiplication by i k).
SpectralField partial(const SpectralField& f, int axis);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
SpectralField laplacian(const SpectralField& f);
SpectralField curl2d(const VectorField& v);
// 2D: the scalar vorticity as a one-component field; 3D: the curl vector.
VectorField curl(const VectorField& v);

// coeffs(k) <- symbol(k) coeffs(k) for k != 0, and value_at_zero * coeffs(0).
// Throws DomainError if the symbol returns a non-finite value.
SpectralField fourier_multiplier(const SpectralField& f, const std::function<double(const Wavevector&)>& symbol,
                                 double value_at_zero);
// Multiplies by a precomputed per-entry real mask.
SpectralField apply_mask(const SpectralField& f, std::span<const double> mask);
void apply_mask_inplace(SpectralField& f, std::span<const double> mask);

// (-Delta)^{-1} with zero mean.
SpectralField inverse_minus_laplacian(const SpectralField& f);

VectorField leray_project(const VectorField& v);
VectorField potential_part(const VectorField& v);

SpectralField dealias(const SpectralField& f);
VectorField dealias(const VectorField& v);

// Dealiased pointwise product D(Du * Dv).
SpectralField product(const SpectralField& u, const SpectralField& v);

// Norms. Spectral L2 uses Parseval; physical norms use the rectangle rule with
// cell volume (2pi)^N / n^N, p = infinity is the grid maximum.
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& v);
double inner_product(const SpectralField& f, const SpectralField& g);
double inner_product(const VectorField& v, const VectorField& w);
double lp_norm(const RealField& g, double p);
double lp_norm(const SpectralField& f, double p);
// L^p norm of the pointwise Euclidean magnitude.
double lp_norm(const VectorField& v, double p);
double max_value(const RealField& g);
double min_value(const RealField& g);
// Pointwise Euclidean magnitude.
RealField magnitude(const std::vector<RealField>& comps);
// Frobenius magnitude of the gradient matrix of v, pointwise.
RealField gradient_magnitude(const VectorField& v);

// Evaluates the trigonometric polynomial at an arbitrary point.
double evaluate(const SpectralField& f, const Point& x);
// sup |f| located by refining the largest grid values with Newton steps on the
// trigonometric interpolant; accurate where the grid maximum is not.
double sup_norm_refined(const SpectralField& f, int candidates = 8);

// True when every coefficient with |k| outside [inner, outer] is below
// rel_tol times the largest coefficient.
bool spectrum_within(const SpectralField& f, double inner, double outer, double rel_tol = 1e-12);

}  // namespace inhomo
