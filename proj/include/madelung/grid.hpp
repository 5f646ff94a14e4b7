#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "madelung/errors.hpp"

namespace madelung {

using Complex = std::complex<double>;

namespace detail {
struct GridData;
}

/// Uniform periodic 1D grid with its conjugate wavenumbers.
///
/// Grid is a cheap handle: copies share the same immutable point/wavenumber
/// tables and FFT plans. Points are x_i = x_min + i*dx for i in [0, n), with
/// x_max identified with x_min. Wavenumbers follow the standard FFT ordering
/// (0, dk, ..., (n/2-1) dk, -(n/2) dk, ..., -dk).
class Grid {
 public:
  Grid(std::size_t n, double x_min, double x_max);

  std::size_t n() const;
  double x_min() const;
  double x_max() const;
  double length() const;
  double dx() const;
  double dk() const;
  /// Magnitude of the most negative (Nyquist) wavenumber, pi/dx.
  double k_nyquist() const;

  std::span<const double> points() const;
  std::span<const double> wavenumbers() const;
  double x(std::size_t i) const { return points()[i]; }

  /// Unnormalized forward/backward DFT (backward(forward(f)) == n*f).
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void backward(std::span<const Complex> in, std::span<Complex> out) const;

  /// Maps x onto [x_min, x_max).
  double wrap(double x) const;

  bool same_as(const Grid& other) const;

 private:
  std::shared_ptr<const detail::GridData> data_;
};

Grid make_grid(std::size_t n, double x_min, double x_max);

/// Values sampled on a Grid. Length always equals grid.n().
template <typename T>
class Field {
 public:
  explicit Field(Grid grid) : grid_(std::move(grid)), values_(grid_.n(), T{}) {}
  Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.n()) {
      throw InvalidArgument("field length " + std::to_string(values_.size()) +
                            " does not match grid size " + std::to_string(grid_.n()));
    }
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  const std::vector<T>& data() const { return values_; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// Pointwise boolean mask over a grid (true = point participates).
using Mask = std::vector<bool>;

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// For each point, the index of the nearest point where mask is true (ties
/// go left). Throws if the mask is all false.
std::vector<std::size_t> nearest_valid_indices(const Mask& mask);

/// Points with lo <= x <= hi.
Mask window_mask(const Grid& grid, double lo, double hi);
/// Pointwise AND of two masks of equal length.
Mask mask_and(const Mask& a, const Mask& b);
std::size_t mask_count(const Mask& m);

/// Throws if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);
void require_finite(std::span<const Complex> values, const char* what);

}  // namespace madelung
