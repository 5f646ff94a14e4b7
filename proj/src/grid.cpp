#include "madelung/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

namespace madelung {
namespace {

// FFTW's planner is not reentrant; plan execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

namespace detail {

struct GridData {
  std::size_t n = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  double dk = 0.0;
  std::vector<double> points;
  std::vector<double> wavenumbers;
  fftw_plan forward_out = nullptr;
  fftw_plan backward_out = nullptr;
  fftw_plan forward_in = nullptr;
  fftw_plan backward_in = nullptr;

  GridData(std::size_t n_, double lo, double hi) : n(n_), x_min(lo), x_max(hi) {
    dx = (x_max - x_min) / static_cast<double>(n);
    dk = 2.0 * std::numbers::pi / (x_max - x_min);
    points.resize(n);
    wavenumbers.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
      points[i] = x_min + static_cast<double>(i) * dx;
      auto mode = static_cast<std::ptrdiff_t>(i);
      if (mode >= half) mode -= static_cast<std::ptrdiff_t>(n);
      wavenumbers[i] = static_cast<double>(mode) * dk;
    }

    std::vector<Complex> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int ni = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    forward_out = fftw_plan_dft_1d(ni, pa, pb, FFTW_FORWARD, flags);
    backward_out = fftw_plan_dft_1d(ni, pa, pb, FFTW_BACKWARD, flags);
    forward_in = fftw_plan_dft_1d(ni, pa, pa, FFTW_FORWARD, flags);
    backward_in = fftw_plan_dft_1d(ni, pa, pa, FFTW_BACKWARD, flags);
  }

  GridData(const GridData&) = delete;
  GridData& operator=(const GridData&) = delete;

  ~GridData() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {forward_out, backward_out, forward_in, backward_in}) {
      if (p != nullptr) fftw_destroy_plan(p);
    }
  }

  void execute(bool forward, std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n || out.size() != n) throw InvalidArgument("transform length does not match grid");
    const bool in_place = static_cast<const void*>(in.data()) == static_cast<void*>(out.data());
    fftw_plan plan = in_place ? (forward ? forward_in : backward_in) : (forward ? forward_out : backward_out);
    // FFTW_PRESERVE_INPUT is the default for out-of-place complex DFTs.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
    fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
  }
};

}  // namespace detail

Grid::Grid(std::size_t n, double x_min, double x_max) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InvalidArgument("grid domain must satisfy x_max > x_min");
  }
  data_ = std::make_shared<const detail::GridData>(n, x_min, x_max);
}

std::size_t Grid::n() const { return data_->n; }
double Grid::x_min() const { return data_->x_min; }
double Grid::x_max() const { return data_->x_max; }
double Grid::length() const { return data_->x_max - data_->x_min; }
double Grid::dx() const { return data_->dx; }
double Grid::dk() const { return data_->dk; }
double Grid::k_nyquist() const { return std::numbers::pi / data_->dx; }
std::span<const double> Grid::points() const { return data_->points; }
std::span<const double> Grid::wavenumbers() const { return data_->wavenumbers; }

void Grid::forward(std::span<const Complex> in, std::span<Complex> out) const { data_->execute(true, in, out); }
void Grid::backward(std::span<const Complex> in, std::span<Complex> out) const { data_->execute(false, in, out); }

double Grid::wrap(double x) const {
  const double len = length();
  double r = std::fmod(x - data_->x_min, len);
  if (r < 0.0) r += len;
  if (r >= len) r = 0.0;
  return data_->x_min + r;
}

bool Grid::same_as(const Grid& other) const {
  return data_ == other.data_ ||
         (data_->n == other.data_->n && data_->x_min == other.data_->x_min && data_->x_max == other.data_->x_max);
}

Grid make_grid(std::size_t n, double x_min, double x_max) { return Grid(n, x_min, x_max); }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_as(b)) throw InvalidArgument(std::string(what) + ": fields live on different grids");
}

std::vector<std::size_t> nearest_valid_indices(const Mask& mask) {
  const std::size_t n = mask.size();
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> left(n, none), right(n, none), out(n);
  std::size_t last = none;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) last = i;
    left[i] = last;
  }
  last = none;
  for (std::size_t i = n; i-- > 0;) {
    if (mask[i]) last = i;
    right[i] = last;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (left[i] == none && right[i] == none) throw Error("mask has no valid points");
    if (left[i] == none) {
      out[i] = right[i];
    } else if (right[i] == none) {
      out[i] = left[i];
    } else {
      out[i] = (i - left[i] <= right[i] - i) ? left[i] : right[i];
    }
  }
  return out;
}

Mask window_mask(const Grid& grid, double lo, double hi) {
  Mask m(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) m[i] = grid.x(i) >= lo && grid.x(i) <= hi;
  return m;
}

Mask mask_and(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw InvalidArgument("mask_and: length mismatch");
  Mask m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] && b[i];
  return m;
}

std::size_t mask_count(const Mask& m) {
  std::size_t c = 0;
  for (bool b : m) c += b ? 1 : 0;
  return c;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(std::string(what) + ": non-finite value");
  }
}

void require_finite(std::span<const Complex> values, const char* what) {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(std::string(what) + ": non-finite value");
  }
}

}  // namespace madelung
