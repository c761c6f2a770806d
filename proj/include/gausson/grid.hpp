#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gausson/errors.hpp"

namespace gausson {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2)^dim with N points per axis (N a power of two).
struct Grid {
  double length = 0.0;
  std::size_t points = 0;
  int dim = 1;

  Grid() = default;
  Grid(double length_, std::size_t points_, int dim_ = 1) : length(length_), points(points_), dim(dim_) {
    if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
    if (points < 2 || (points & (points - 1)) != 0)
      throw std::invalid_argument("Grid: points per axis must be a power of two >= 2, got " +
                                  std::to_string(points));
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
  }

  double dx() const noexcept { return length / static_cast<double>(points); }
  /// Volume element dx^dim.
  double cell() const noexcept { return dim == 1 ? dx() : dx() * dx(); }
  std::size_t size() const noexcept { return dim == 1 ? points : points * points; }
  double coord(std::size_t i) const noexcept { return -0.5 * length + static_cast<double>(i) * dx(); }

  /// Angular wavenumber of DFT index i (Nyquist mapped to -N/2).
  double wavenumber(std::size_t i) const noexcept {
    const auto n = static_cast<long>(points);
    long j = static_cast<long>(i);
    if (j >= n / 2) j -= n;
    return 2.0 * std::numbers::pi / length * static_cast<double>(j);
  }

  std::vector<double> coords() const {
    std::vector<double> x(points);
    for (std::size_t i = 0; i < points; ++i) x[i] = coord(i);
    return x;
  }

  /// Squared radius |x|^2 at flat index (row-major in 2D).
  double radius_sq(std::size_t flat) const noexcept {
    if (dim == 1) {
      const double x = coord(flat);
      return x * x;
    }
    const double x1 = coord(flat / points);
    const double x2 = coord(flat % points);
    return x1 * x1 + x2 * x2;
  }

  /// Squared wavenumber |xi|^2 at flat index.
  double wavenumber_sq(std::size_t flat) const noexcept {
    if (dim == 1) {
      const double k = wavenumber(flat);
      return k * k;
    }
    const double k1 = wavenumber(flat / points);
    const double k2 = wavenumber(flat % points);
    return k1 * k1 + k2 * k2;
  }

  std::array<double, 2> point(std::size_t flat) const noexcept {
    if (dim == 1) return {coord(flat), 0.0};
    return {coord(flat / points), coord(flat % points)};
  }

  bool operator==(const Grid&) const = default;
};

/// Complex samples of a field on a Grid; the discretized PDE state.
struct WaveField {
  Grid grid;
  std::vector<cplx> values;

  WaveField() = default;
  explicit WaveField(Grid g) : grid(g), values(g.size(), cplx{0.0, 0.0}) {}
  WaveField(Grid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("WaveField: expected " + std::to_string(grid.size()) + " samples, got " +
                                  std::to_string(values.size()));
  }

  std::size_t size() const noexcept { return values.size(); }
  cplx& operator[](std::size_t i) noexcept { return values[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return values[i]; }

  double max_density() const noexcept {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::norm(v));
    return m;
  }
};

inline void require_same_grid(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("fields are sampled on different grids");
}

inline WaveField operator*(cplx c, WaveField u) {
  for (auto& v : u.values) v *= c;
  return u;
}

inline WaveField operator-(WaveField a, const WaveField& b) {
  require_same_grid(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

/// Discrete L2 inner product <a, b> = sum conj(a) b dx^d.
inline cplx inner(const WaveField& a, const WaveField& b) {
  require_same_grid(a, b);
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s * a.grid.cell();
}

inline double l2_norm(const WaveField& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += std::norm(v);
  return std::sqrt(s * u.grid.cell());
}

inline double l2_distance(const WaveField& a, const WaveField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell());
}

/// Fraction of the mass lying in the outer 10% of the box along any axis.
inline double boundary_mass_fraction(const WaveField& u) {
  const double edge = 0.4 * u.grid.length;
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = std::norm(u.values[i]);
    total += rho;
    const auto p = u.grid.point(i);
    if (std::abs(p[0]) > edge || (u.grid.dim == 2 && std::abs(p[1]) > edge)) outer += rho;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace gausson
