#pragma once

// Exact symmetries of the logarithmic equation with repulsive potential -omega^2 |x|^2 / 2.
// Each maps a solution u(t, .) at time t to another solution at the same time t.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gausson/errors.hpp"
#include "gausson/gausson_profile.hpp"
#include "gausson/grid.hpp"
#include "gausson/spectral.hpp"

namespace gausson {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const std::array<double, 2>& x, int dim) {
  return dim == 1 ? a[0] * x[0] : a[0] * x[0] + a[1] * x[1];
}

inline double norm_sq(const Vec2& a, int dim) { return dim == 1 ? a[0] * a[0] : a[0] * a[0] + a[1] * a[1]; }

/// c u(t,x) exp(-i t lambda ln|c|^2).
inline WaveField apply_size(const WaveField& u, cplx c, double t, double lambda) {
  if (c == cplx{0.0, 0.0}) throw DomainError("apply_size: c must be nonzero");
  const cplx factor = c * std::polar(1.0, -t * lambda * std::log(std::norm(c)));
  return factor * u;
}

namespace detail {

inline WaveField shift_checked(const WaveField& u, const Vec2& shift, double t) {
  const double half = 0.5 * u.grid.length;
  if (std::abs(shift[0]) >= half || (u.grid.dim == 2 && std::abs(shift[1]) >= half))
    throw BoundaryLeak(t, 1.0);
  if (shift[0] == 0.0 && (u.grid.dim == 1 || shift[1] == 0.0)) return u;
  return spectral_shift(u, shift);
}

inline WaveField multiply_phase(WaveField u, const Vec2& k, double constant) {
  for (std::size_t i = 0; i < u.size(); ++i)
    u.values[i] *= std::polar(1.0, dot(k, u.grid.point(i), u.grid.dim) + constant);
  return u;
}

/// Galilean transform with the sign of the linear phase exposed (+1 is the true symmetry).
inline WaveField galilean(const WaveField& u, const Vec2& v, double t, double omega, double phase_sign) {
  if (!(omega > 0.0)) throw DomainError("apply_galilean: requires omega > 0");
  const double sh = std::sinh(omega * t) / omega;
  const WaveField shifted = shift_checked(u, {v[0] * sh, v[1] * sh}, t);
  const double c = std::cosh(omega * t) * phase_sign;
  return multiply_phase(shifted, {c * v[0], c * v[1]},
                        -norm_sq(v, u.grid.dim) / (4.0 * omega) * std::sinh(2.0 * omega * t));
}

}  // namespace detail

/// u(t, x - v sinh(wt)/w) exp(i cosh(wt) v.x - i |v|^2 sinh(2wt) / (4w)); the shift is spectral.
inline WaveField apply_galilean(const WaveField& u, const Vec2& v, double t, double omega) {
  return detail::galilean(u, v, t, omega, 1.0);
}

/// u(t, x - x0 cosh(wt)) exp(i w sinh(wt) x0.x - i w |x0|^2 sinh(2wt) / 4); a pure shift at t = 0.
inline WaveField apply_translation(const WaveField& u, const Vec2& x0, double t, double omega) {
  const double ch = std::cosh(omega * t);
  const WaveField shifted = detail::shift_checked(u, {x0[0] * ch, x0[1] * ch}, t);
  if (omega == 0.0) return shifted;
  const double s = omega * std::sinh(omega * t);
  return detail::multiply_phase(shifted, {s * x0[0], s * x0[1]},
                                -omega * norm_sq(x0, u.grid.dim) / 4.0 * std::sinh(2.0 * omega * t));
}

/// u1(x1) u2(x2) on the 2D grid with the factors' box and resolution.
inline WaveField tensor_product(const WaveField& u1, const WaveField& u2) {
  if (u1.grid.dim != 1 || u2.grid.dim != 1) throw GridMismatch("tensor_product: factors must be 1D");
  if (!(u1.grid == u2.grid)) throw GridMismatch("tensor_product: factor grids differ");
  const std::size_t n = u1.grid.points;
  WaveField out(Grid(u1.grid.length, n, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = u1.values[i] * u2.values[j];
  return out;
}

/// The translated solitary wave e^{i nu t} phi_{k,nu} carried by the translation symmetry,
/// evaluated pointwise from the closed form (no spectral shift, valid for any horizon).
inline WaveField translated_solitary_wave(const GaussonSpec& s, const PhysParams& p, const Grid& g, const Vec2& x0,
                                          double t) {
  if (g.dim != p.dim) throw GridMismatch("translated_solitary_wave: grid dimension differs from params.dim");
  const double w = p.omega;
  const double ch = std::cosh(w * t);
  const double mom = w * std::sinh(w * t);
  const double phase0 = s.nu * t - w * norm_sq(x0, g.dim) / 4.0 * std::sinh(2.0 * w * t);
  WaveField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = g.point(i);
    const double d1 = x[0] - x0[0] * ch;
    const double d2 = g.dim == 2 ? x[1] - x0[1] * ch : 0.0;
    const double phase = mom * dot(x0, x, g.dim) + phase0;
    u.values[i] = std::polar(gausson_value(s, p, d1 * d1 + d2 * d2), phase);
  }
  return u;
}

/// The Galilean boost of e^{i nu t} phi_{k,nu}, evaluated pointwise from the closed form.
inline WaveField boosted_solitary_wave(const GaussonSpec& s, const PhysParams& p, const Grid& g, const Vec2& v,
                                       double t) {
  if (!(p.omega > 0.0)) throw DomainError("boosted_solitary_wave: requires omega > 0");
  if (g.dim != p.dim) throw GridMismatch("boosted_solitary_wave: grid dimension differs from params.dim");
  const double w = p.omega;
  const double sh = std::sinh(w * t) / w;
  const double ch = std::cosh(w * t);
  const double phase0 = s.nu * t - norm_sq(v, g.dim) / (4.0 * w) * std::sinh(2.0 * w * t);
  WaveField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = g.point(i);
    const double d1 = x[0] - v[0] * sh;
    const double d2 = g.dim == 2 ? x[1] - v[1] * sh : 0.0;
    u.values[i] = std::polar(gausson_value(s, p, d1 * d1 + d2 * d2), ch * dot(v, x, g.dim) + phase0);
  }
  return u;
}

}  // namespace gausson
