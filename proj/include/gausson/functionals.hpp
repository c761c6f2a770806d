#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "gausson/grid.hpp"
#include "gausson/params.hpp"
#include "gausson/spectral.hpp"

namespace gausson {

/// Default relative floor of the logarithm: ln|u|^2 -> ln max(|u|^2, reg * max|u|^2).
inline constexpr double kDefaultReg = 1e-14;

/// Absolute density floor reg * max|u|^2 for a field.
inline double log_floor(const WaveField& u, double reg) { return reg * u.max_density(); }

/// rho * ln max(rho, floor), with the s ln s -> 0 limit at vacuum.
inline double entropy_density(double rho, double floor) {
  if (rho <= 0.0) return 0.0;
  return rho * std::log(std::max(rho, floor));
}

inline double mass(const WaveField& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += std::norm(v);
  return s * u.grid.cell();
}

/// ||x u||^2 = int |x|^2 |u|^2.
inline double moment_sq(const WaveField& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u.grid.radius_sq(i) * std::norm(u.values[i]);
  return s * u.grid.cell();
}

/// int |u|^2 ln|u|^2 with the regularized logarithm.
inline double entropy(const WaveField& u, double reg = kDefaultReg) {
  const double floor = log_floor(u, reg);
  double s = 0.0;
  for (const auto& v : u.values) s += entropy_density(std::norm(v), floor);
  return s * u.grid.cell();
}

/// The three integrals that enter the energy, the action and the Nehari functional.
struct QuadraticTerms {
  double mass = 0.0;
  double gradient = 0.0;  // ||grad u||^2
  double moment = 0.0;    // ||x u||^2
  double entropy = 0.0;   // int |u|^2 ln|u|^2
};

inline QuadraticTerms quadratic_terms(const WaveField& u, double reg = kDefaultReg) {
  return {mass(u), gradient_norm_sq(u), moment_sq(u), entropy(u, reg)};
}

inline double energy(const QuadraticTerms& t, const PhysParams& p) {
  return 0.5 * t.gradient + 0.5 * p.curvature() * t.moment + p.lambda * (t.entropy - t.mass);
}

/// E(u) = 1/2 ||grad u||^2 + int V|u|^2 + lambda int |u|^2 (ln|u|^2 - 1).
inline double energy(const WaveField& u, const PhysParams& p, double reg = kDefaultReg) {
  return energy(quadratic_terms(u, reg), p);
}

/// Sum of the magnitudes of the energy's terms; the natural scale for relative energy drift.
inline double energy_scale(const QuadraticTerms& t, const PhysParams& p) {
  return 0.5 * t.gradient + 0.5 * std::abs(p.curvature()) * t.moment +
         std::abs(p.lambda) * (std::abs(t.entropy) + t.mass);
}

/// Squared Sigma-norm: mass + gradient + second moment.
inline double sigma_norm(const WaveField& u) { return mass(u) + gradient_norm_sq(u) + moment_sq(u); }

/// ||u - v||_Sigma (not squared).
inline double sigma_distance(const WaveField& u, const WaveField& v) {
  return std::sqrt(sigma_norm(u - v));
}

/// Pointwise residual of  -1/2 Lap phi + nu phi + V phi + lambda phi ln|phi|^2.
inline WaveField stationary_residual_field(const WaveField& phi, const PhysParams& p, double nu = 0.0,
                                           double reg = kDefaultReg) {
  WaveField r = laplacian(phi);
  const double floor = log_floor(phi, reg);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const cplx v = phi.values[i];
    const double rho = std::norm(v);
    const double log_rho = rho > 0.0 ? std::log(std::max(rho, floor)) : 0.0;
    r.values[i] = -0.5 * r.values[i] + (nu + p.potential_at(phi.grid.radius_sq(i)) + p.lambda * log_rho) * v;
  }
  return r;
}

/// L2 norm of the stationary residual.
inline double stationary_residual(const WaveField& phi, const PhysParams& p, double nu = 0.0,
                                  double reg = kDefaultReg) {
  return l2_norm(stationary_residual_field(phi, p, nu, reg));
}

}  // namespace gausson
