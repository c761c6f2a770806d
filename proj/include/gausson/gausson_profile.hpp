#pragma once

// Closed-form Gaussons phi_{k,nu}(x) = exp(-nu/(2 lambda)) exp(-d k/(4 lambda)) exp(-k |x|^2 / 2)
// of the repulsive-potential equation, with k a root of k^2 + 2 lambda k + omega^2 = 0.

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gausson/errors.hpp"
#include "gausson/grid.hpp"
#include "gausson/params.hpp"

namespace gausson {

enum class Branch { Minus, Plus, Degenerate };

struct GaussonRoots {
  double k_minus = 0.0;
  double k_plus = 0.0;
  /// False when k_minus = 0 (omega = 0): not a normalizable Gausson.
  bool minus_valid = true;
};

/// Roots of k^2 + 2 lambda k + omega^2 = 0, or nullopt when they are complex.
inline std::optional<GaussonRoots> gausson_k(const PhysParams& p) {
  if (p.potential == PotentialSign::Confining)
    throw std::invalid_argument("gausson_k: defined for the repulsive potential (or none) only");
  switch (regime(p)) {
    case Regime::NoStationary:
      return std::nullopt;
    case Regime::FlatGausson:
      return GaussonRoots{0.0, -2.0 * p.lambda, false};
    case Regime::Degenerate:
      return GaussonRoots{p.omega, p.omega, true};
    case Regime::TwoGaussons: {
      // (-lambda - omega)(-lambda + omega) avoids cancellation in lambda^2 - omega^2;
      // k_minus from the product of the roots avoids it in -lambda - sqrt(.).
      const double disc = std::sqrt((-p.lambda - p.omega) * (-p.lambda + p.omega));
      const double k_plus = -p.lambda + disc;
      return GaussonRoots{p.omega * p.omega / k_plus, k_plus, true};
    }
  }
  return std::nullopt;
}

/// A stationary Gausson and the solitary-wave frequency of its family member.
struct GaussonSpec {
  double k = 0.0;
  double nu = 0.0;
  Branch branch = Branch::Plus;
};

inline GaussonSpec make_gausson(const PhysParams& p, Branch branch, double nu = 0.0) {
  const auto roots = gausson_k(p);
  if (!roots) throw RegimeError("no Gausson exists for lambda=" + std::to_string(p.lambda) +
                                ", omega=" + std::to_string(p.omega));
  const Regime r = regime(p);
  if (r == Regime::Degenerate) return {roots->k_plus, nu, Branch::Degenerate};
  if (branch == Branch::Minus) {
    if (!roots->minus_valid) throw RegimeError("k_minus = 0 is not a normalizable Gausson");
    return {roots->k_minus, nu, Branch::Minus};
  }
  return {roots->k_plus, nu, Branch::Plus};
}

/// log of the Gausson amplitude at the origin, -nu/(2 lambda) - d k/(4 lambda).
inline double gausson_log_peak(const GaussonSpec& s, const PhysParams& p) {
  return -s.nu / (2.0 * p.lambda) - p.dim * s.k / (4.0 * p.lambda);
}

inline double gausson_value(const GaussonSpec& s, const PhysParams& p, double r2) {
  return std::exp(gausson_log_peak(s, p) - 0.5 * s.k * r2);
}

/// Squared L2 norm exp(-d k/(2 lambda)) (pi/k)^{d/2} of phi_k (nu = 0).
inline double gausson_mass(double k, double lambda, int d) {
  if (!(k > 0.0)) throw DomainError("gausson_mass: k must be positive");
  if (lambda == 0.0) throw DomainError("gausson_mass: lambda must be nonzero");
  return std::exp(-d * k / (2.0 * lambda)) * std::pow(std::numbers::pi / k, 0.5 * d);
}

/// Truncation at the box edge below 1e-12 and at least 4 sqrt(k) points per unit length.
inline bool grid_adequate(const Grid& g, double k) {
  const double half = 0.5 * g.length;
  const double tail = std::exp(-0.5 * k * half * half);
  const double density = static_cast<double>(g.points) / g.length;
  return tail < 1e-12 && density >= 4.0 * std::sqrt(k);
}

inline void check_grid_adequacy(const Grid& g, double k) {
  if (grid_adequate(g, k)) return;
  std::ostringstream msg;
  msg << "grid L=" << g.length << ", N=" << g.points << " does not resolve a Gaussian with k=" << k
      << " (need exp(-k L^2/8) < 1e-12 and N/L >= 4 sqrt(k))";
  throw GridResolutionError(msg.str());
}

/// Samples of phi_{k,nu}; requires grid.dim == params.dim.
inline WaveField gausson_field(const GaussonSpec& s, const PhysParams& p, const Grid& g) {
  if (!(s.k > 0.0)) throw DomainError("gausson_field: k must be positive");
  if (g.dim != p.dim) throw GridMismatch("gausson_field: grid dimension differs from params.dim");
  check_grid_adequacy(g, s.k);
  WaveField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u.values[i] = gausson_value(s, p, g.radius_sq(i));
  return u;
}

}  // namespace gausson
