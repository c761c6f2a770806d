#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gausson {

enum class PotentialSign { Repulsive, Confining, None };

/// Parameter regimes of the repulsive-potential equation, keyed on (lambda, omega).
enum class Regime { TwoGaussons, Degenerate, NoStationary, FlatGausson };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::TwoGaussons: return "TwoGaussons";
    case Regime::Degenerate: return "Degenerate";
    case Regime::NoStationary: return "NoStationary";
    case Regime::FlatGausson: return "FlatGausson";
  }
  return "?";
}

inline std::string_view to_string(PotentialSign s) {
  switch (s) {
    case PotentialSign::Repulsive: return "repulsive";
    case PotentialSign::Confining: return "confining";
    case PotentialSign::None: return "none";
  }
  return "?";
}

/// Coefficients of  i u_t + 1/2 Lap u = V(x) u + lambda u ln|u|^2,  V = curvature |x|^2 / 2.
struct PhysParams {
  double lambda = -2.0;
  double omega = 1.0;
  int dim = 1;
  PotentialSign potential = PotentialSign::Repulsive;

  PhysParams() = default;
  PhysParams(double lambda_, double omega_, int dim_ = 1, PotentialSign potential_ = PotentialSign::Repulsive)
      : lambda(lambda_), omega(omega_), dim(dim_), potential(potential_) {
    validate();
  }

  void validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(omega)) throw std::invalid_argument("PhysParams: non-finite coefficient");
    if (omega < 0.0) throw std::invalid_argument("PhysParams: omega must be >= 0");
    if (dim < 1) throw std::invalid_argument("PhysParams: dim must be >= 1");
    if (potential == PotentialSign::None && omega != 0.0)
      throw std::invalid_argument("PhysParams: potential 'none' requires omega = 0");
  }

  /// V''(x): -omega^2 for the repulsive potential, +omega^2 confining, 0 without potential.
  double curvature() const noexcept {
    switch (potential) {
      case PotentialSign::Repulsive: return -omega * omega;
      case PotentialSign::Confining: return omega * omega;
      case PotentialSign::None: return 0.0;
    }
    return 0.0;
  }

  double potential_at(double r2) const noexcept { return 0.5 * curvature() * r2; }
};

/// Relative tolerance under which -lambda == omega counts as the degenerate case.
inline constexpr double kDegenerateTol = 1e-12;

inline Regime regime(double lambda, double omega) {
  if (omega == 0.0) return lambda < 0.0 ? Regime::FlatGausson : Regime::NoStationary;
  if (lambda >= 0.0) return Regime::NoStationary;
  const double gap = -lambda - omega;
  if (std::abs(gap) <= kDegenerateTol * std::max(-lambda, omega)) return Regime::Degenerate;
  return gap > 0.0 ? Regime::TwoGaussons : Regime::NoStationary;
}

inline Regime regime(const PhysParams& p) { return regime(p.lambda, p.omega); }

}  // namespace gausson
