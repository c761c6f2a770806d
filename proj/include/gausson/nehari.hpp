#pragma once

// Action S_nu = E + nu M and Nehari functional
//   I_nu(u) = ||grad u||^2 + 2 int V|u|^2 + 2 lambda int |u|^2 ln|u|^2 + 2 nu ||u||^2 = 2 S_nu(u) + 2 lambda M(u),
// and the Gaussian family gamma_{eps,x0}(x) = eps exp(-|x - x0|^2 / 2) whose members sit on {I_nu = 0}
// with mass eps^2 pi^{d/2} -> 0.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "gausson/errors.hpp"
#include "gausson/functionals.hpp"
#include "gausson/grid.hpp"
#include "gausson/invariances.hpp"
#include "gausson/params.hpp"

namespace gausson {

inline double action(const QuadraticTerms& t, double nu, const PhysParams& p) { return energy(t, p) + nu * t.mass; }

inline double action(const WaveField& u, double nu, const PhysParams& p, double reg = kDefaultReg) {
  return action(quadratic_terms(u, reg), nu, p);
}

inline double nehari(const QuadraticTerms& t, double nu, const PhysParams& p) {
  return t.gradient + p.curvature() * t.moment + 2.0 * p.lambda * t.entropy + 2.0 * nu * t.mass;
}

inline double nehari(const WaveField& u, double nu, const PhysParams& p, double reg = kDefaultReg) {
  return nehari(quadratic_terms(u, reg), nu, p);
}

/// Sum of the magnitudes of the Nehari functional's terms, for relative statements about I = 0.
inline double nehari_scale(const QuadraticTerms& t, double nu, const PhysParams& p) {
  return t.gradient + std::abs(p.curvature()) * t.moment + 2.0 * std::abs(p.lambda * t.entropy) +
         2.0 * std::abs(nu) * t.mass;
}

struct NehariWitness {
  double eps = 0.1;
  Vec2 x0{0.0, 0.0};
  double nu = 0.0;
  int d = 1;

  double center_sq() const { return d == 1 ? x0[0] * x0[0] : x0[0] * x0[0] + x0[1] * x0[1]; }
};

/// Closed-form Gaussian integrals of gamma_{eps,x0}.
struct WitnessIntegrals {
  double mass;      // eps^2 pi^{d/2}
  double gradient;  // eps^2 (d/2) pi^{d/2}
  double moment;    // eps^2 (d/2) pi^{d/2} + eps^2 |x0|^2 pi^{d/2}
  double entropy;   // ln(eps^2) mass - gradient
};

inline WitnessIntegrals witness_integrals(const NehariWitness& w) {
  if (!(w.eps > 0.0)) throw DomainError("witness: eps must be positive");
  const double base = w.eps * w.eps * std::pow(std::numbers::pi, 0.5 * w.d);
  const double grad = 0.5 * w.d * base;
  return {base, grad, grad + w.center_sq() * base, std::log(w.eps * w.eps) * base - grad};
}

/// eps^2 pi^{d/2} ((1 - 2 lambda) d/2 - omega^2 d/2 - omega^2 |x0|^2 + 2 lambda ln eps^2 + 2 nu).
inline double witness_nehari_closed(const NehariWitness& w, const PhysParams& p) {
  const WitnessIntegrals in = witness_integrals(w);
  return nehari(QuadraticTerms{in.mass, in.gradient, in.moment, in.entropy}, w.nu, p);
}

/// Value of the bracket with the x0 term removed; x0 exists iff it is positive.
inline double witness_bracket(double eps, double nu, const PhysParams& p) {
  const double d = p.dim;
  return 2.0 * p.lambda * std::log(eps * eps) + (1.0 - 2.0 * p.lambda) * d / 2.0 + p.curvature() * d / 2.0 +
         2.0 * nu;
}

/// Center on the first axis with I(gamma_{eps,x0}) = 0, or nullopt when eps is too large.
inline std::optional<Vec2> solve_witness_x0(double eps, double nu, const PhysParams& p) {
  if (!(p.lambda < 0.0 && p.omega > 0.0 && p.potential == PotentialSign::Repulsive))
    throw RegimeError("solve_witness_x0: requires lambda < 0 < omega with the repulsive potential");
  if (!(eps > 0.0)) throw DomainError("solve_witness_x0: eps must be positive");
  const double bracket = witness_bracket(eps, nu, p);
  if (!(bracket > 0.0)) return std::nullopt;
  return Vec2{std::sqrt(bracket) / p.omega, 0.0};
}

/// Box length 2|x0| + 16 rounded up to a multiple of 4, never below 32.
inline double witness_box_length(const NehariWitness& w) {
  const double need = 2.0 * std::sqrt(w.center_sq()) + 16.0;
  return std::max(32.0, 4.0 * std::ceil(need / 4.0));
}

inline Grid witness_grid(const NehariWitness& w, std::size_t points_per_unit = 16) {
  const double L = witness_box_length(w);
  std::size_t n = 2;
  while (static_cast<double>(n) < L * static_cast<double>(points_per_unit)) n *= 2;
  return Grid(L, n, w.d);
}

inline WaveField witness_field(const NehariWitness& w, const Grid& g) {
  if (g.dim != w.d) throw GridMismatch("witness_field: grid dimension differs from witness d");
  WaveField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = g.point(i);
    const double d1 = x[0] - w.x0[0];
    const double d2 = g.dim == 2 ? x[1] - w.x0[1] : 0.0;
    u.values[i] = w.eps * std::exp(-0.5 * (d1 * d1 + d2 * d2));
  }
  return u;
}

struct WitnessRow {
  double eps;
  double x0;                // distance of the center from the origin
  double mass;              // closed form eps^2 pi^{d/2}
  double nehari_residual;   // grid quadrature of I_nu on the witness
  double quadrature_mass;   // grid quadrature of the mass
};

/// One Nehari-manifold member per admissible eps; masses tend to 0 with eps.
inline std::vector<WitnessRow> delta_nu_scan(double nu, const PhysParams& p, const std::vector<double>& eps_list,
                                             double reg = kDefaultReg) {
  std::vector<WitnessRow> rows;
  for (double eps : eps_list) {
    const auto x0 = solve_witness_x0(eps, nu, p);
    if (!x0) continue;
    const NehariWitness w{eps, *x0, nu, p.dim};
    const Grid g = witness_grid(w);
    const WaveField u = witness_field(w, g);
    const QuadraticTerms terms = quadratic_terms(u, reg);
    rows.push_back({eps, std::sqrt(w.center_sq()), witness_integrals(w).mass, nehari(terms, nu, p), terms.mass});
  }
  return rows;
}

}  // namespace gausson
