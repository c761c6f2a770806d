#pragma once

// Strang splitting for  i u_t + 1/2 Lap u = V(x) u + lambda u ln|u|^2  on a periodic box:
// half kinetic step in Fourier space, exact pointwise step exp(-i dt W(x,|u|^2)) with
// W = V(x) + lambda ln max(|u|^2, reg max|u|^2) (|u| is invariant under that flow), half kinetic step.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "gausson/errors.hpp"
#include "gausson/fft.hpp"
#include "gausson/functionals.hpp"
#include "gausson/grid.hpp"
#include "gausson/params.hpp"
#include "gausson/spectral.hpp"

namespace gausson {

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double reg = kDefaultReg;
  /// BoundaryLeak once this fraction of the mass sits in the outer 10% of the box.
  double boundary_mass_limit = 1e-8;
  std::size_t record_every = 100;
  bool store_snapshots = true;
};

/// Largest dt keeping the potential phase omega^2 L^2 dt / 8 per step below 0.1 rad.
inline double dt_heuristic_bound(const PhysParams& p, const Grid& g) {
  return 0.1 / std::max(1.0, std::abs(p.curvature()) * g.length * g.length / 8.0);
}

class SplitStepSolver {
 public:
  SplitStepSolver(const Grid& grid, const PhysParams& params, double dt, double reg = kDefaultReg)
      : grid_(grid), params_(params), dt_(dt), reg_(reg), plan_(make_plan(grid)) {
    if (!(dt > 0.0)) throw std::invalid_argument("SplitStepSolver: dt must be positive");
    if (reg < 0.0) throw std::invalid_argument("SplitStepSolver: reg must be >= 0");
    const std::size_t n = grid.size();
    half_kinetic_.resize(n);
    full_kinetic_.resize(n);
    potential_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi2 = grid.wavenumber_sq(i);
      half_kinetic_[i] = std::polar(1.0, -0.25 * xi2 * dt);
      full_kinetic_[i] = std::polar(1.0, -0.5 * xi2 * dt);
      potential_[i] = params.potential_at(grid.radius_sq(i));
    }
  }

  double dt() const noexcept { return dt_; }
  const Grid& grid() const noexcept { return grid_; }

  void step(WaveField& u) const { advance(u, 1, 0.0, 1.0); }

  /// n Strang steps, fusing adjacent kinetic half steps. Checks the boundary mass after each
  /// local substep and throws BoundaryLeak(t) when boundary_limit is exceeded.
  void advance(WaveField& u, std::size_t n, double t0, double boundary_limit) const {
    if (!(u.grid == grid_)) throw GridMismatch("SplitStepSolver: field grid differs from solver grid");
    if (n == 0) return;
    kinetic(u.values, half_kinetic_);
    for (std::size_t s = 0; s < n; ++s) {
      local(u.values);
      if (boundary_limit < 1.0) {
        const double frac = boundary_mass_fraction(u);
        if (frac > boundary_limit) throw BoundaryLeak(t0 + static_cast<double>(s + 1) * dt_, frac);
      }
      kinetic(u.values, s + 1 == n ? half_kinetic_ : full_kinetic_);
    }
  }

 private:
  void kinetic(std::vector<cplx>& v, const std::vector<cplx>& phase) const {
    plan_.forward(v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= phase[i];
    plan_.backward(v);
  }

  void local(std::vector<cplx>& v) const {
    double max_rho = 0.0;
    for (const auto& z : v) max_rho = std::max(max_rho, std::norm(z));
    const double floor = reg_ * max_rho;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double rho = std::norm(v[i]);
      if (rho == 0.0) continue;
      const double w = potential_[i] + params_.lambda * std::log(std::max(rho, floor));
      v[i] *= std::polar(1.0, -dt_ * w);
    }
  }

  Grid grid_;
  PhysParams params_;
  double dt_;
  double reg_;
  FftPlan plan_;
  std::vector<cplx> half_kinetic_;
  std::vector<cplx> full_kinetic_;
  std::vector<double> potential_;
};

/// One Strang step of size cfg.dt.
inline WaveField step(WaveField u, const PhysParams& params, const SolverConfig& cfg) {
  SplitStepSolver(u.grid, params, cfg.dt, cfg.reg).advance(u, 1, 0.0, cfg.boundary_mass_limit);
  return u;
}

struct Observables {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double sigma_norm = 0.0;
  double xmean = 0.0;     // <x_1>
  double variance = 0.0;  // <x_1^2> - <x_1>^2
  double supnorm = 0.0;
};

inline Observables observe(const WaveField& u, const PhysParams& params, double reg, double t) {
  Observables o;
  o.t = t;
  const QuadraticTerms terms = quadratic_terms(u, reg);
  o.mass = terms.mass;
  o.energy = energy(terms, params);
  o.sigma_norm = terms.mass + terms.gradient + terms.moment;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = std::norm(u.values[i]);
    const double x = u.grid.point(i)[0];
    m1 += x * rho;
    m2 += x * x * rho;
    o.supnorm = std::max(o.supnorm, std::sqrt(rho));
  }
  const double total = terms.mass / u.grid.cell();
  if (total > 0.0) {
    o.xmean = m1 / total;
    o.variance = m2 / total - o.xmean * o.xmean;
  }
  return o;
}

struct Snapshot {
  double t;
  WaveField field;
};

struct Evolution {
  std::vector<Snapshot> snapshots;
  std::vector<Observables> observables;
  WaveField final_state;
};

/// Repeated Strang steps on [0, t_end] (uniform step t_end / ceil(t_end/dt)), recording
/// observables (and optionally snapshots) every cfg.record_every steps and at t_end.
inline Evolution evolve(const WaveField& u0, const PhysParams& params, const SolverConfig& cfg) {
  if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("evolve: t_end must be >= 0");
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double h = steps > 0 ? cfg.t_end / static_cast<double>(steps) : cfg.dt;
  const SplitStepSolver solver(u0.grid, params, h, cfg.reg);
  const std::size_t every = std::max<std::size_t>(cfg.record_every, 1);

  Evolution out;
  WaveField u = u0;
  auto record = [&](double t) {
    out.observables.push_back(observe(u, params, cfg.reg, t));
    if (cfg.store_snapshots) out.snapshots.push_back({t, u});
  };
  record(0.0);
  std::size_t done = 0;
  while (done < steps) {
    const std::size_t chunk = std::min(every, steps - done);
    solver.advance(u, chunk, static_cast<double>(done) * h, cfg.boundary_mass_limit);
    done += chunk;
    record(static_cast<double>(done) * h);
  }
  out.final_state = std::move(u);
  return out;
}

/// inf over theta of ||u - e^{i theta} phi||, evaluated at the optimal theta = arg <phi, u>.
inline double mod_distance(const WaveField& u, const WaveField& phi) {
  const cplx overlap = inner(phi, u);
  const cplx align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(u.values[i] - align * phi.values[i]);
  return std::sqrt(s * u.grid.cell());
}

}  // namespace gausson
