#pragma once

// Exact Gaussian reduction u(t,x) = b(t) exp(-a(t) x^2 / 2), a = 1/tau^2 - i tau'/tau, of the
// logarithmic equation in d = 1:
//
//   tau'' = 2 lambda / tau + 1 / tau^3 - V'' tau        (V'' = -omega^2 for the repulsive potential)
//   C     = tau'^2 - 4 lambda ln tau + 1 / tau^2 + V'' tau^2   (first integral)
//   |b(t)| = |b(0)| sqrt(tau(0) / tau(t)),  theta' = -1/(2 tau^2) - lambda ln|b|^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "gausson/errors.hpp"
#include "gausson/fit.hpp"
#include "gausson/gausson_profile.hpp"
#include "gausson/grid.hpp"
#include "gausson/params.hpp"

namespace gausson {

struct TauState {
  double tau = 1.0;
  double tau_dot = 0.0;
};

inline void require_positive_tau(double tau, std::string_view where) {
  if (!(tau > 0.0)) throw DomainError(std::string(where) + ": tau must be positive");
}

inline double tau_rhs(const TauState& s, const PhysParams& p) {
  require_positive_tau(s.tau, "tau_rhs");
  const double t = s.tau;
  return 2.0 * p.lambda / t + 1.0 / (t * t * t) - p.curvature() * t;
}

/// Same right-hand side written as P(1/tau^2) tau with P(X) = X^2 + 2 lambda X - V''.
inline double tau_rhs_factored(const TauState& s, const PhysParams& p) {
  require_positive_tau(s.tau, "tau_rhs_factored");
  const double x = 1.0 / (s.tau * s.tau);
  return (x * x + 2.0 * p.lambda * x - p.curvature()) * s.tau;
}

inline double first_integral(const TauState& s, const PhysParams& p) {
  require_positive_tau(s.tau, "first_integral");
  const double t = s.tau;
  return s.tau_dot * s.tau_dot - 4.0 * p.lambda * std::log(t) + 1.0 / (t * t) + p.curvature() * t * t;
}

/// Largest term magnitude of the first integral (at least 1); the round-off scale of C at s.
inline double first_integral_scale(const TauState& s, const PhysParams& p) {
  const double t = s.tau;
  return std::max({1.0, s.tau_dot * s.tau_dot, std::abs(4.0 * p.lambda * std::log(t)), 1.0 / (t * t),
                   std::abs(p.curvature()) * t * t});
}

inline TauState rk4_step(const TauState& s, const PhysParams& p, double h) {
  auto accel = [&](double tau) { return tau_rhs({tau, 0.0}, p); };
  const double k1x = s.tau_dot, k1v = accel(s.tau);
  const double x2 = s.tau + 0.5 * h * k1x;
  require_positive_tau(x2, "rk4_step (stage 2)");
  const double k2x = s.tau_dot + 0.5 * h * k1v, k2v = accel(x2);
  const double x3 = s.tau + 0.5 * h * k2x;
  require_positive_tau(x3, "rk4_step (stage 3)");
  const double k3x = s.tau_dot + 0.5 * h * k2v, k3v = accel(x3);
  const double x4 = s.tau + h * k3x;
  require_positive_tau(x4, "rk4_step (stage 4)");
  const double k4x = s.tau_dot + h * k3v, k4v = accel(x4);
  return {s.tau + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
          s.tau_dot + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

/// Per-step first-integral drift above which a step is rejected, relative to first_integral_scale.
inline constexpr double kStepDriftLimit = 1e-6;

/// One monitored step: throws StepRejected on excessive drift, logic_error if tau turns nonpositive.
inline TauState monitored_step(const TauState& s, const PhysParams& p, double h, double t) {
  TauState next;
  try {
    next = rk4_step(s, p, h);
  } catch (const DomainError&) {
    throw std::logic_error("tau-ODE integrator predicted tau <= 0; this indicates an integrator bug");
  }
  if (!(next.tau > 0.0))
    throw std::logic_error("tau-ODE integrator predicted tau <= 0; this indicates an integrator bug");
  const double drift = std::abs(first_integral(next, p) - first_integral(s, p)) /
                       std::max(first_integral_scale(s, p), first_integral_scale(next, p));
  if (drift > kStepDriftLimit) throw StepRejected(t + h, drift);
  return next;
}

struct TauSample {
  double t = 0.0;
  TauState state;
};

using Trajectory = std::vector<TauSample>;

/// Fixed-step RK4 on [0, t_end]; the step is shrunk uniformly so the last sample lands on t_end.
inline Trajectory integrate_tau(const TauState& init, const PhysParams& p, double t_end, double dt,
                                std::size_t record_every = 1) {
  require_positive_tau(init.tau, "integrate_tau");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_tau: dt must be positive");
  if (t_end < 0.0) throw std::invalid_argument("integrate_tau: t_end must be >= 0");
  record_every = std::max<std::size_t>(record_every, 1);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  Trajectory out;
  out.reserve(steps / record_every + 2);
  out.push_back({0.0, init});
  TauState s = init;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    s = monitored_step(s, p, h, t);
    if ((n + 1) % record_every == 0 || n + 1 == steps) out.push_back({static_cast<double>(n + 1) * h, s});
  }
  return out;
}

/// Stationary points of the tau-ODE, ascending.
inline std::vector<double> stationary_taus(const PhysParams& p) {
  if (p.potential == PotentialSign::Confining) {
    // k^2 + 2 lambda k - omega^2 = 0 has exactly one positive root.
    const double k = -p.lambda + std::hypot(p.lambda, p.omega);
    if (k > 0.0) return {1.0 / std::sqrt(k)};
    return {};
  }
  const auto roots = gausson_k(p);
  if (!roots) return {};
  switch (regime(p)) {
    case Regime::TwoGaussons: return {1.0 / std::sqrt(roots->k_plus), 1.0 / std::sqrt(roots->k_minus)};
    case Regime::Degenerate: return {1.0 / std::sqrt(p.omega)};
    case Regime::FlatGausson: return {1.0 / std::sqrt(roots->k_plus)};
    default: return {};
  }
}

/// Linearization coefficient Omega_eff = -V'' - 2 lambda k - 3 k^2 at tau = 1/sqrt(k).
/// For the roots of k^2 + 2 lambda k + omega^2 = 0 this equals -4 k (k + lambda).
inline double linearized_rate(double k, const PhysParams& p) {
  return -p.curvature() - 2.0 * p.lambda * k - 3.0 * k * k;
}

enum class TrajectoryKind { Stationary, Periodic, Unbounded, Inconclusive };

inline std::string_view to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Stationary: return "Stationary";
    case TrajectoryKind::Periodic: return "Periodic";
    case TrajectoryKind::Unbounded: return "Unbounded";
    case TrajectoryKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct TrajectoryClass {
  TrajectoryKind kind = TrajectoryKind::Inconclusive;
  std::optional<double> period;       // iff Periodic
  std::optional<double> growth_rate;  // iff Unbounded
  double horizon = 0.0;               // integration horizon used for the verdict
};

struct ClassifyOptions {
  double dt = 1e-3;
  double stationary_tol = 1e-10;
  double return_tol = 1e-6;
  double escape_factor = 100.0;
};

/// Horizon 10 * 2 pi / sqrt(min |Omega_eff|) over nondegenerate stationary points, else 50 / omega.
inline double classification_horizon(const PhysParams& p) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (double tau : stationary_taus(p)) {
    const double rate = std::abs(linearized_rate(1.0 / (tau * tau), p));
    if (rate > 1e-12) min_rate = std::min(min_rate, rate);
  }
  if (std::isfinite(min_rate)) return 10.0 * 2.0 * std::numbers::pi / std::sqrt(min_rate);
  return p.omega > 0.0 ? 50.0 / p.omega : 50.0;
}

namespace detail {

// Signed distance of s to the hyperplane through init orthogonal to the initial phase velocity.
inline double section_value(const TauState& s, const TauState& init, double init_accel) {
  return (s.tau - init.tau) * init.tau_dot + (s.tau_dot - init.tau_dot) * init_accel;
}

// Substep h in (0, dt] from `from` landing on the section, refined by secant/bisection.
inline TauState refine_section_crossing(const TauState& from, double dt, const TauState& init, double init_accel,
                                        const PhysParams& p, double& h_out) {
  double lo = 0.0, hi = dt;
  double glo = section_value(from, init, init_accel);
  double ghi = section_value(rk4_step(from, p, dt), init, init_accel);
  TauState best = from;
  for (int it = 0; it < 80; ++it) {
    double h = lo - glo * (hi - lo) / (ghi - glo);
    if (!(h > lo && h < hi)) h = 0.5 * (lo + hi);
    best = rk4_step(from, p, h);
    const double g = section_value(best, init, init_accel);
    if (std::abs(g) < 1e-15 || hi - lo < 1e-15) {
      h_out = h;
      return best;
    }
    if (g < 0.0) {
      lo = h;
      glo = g;
    } else {
      hi = h;
      ghi = g;
    }
    h_out = h;
  }
  return best;
}

}  // namespace detail

inline TrajectoryClass classify_trajectory(const TauState& init, const PhysParams& p, const ClassifyOptions& opt = {}) {
  require_positive_tau(init.tau, "classify_trajectory");
  const auto fixed = stationary_taus(p);
  TrajectoryClass out;
  out.horizon = classification_horizon(p);
  for (double tau : fixed) {
    if (std::abs(init.tau - tau) <= opt.stationary_tol * std::max(1.0, tau) &&
        std::abs(init.tau_dot) <= opt.stationary_tol) {
      out.kind = TrajectoryKind::Stationary;
      return out;
    }
  }

  double ref = init.tau;
  for (double tau : fixed) ref = std::max(ref, tau);
  const double escape = opt.escape_factor * ref;
  const double init_accel = tau_rhs(init, p);

  TauState s = init;
  double t = 0.0;
  int last_sign = 0;
  int sign_changes = 0;
  const auto steps = static_cast<std::size_t>(std::ceil(out.horizon / opt.dt));
  for (std::size_t n = 0; n < steps; ++n) {
    const TauState next = monitored_step(s, p, opt.dt, t);
    const int sgn = next.tau_dot > 0.0 ? 1 : (next.tau_dot < 0.0 ? -1 : 0);
    if (sgn != 0) {
      if (last_sign != 0 && sgn != last_sign) ++sign_changes;
      last_sign = sgn;
    }
    if (sign_changes > 0) {
      const double g0 = detail::section_value(s, init, init_accel);
      const double g1 = detail::section_value(next, init, init_accel);
      if (g0 < 0.0 && g1 >= 0.0) {
        double h = opt.dt;
        const TauState hit = detail::refine_section_crossing(s, opt.dt, init, init_accel, p, h);
        if (std::hypot(hit.tau - init.tau, hit.tau_dot - init.tau_dot) <= opt.return_tol) {
          out.kind = TrajectoryKind::Periodic;
          out.period = t + h;
          return out;
        }
      }
    }
    s = next;
    t += opt.dt;
    if (s.tau > escape && s.tau_dot > 0.0 && tau_rhs(s, p) > 0.0) {
      // Keep integrating to measure the asymptotic log-slope.
      std::vector<double> ts, logs;
      const double extra = 25.0 / std::max(p.omega, 0.5);
      const double t_detect = t;
      while (t - t_detect < extra && s.tau < 1e4 * escape) {
        s = monitored_step(s, p, opt.dt, t);
        t += opt.dt;
        ts.push_back(t);
        logs.push_back(std::log(s.tau));
      }
      out.kind = TrajectoryKind::Unbounded;
      const std::size_t start = ts.size() / 2;
      if (ts.size() - start >= 2) {
        out.growth_rate = fit_line(std::span(ts).subspan(start), std::span(logs).subspan(start)).slope;
      } else {
        out.growth_rate = 0.0;
      }
      return out;
    }
  }
  out.kind = TrajectoryKind::Inconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Phase portraits

struct PortraitSpec {
  double tau_min = 0.3;
  double tau_max = 2.5;
  double taudot_min = -1.5;
  double taudot_max = 1.5;
  std::size_t n_tau = 10;
  std::size_t n_taudot = 10;
  double t_end = 20.0;
  double dt = 1e-3;
  std::size_t sample_every = 20;
  /// Orbits stop once they leave the window enlarged by this factor.
  double clip_factor = 4.0;
};

struct OrbitSample {
  double t;
  double tau;
  double tau_dot;
  double first_integral;
};

struct Orbit {
  TauState init;
  std::vector<OrbitSample> samples;
  /// max |C(t) - C(0)| / max(1, |C(0)|) over every step.
  double max_relative_drift = 0.0;
};

enum class FixedPointType { Center, Saddle, Degenerate };

inline std::string_view to_string(FixedPointType t) {
  switch (t) {
    case FixedPointType::Center: return "center";
    case FixedPointType::Saddle: return "saddle";
    case FixedPointType::Degenerate: return "degenerate";
  }
  return "?";
}

struct FixedPoint {
  double tau;
  double omega_eff;
  FixedPointType type;
};

struct PhasePortrait {
  std::vector<FixedPoint> fixed_points;
  std::vector<Orbit> orbits;
};

inline std::vector<FixedPoint> fixed_points(const PhysParams& p) {
  std::vector<FixedPoint> out;
  for (double tau : stationary_taus(p)) {
    const double rate = linearized_rate(1.0 / (tau * tau), p);
    const double scale = std::max(1.0, std::abs(p.curvature()) + p.lambda * p.lambda);
    FixedPointType type = FixedPointType::Degenerate;
    if (rate > 1e-10 * scale) type = FixedPointType::Saddle;
    if (rate < -1e-10 * scale) type = FixedPointType::Center;
    out.push_back({tau, rate, type});
  }
  return out;
}

/// Initial conditions of the portrait grid, row-major in (tau, tau_dot).
inline std::vector<TauState> portrait_initial_conditions(const PortraitSpec& spec) {
  auto lin = [](double a, double b, std::size_t n, std::size_t i) {
    return n == 1 ? 0.5 * (a + b) : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<TauState> out;
  for (std::size_t i = 0; i < spec.n_tau; ++i)
    for (std::size_t j = 0; j < spec.n_taudot; ++j)
      out.push_back({lin(spec.tau_min, spec.tau_max, spec.n_tau, i),
                     lin(spec.taudot_min, spec.taudot_max, spec.n_taudot, j)});
  return out;
}

inline Orbit integrate_orbit(const TauState& init, const PhysParams& p, const PortraitSpec& spec) {
  Orbit orbit;
  orbit.init = init;
  const double c0 = first_integral(init, p);
  const double denom = std::max(1.0, std::abs(c0));
  const double tau_clip = spec.clip_factor * spec.tau_max;
  const double vel_clip = spec.clip_factor * std::max(std::abs(spec.taudot_min), std::abs(spec.taudot_max));
  const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt - 1e-9));
  const double h = spec.t_end / static_cast<double>(steps);
  TauState s = init;
  orbit.samples.push_back({0.0, s.tau, s.tau_dot, c0});
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    s = monitored_step(s, p, h, t);
    const double c = first_integral(s, p);
    orbit.max_relative_drift = std::max(orbit.max_relative_drift, std::abs(c - c0) / denom);
    const bool leaving = s.tau > tau_clip || std::abs(s.tau_dot) > vel_clip;
    if ((n + 1) % spec.sample_every == 0 || n + 1 == steps || leaving)
      orbit.samples.push_back({t + h, s.tau, s.tau_dot, c});
    if (leaving) break;
  }
  return orbit;
}

/// Applies fn to every element concurrently over hardware threads; results keep input order.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn) {
  using Out = decltype(fn(inputs.front()));
  std::vector<Out> out(inputs.size());
  const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < inputs.size(); i += workers) out[i] = fn(inputs[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

inline PhasePortrait phase_portrait(const PhysParams& p, const PortraitSpec& spec) {
  if (!(spec.tau_min > 0.0)) throw DomainError("phase_portrait: tau range must be positive");
  PhasePortrait out;
  out.fixed_points = fixed_points(p);
  out.orbits = parallel_map(portrait_initial_conditions(spec),
                            [&](const TauState& s) { return integrate_orbit(s, p, spec); });
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian ansatz and field reconstruction

struct GaussianAnsatz {
  TauState state;
  double theta = 0.0;   // accumulated phase of b
  double b0_mod = 1.0;  // |b(0)|
  double tau0 = 1.0;    // tau(0), for the modulus law

  double amplitude() const { return b0_mod * std::sqrt(tau0 / state.tau); }
  cplx b() const { return std::polar(amplitude(), theta); }
  /// a = 1/tau^2 - i tau'/tau.
  cplx a() const { return {1.0 / (state.tau * state.tau), -state.tau_dot / state.tau}; }
};

inline GaussianAnsatz make_ansatz(const TauState& init, double b0_mod, double theta0 = 0.0) {
  require_positive_tau(init.tau, "make_ansatz");
  if (!(b0_mod > 0.0)) throw DomainError("make_ansatz: |b0| must be positive");
  return {init, theta0, b0_mod, init.tau};
}

/// theta' = -1/(2 tau^2) - lambda ln|b|^2 with |b|^2 from the modulus law.
inline double ansatz_phase_rate(const GaussianAnsatz& g, double tau, double lambda) {
  const double amp2 = g.b0_mod * g.b0_mod * g.tau0 / tau;
  return -0.5 / (tau * tau) - lambda * std::log(amp2);
}

/// RK4 on (tau, tau', theta) with the same monitored tau step.
inline GaussianAnsatz advance_ansatz(GaussianAnsatz g, const PhysParams& p, double h) {
  const double t = g.state.tau;
  auto phase_rate = [&](double tau_stage) { return ansatz_phase_rate(g, tau_stage, p.lambda); };
  const TauState s = g.state;
  const double k1x = s.tau_dot, k1v = tau_rhs(s, p);
  const double x2 = t + 0.5 * h * k1x, v2 = s.tau_dot + 0.5 * h * k1v;
  const double k2v = tau_rhs({x2, v2}, p);
  const double x3 = t + 0.5 * h * v2, v3 = s.tau_dot + 0.5 * h * k2v;
  const double x4 = t + h * v3;
  const double dtheta = h / 6.0 * (phase_rate(t) + 2.0 * phase_rate(x2) + 2.0 * phase_rate(x3) + phase_rate(x4));
  g.state = monitored_step(s, p, h, 0.0);
  g.theta += dtheta;
  return g;
}

struct AnsatzSample {
  double t;
  GaussianAnsatz g;
};

inline std::vector<AnsatzSample> integrate_ansatz(const GaussianAnsatz& g0, const PhysParams& p, double t_end,
                                                  double dt, std::size_t record_every = 1) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_ansatz: dt must be positive");
  record_every = std::max<std::size_t>(record_every, 1);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  std::vector<AnsatzSample> out{{0.0, g0}};
  GaussianAnsatz g = g0;
  for (std::size_t n = 0; n < steps; ++n) {
    g = advance_ansatz(g, p, h);
    if ((n + 1) % record_every == 0 || n + 1 == steps) out.push_back({static_cast<double>(n + 1) * h, g});
  }
  return out;
}

/// Samples b exp(-a x^2 / 2) on a 1D grid.
inline WaveField ansatz_to_field(const GaussianAnsatz& g, const Grid& grid) {
  if (grid.dim != 1) throw GridMismatch("ansatz_to_field: 1D grids only (use tensor_product for 2D)");
  WaveField u(grid);
  const cplx b = g.b();
  const cplx a = g.a();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = grid.coord(i);
    u.values[i] = b * std::exp(-0.5 * a * x * x);
  }
  return u;
}

}  // namespace gausson
