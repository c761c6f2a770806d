#pragma once

// Named experiments behind the gausson_cli subcommands. Each command reads an ExperimentConfig,
// writes CSV tables, an SVG plot and summary.txt into the output directory, and reports pass/fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "gausson/gausson.hpp"
#include "output.hpp"

namespace gausson::cli {

namespace fs = std::filesystem;

struct CommandResult {
  Summary summary;
  bool pass = true;
};

using CommandFn = std::function<CommandResult(const ExperimentConfig&, const fs::path&)>;

struct CommandInfo {
  std::string name;
  std::string description;
  std::set<std::string> keys;
  CommandFn run;
};

const std::set<std::string> kCommonKeys = {"lambda", "omega", "dim",     "potential", "grid.L",
                                           "grid.N", "dt",    "t_end",   "reg",       "output_dir"};

inline std::set<std::string> with_common(std::initializer_list<std::string> extra) {
  std::set<std::string> keys = kCommonKeys;
  keys.insert(extra);
  return keys;
}

namespace detail {

inline Grid grid_from(const ExperimentConfig& cfg, int dim, double L, long N) {
  const double length = cfg.num("grid.L", L);
  const long points = cfg.integer("grid.N", N);
  if (points < 2) throw ConfigError("grid.N must be >= 2");
  try {
    return Grid(length, static_cast<std::size_t>(points), dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline double positive(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  const double v = cfg.num(key, fallback);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

inline double reg_from(const ExperimentConfig& cfg) {
  const double r = cfg.num("reg", kDefaultReg);
  if (r < 0.0) throw ConfigError("reg must be >= 0");
  return r;
}

inline SolverConfig solver_config(const ExperimentConfig& cfg, const Grid& grid, const PhysParams& p, double t_end,
                                  std::size_t record_every, Summary& s) {
  SolverConfig sc;
  sc.dt = positive(cfg, "dt", 1e-3);
  sc.t_end = t_end;
  sc.reg = reg_from(cfg);
  sc.record_every = record_every;
  const double bound = dt_heuristic_bound(p, grid);
  s.put("dt", sc.dt);
  s.put("dt_heuristic_bound", bound);
  if (sc.dt > bound) {
    std::cerr << "warning: dt=" << sc.dt << " exceeds the stability heuristic " << bound << "\n";
    s.put("dt_warning", true);
  }
  return sc;
}

inline void put_params(Summary& s, const PhysParams& p) {
  s.put("lambda", p.lambda);
  s.put("omega", p.omega);
  s.put("dim", p.dim);
  s.put("potential", std::string(to_string(p.potential)));
  s.put("regime", std::string(to_string(regime(p))));
}

inline std::string branch_name(Branch b) {
  switch (b) {
    case Branch::Minus: return "minus";
    case Branch::Plus: return "plus";
    case Branch::Degenerate: return "degenerate";
  }
  return "?";
}

inline Branch parse_branch(const std::string& s) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  throw ConfigError("branch must be plus or minus, got '" + s + "'");
}

inline bool has_gausson(const PhysParams& p) {
  const Regime r = regime(p);
  return p.potential == PotentialSign::Repulsive && (r == Regime::TwoGaussons || r == Regime::Degenerate);
}

inline void require_gausson(const PhysParams& p, const std::string& cmd) {
  if (!has_gausson(p))
    throw RegimeError(cmd + ": requires the TwoGaussons or Degenerate regime, got " +
                      std::string(to_string(regime(p))));
}

inline std::vector<Branch> branches(const PhysParams& p) {
  if (regime(p) == Regime::Degenerate) return {Branch::Degenerate};
  return {Branch::Minus, Branch::Plus};
}

inline LineFit window_fit(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi && std::isfinite(y[i])) xs.push_back(x[i]), ys.push_back(y[i]);
  if (xs.size() < 2) return {std::nan(""), std::nan("")};
  return fit_line(xs, ys);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// First root of f on [a, b] where f(a) < 0 <= f(b), by bisection.
template <class F>
double bisect(F f, double a, double b, int iters = 60) {
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    (f(m) < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace detail

// ---------------------------------------------------------------------------
// gausson-check

inline CommandResult cmd_gausson_check(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg);
  require_gausson(p, "gausson-check");
  const double nu = cfg.num("nu", 0.0);
  const double reg = reg_from(cfg);
  const Grid grid = grid_from(cfg, p.dim, 40.0, 2048);
  const SolverConfig sc =
      solver_config(cfg, grid, p, cfg.num("t_end", 2.0), static_cast<std::size_t>(cfg.integer("record_every", 100)), s);
  const double tol_residual = cfg.num("tol.residual", 1e-6);
  const double tol_stationary = cfg.num("tol.stationarity", 1e-5);

  put_params(s, p);
  s.put("nu", nu);
  s.put("grid.L", grid.length);
  s.put("grid.N", grid.points);

  struct Row {
    std::string name;
    WaveField phi;
    std::vector<double> dist;
  };
  std::vector<Row> rows;
  std::vector<double> times;
  std::vector<double> masses;
  for (Branch b : branches(p)) {
    const GaussonSpec spec = make_gausson(p, b, nu);
    const std::string n = branch_name(b);
    WaveField phi = gausson_field(spec, p, grid);
    const double norm = l2_norm(phi);
    const double closed = gausson_mass(spec.k, p.lambda, p.dim) * std::exp(-nu / p.lambda);
    const double grid_mass = mass(phi);
    const double residual = stationary_residual(phi, p, nu, reg) / norm;
    s.put("k_" + n, spec.k);
    s.put("peak_" + n, gausson_value(spec, p, 0.0));
    s.put("mass_" + n, closed);
    s.put("mass_grid_" + n, grid_mass);
    s.put("energy_" + n, energy(phi, p, reg));
    s.put("residual_" + n, residual);
    res.pass &= residual <= tol_residual && rel_err(grid_mass, closed) <= 1e-8;
    masses.push_back(closed);

    const auto ev = evolve(phi, p, sc);
    std::vector<double> d;
    for (const auto& snap : ev.snapshots) d.push_back(mod_distance(snap.field, phi));
    if (times.empty())
      for (const auto& snap : ev.snapshots) times.push_back(snap.t);
    const double worst = *std::max_element(d.begin(), d.end());
    s.put("max_mod_distance_" + n, worst);
    res.pass &= worst <= tol_stationary;
    rows.push_back({n, std::move(phi), std::move(d)});
  }
  if (masses.size() == 2) {
    const bool ordered = masses[0] > masses[1];
    s.put("mass_ordering", ordered);
    res.pass &= ordered;
  }

  {
    std::vector<std::string> header{"t"};
    for (const auto& r : rows) header.push_back("mod_distance_" + r.name);
    CsvWriter csv(out / "stationarity.csv", header);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (rows.size() == 2) csv.row(times[i], rows[0].dist[i], rows[1].dist[i]);
      else csv.row(times[i], rows[0].dist[i]);
    }
  }
  if (p.dim == 1) {
    std::vector<std::string> header{"x"};
    for (const auto& r : rows) header.push_back("phi_" + r.name);
    CsvWriter csv(out / "profiles.csv", header);
    for (std::size_t i = 0; i < grid.points; ++i) {
      if (rows.size() == 2) csv.row(grid.coord(i), rows[0].phi.values[i].real(), rows[1].phi.values[i].real());
      else csv.row(grid.coord(i), rows[0].phi.values[i].real());
    }
  }
  Plot plot{"Gausson stationarity under the split-step solver", "t", "mod_distance", false, true, {}, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) plot.series.push_back({rows[i].name, times, rows[i].dist, kPalette[i]});
  write_svg(plot, out / "stationarity.svg");
  return res;
}

// ---------------------------------------------------------------------------
// phase-portrait

inline std::string topology(const std::vector<FixedPoint>& fps) {
  if (fps.empty()) return "none";
  std::string t;
  for (const auto& f : fps) t += (t.empty() ? "" : "+") + std::string(to_string(f.type));
  return t;
}

inline std::optional<std::string> expected_topology(const PhysParams& p) {
  if (p.potential != PotentialSign::Repulsive) return std::nullopt;
  switch (regime(p)) {
    case Regime::TwoGaussons: return "center+saddle";
    case Regime::Degenerate: return "degenerate";
    case Regime::NoStationary: return "none";
    case Regime::FlatGausson: return "center";
  }
  return std::nullopt;
}

inline CommandResult cmd_phase_portrait(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg);
  PortraitSpec spec;
  spec.tau_min = cfg.num("tau.min", spec.tau_min);
  spec.tau_max = cfg.num("tau.max", spec.tau_max);
  spec.taudot_min = cfg.num("taudot.min", spec.taudot_min);
  spec.taudot_max = cfg.num("taudot.max", spec.taudot_max);
  spec.n_tau = static_cast<std::size_t>(cfg.integer("n_tau", 10));
  spec.n_taudot = static_cast<std::size_t>(cfg.integer("n_taudot", 10));
  spec.t_end = positive(cfg, "t_end", spec.t_end);
  spec.dt = positive(cfg, "dt", spec.dt);
  spec.sample_every = static_cast<std::size_t>(std::max(1L, cfg.integer("sample_every", 20)));
  spec.clip_factor = positive(cfg, "clip_factor", spec.clip_factor);
  if (!(spec.tau_min > 0.0) || spec.tau_max <= spec.tau_min || spec.taudot_max < spec.taudot_min)
    throw ConfigError("phase-portrait: need 0 < tau.min < tau.max and taudot.min <= taudot.max");
  if (spec.n_tau < 1 || spec.n_taudot < 1) throw ConfigError("phase-portrait: n_tau and n_taudot must be >= 1");
  const double tol_drift = cfg.num("tol.first_integral", 1e-8);
  ClassifyOptions copt;
  copt.dt = positive(cfg, "classify.dt", copt.dt);

  put_params(s, p);
  const PhasePortrait portrait = phase_portrait(p, spec);
  const auto inits = portrait_initial_conditions(spec);
  const auto classes =
      parallel_map(inits, [&](const TauState& init) { return classify_trajectory(init, p, copt); });

  s.put("n_fixed_points", portrait.fixed_points.size());
  for (std::size_t i = 0; i < portrait.fixed_points.size(); ++i) {
    const auto& f = portrait.fixed_points[i];
    s.put("fixed_point_" + std::to_string(i) + "_tau", f.tau);
    s.put("fixed_point_" + std::to_string(i) + "_type", std::string(to_string(f.type)));
    s.put("fixed_point_" + std::to_string(i) + "_omega_eff", f.omega_eff);
  }
  const std::string topo = topology(portrait.fixed_points);
  s.put("topology", topo);
  if (const auto want = expected_topology(p)) {
    s.put("expected_topology", *want);
    res.pass &= topo == *want;
  }

  fs::create_directories(out / "orbits");
  CsvWriter index(out / "portrait.csv", {"orbit", "tau0", "tau_dot0", "first_integral", "kind", "period",
                                        "growth_rate", "max_relative_drift", "file"});
  std::size_t counts[4] = {0, 0, 0, 0};
  double max_drift = 0.0;
  Plot plot{"Phase portrait (" + topo + ")", "tau", "tau_dot", false, false, {}, {}};
  for (std::size_t i = 0; i < portrait.orbits.size(); ++i) {
    const Orbit& o = portrait.orbits[i];
    const TrajectoryClass& c = classes[i];
    ++counts[static_cast<int>(c.kind)];
    max_drift = std::max(max_drift, o.max_relative_drift);
    char name[32];
    std::snprintf(name, sizeof name, "orbit_%03zu.csv", i);
    CsvWriter csv(out / "orbits" / name, {"t", "tau", "tau_dot", "first_integral"});
    Series ser{"", {}, {}, c.kind == TrajectoryKind::Periodic ? "#1f77b4" : "#d62728"};
    for (const auto& smp : o.samples) {
      csv.row(smp.t, smp.tau, smp.tau_dot, smp.first_integral);
      if (smp.tau <= spec.tau_max * 1.2 && std::abs(smp.tau_dot) <= 1.2 * std::max(-spec.taudot_min, spec.taudot_max))
        ser.x.push_back(smp.tau), ser.y.push_back(smp.tau_dot);
    }
    index.row(i, o.init.tau, o.init.tau_dot, first_integral(o.init, p), std::string(to_string(c.kind)),
              c.period.value_or(std::nan("")), c.growth_rate.value_or(std::nan("")), o.max_relative_drift,
              std::string("orbits/") + name);
    plot.series.push_back(std::move(ser));
  }
  {
    CsvWriter fp(out / "fixed_points.csv", {"tau", "omega_eff", "type"});
    Series pts{"fixed points", {}, {}, "#000000", true};
    for (const auto& f : portrait.fixed_points) {
      fp.row(f.tau, f.omega_eff, std::string(to_string(f.type)));
      pts.x.push_back(f.tau), pts.y.push_back(0.0);
    }
    plot.series.push_back(std::move(pts));
  }
  plot.series.front().name = "periodic blue, unbounded red";
  write_svg(plot, out / "portrait.svg");

  s.put("n_orbits", portrait.orbits.size());
  s.put("n_stationary", counts[static_cast<int>(TrajectoryKind::Stationary)]);
  s.put("n_periodic", counts[static_cast<int>(TrajectoryKind::Periodic)]);
  s.put("n_unbounded", counts[static_cast<int>(TrajectoryKind::Unbounded)]);
  s.put("n_inconclusive", counts[static_cast<int>(TrajectoryKind::Inconclusive)]);
  s.put("max_first_integral_drift", max_drift);
  res.pass &= counts[static_cast<int>(TrajectoryKind::Inconclusive)] == 0 && max_drift <= tol_drift;
  return res;
}

// ---------------------------------------------------------------------------
// instability-translate

inline CommandResult cmd_instability_translate(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg);
  require_gausson(p, "instability-translate");
  const Branch branch = regime(p) == Regime::Degenerate ? Branch::Degenerate : parse_branch(cfg.str("branch", "plus"));
  const double nu = cfg.num("nu", 0.0);
  const bool boost = cfg.flag("boost", false);
  const double x0 = cfg.num("x0", 0.01);
  const double v = cfg.num("v", 0.05);
  const double t_max = positive(cfg, "t_max", 6.0);
  const double sample_dt = positive(cfg, "sample_dt", 0.01);
  const double eta = positive(cfg, "eta", 0.1);
  const double pde_t_end = cfg.num("pde_t_end", 2.0);
  const double tol_pde = cfg.num("tol.pde", 1e-4);
  const double tol_oracle = cfg.num("tol.oracle", 0.01);
  const Grid grid = grid_from(cfg, p.dim, 40.0, 2048);
  if (boost && !(p.omega > 0.0)) throw ConfigError("boost requires omega > 0");

  put_params(s, p);
  s.put("branch", branch_name(branch));
  s.put("variant", boost ? "galilean_boost" : "translation");
  s.put(boost ? "v" : "x0", boost ? v : x0);
  const GaussonSpec spec = make_gausson(p, branch, nu);
  const double k = spec.k, w = p.omega;
  s.put("k", k);
  const WaveField phi = gausson_field(spec, p, grid);
  const double norm = l2_norm(phi);
  const double half = 0.5 * norm;
  s.put("half_norm", half);

  auto exact = [&](double t) {
    return boost ? boosted_solitary_wave(spec, p, grid, {v, 0.0}, t)
                 : translated_solitary_wave(spec, p, grid, {x0, 0.0}, t);
  };
  // Gaussian overlap: |<u, phi>| = |phi|^2 exp(-q), q = k s^2/4 + beta^2/(4k).
  auto exponent = [&](double t) {
    const double shift = boost ? v * std::sinh(w * t) / w : x0 * std::cosh(w * t);
    const double beta = boost ? v * std::cosh(w * t) : w * x0 * std::sinh(w * t);
    return k * shift * shift / 4.0 + beta * beta / (4.0 * k);
  };
  auto closed = [&](double t) { return norm * std::sqrt(2.0 * -std::expm1(-exponent(t))); };
  auto grid_dist = [&](double t) { return mod_distance(exact(t), phi); };

  const double sigma0 = sigma_distance(exact(0.0), phi);
  s.put("initial_sigma_distance", sigma0);
  s.put("eta", eta);
  res.pass &= sigma0 < eta;

  CsvWriter csv(out / "curve.csv", {"t", "mod_distance", "closed_form"});
  std::vector<double> ts, ds, cs;
  std::optional<double> bracket_lo;
  double t_end_curve = 0.0, max_gap = 0.0;
  const auto n = static_cast<std::size_t>(std::ceil(t_max / sample_dt - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = std::min(t_max, static_cast<double>(i) * sample_dt);
    const WaveField u = exact(t);
    if (boundary_mass_fraction(u) > 1e-8) {
      s.put("curve_truncated_at", t);
      break;
    }
    const double d = mod_distance(u, phi), c = closed(t);
    csv.row(t, d, c);
    ts.push_back(t), ds.push_back(d), cs.push_back(c);
    max_gap = std::max(max_gap, std::abs(d - c));
    if (!bracket_lo && d > half && i > 0) bracket_lo = ts[ts.size() - 2];
    t_end_curve = t;
  }
  s.put("curve_t_end", t_end_curve);
  s.put("max_curve_closed_form_gap", max_gap);
  s.put("max_mod_distance", ds.empty() ? 0.0 : *std::max_element(ds.begin(), ds.end()));
  res.pass &= max_gap <= 1e-8 * norm;

  const bool moving = boost ? v != 0.0 : x0 != 0.0;
  s.put("crossed", bracket_lo.has_value());
  if (bracket_lo) {
    const double a = *bracket_lo, b = a + sample_dt;
    const double t_grid = bisect([&](double t) { return grid_dist(t) - half; }, a, b, 40);
    const double t_closed = bisect([&](double t) { return exponent(t) - std::log(8.0 / 7.0); }, a, b);
    s.put("T_star", t_grid);
    s.put("T_star_closed_form", t_closed);
    res.pass &= std::abs(t_grid - t_closed) <= 1e-6;
    if (!boost) {
      // Lower-bound oracle dropping the momentum term: s solves |phi(.-s) - phi| = |phi|/2.
      const double s_star = std::sqrt(4.0 * std::log(8.0 / 7.0) / k);
      const double t_oracle = std::acosh(std::max(1.0, s_star / std::abs(x0))) / w;
      s.put("shift_at_half_norm", s_star);
      s.put("T_star_oracle", t_oracle);
      s.put("T_star_rel_error", rel_err(t_grid, t_oracle));
      if (branch != Branch::Minus) res.pass &= rel_err(t_grid, t_oracle) <= tol_oracle;
    }
  } else if (moving) {
    res.pass = false;
  }

  // Short-horizon PDE cross-check of the exact transform.
  std::vector<double> pt, pd;
  if (pde_t_end > 0.0) {
    const SolverConfig sc =
        solver_config(cfg, grid, p, pde_t_end, static_cast<std::size_t>(cfg.integer("record_every", 100)), s);
    const auto ev = evolve(exact(0.0), p, sc);
    CsvWriter pc(out / "pde_check.csv", {"t", "l2_defect", "mod_distance_pde"});
    double worst = 0.0;
    for (const auto& snap : ev.snapshots) {
      const double defect = l2_distance(snap.field, exact(snap.t));
      worst = std::max(worst, defect);
      pc.row(snap.t, defect, mod_distance(snap.field, phi));
      pt.push_back(snap.t), pd.push_back(defect);
    }
    s.put("pde_t_end", pde_t_end);
    s.put("max_pde_defect", worst);
    res.pass &= worst <= tol_pde;
  }

  Plot plot{"Distance to the Gausson orbit", "t", "inf_theta |u(t) - e^{i theta} phi|", false, false, {}, {}};
  plot.series.push_back({"exact transform", ts, ds, kPalette[0]});
  plot.series.push_back({"closed form", ts, cs, kPalette[1]});
  plot.hlines.push_back({half, "half norm"});
  write_svg(plot, out / "curve.svg");
  return res;
}

// ---------------------------------------------------------------------------
// instability-gaussian

inline CommandResult cmd_instability_gaussian(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg);
  require_gausson(p, "instability-gaussian");
  const double eps = positive(cfg, "eps", 1e-4);
  const double taudot_eps = positive(cfg, "taudot_eps", 1e-3);
  const double dt = positive(cfg, "dt", 1e-3);
  const double t_end = positive(cfg, "t_end", 20.0);
  const double h_max = positive(cfg, "h_max", 1e-2);
  const double tol_rate = cfg.num("tol.rate", 0.02);
  const std::size_t every = static_cast<std::size_t>(std::max(1L, cfg.integer("record_every", 10)));
  put_params(s, p);
  const auto roots = *gausson_k(p);

  // Integrates until |h| exceeds 100 h_max or t_end, samples every `every` steps.
  auto depart = [&](const TauState& init, double tau_ref) {
    std::vector<TauSample> out_samples{{0.0, init}};
    TauState st = init;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    for (std::size_t i = 0; i < steps; ++i) {
      st = monitored_step(st, p, dt, static_cast<double>(i) * dt);
      const double t = static_cast<double>(i + 1) * dt;
      const bool stop = std::abs(st.tau - tau_ref) > 100.0 * h_max;
      if ((i + 1) % every == 0 || stop) out_samples.push_back({t, st});
      if (stop) break;
    }
    return out_samples;
  };

  std::vector<double> t, h, l2;
  std::vector<TauSample> traj;
  if (regime(p) == Regime::TwoGaussons) {
    // Saddle tau_+ = 1/sqrt(k_-): exponential departure.
    const double k = roots.k_minus, tau_s = 1.0 / std::sqrt(k);
    const double expected = std::sqrt(linearized_rate(k, p));
    traj = depart({tau_s + eps, 0.0}, tau_s);
    std::vector<double> lt, lh;
    for (const auto& smp : traj) {
      const double dh = smp.state.tau - tau_s;
      t.push_back(smp.t), h.push_back(dh);
      if (dh > 10.0 * eps && dh < h_max) lt.push_back(smp.t), lh.push_back(std::log(dh));
    }
    const double rate = lh.size() >= 2 ? fit_line(lt, lh).slope : std::nan("");
    s.put("saddle_tau", tau_s);
    s.put("saddle_rate_fit", rate);
    s.put("saddle_rate_expected", expected);
    s.put("saddle_rate_rel_error", rel_err(rate, expected));
    res.pass &= rel_err(rate, expected) <= tol_rate;

    // Center tau_- = 1/sqrt(k_+): bounded oscillation.
    const double kc = roots.k_plus, tau_c = 1.0 / std::sqrt(kc);
    const double freq_expected = std::sqrt(-linearized_rate(kc, p));
    const auto cls = classify_trajectory({tau_c + eps, 0.0}, p);
    s.put("center_tau", tau_c);
    s.put("center_kind", std::string(to_string(cls.kind)));
    const double freq = cls.period ? 2.0 * std::numbers::pi / *cls.period : std::nan("");
    s.put("center_frequency_fit", freq);
    s.put("center_frequency_expected", freq_expected);
    s.put("center_frequency_rel_error", rel_err(freq, freq_expected));
    res.pass &= cls.kind == TrajectoryKind::Periodic && rel_err(freq, freq_expected) <= tol_rate;
    const auto ct = integrate_tau({tau_c + eps, 0.0}, p, 5.0 * cls.period.value_or(1.0), dt, every);
    double max_dev = 0.0;
    CsvWriter csv(out / "center.csv", {"t", "tau", "h"});
    for (const auto& smp : ct) {
      max_dev = std::max(max_dev, std::abs(smp.state.tau - tau_c));
      csv.row(smp.t, smp.state.tau, smp.state.tau - tau_c);
    }
    s.put("center_max_departure", max_dev);
    res.pass &= max_dev <= 2.0 * eps;

    // L2 distance of the reconstructed field from the k_- Gausson (1D reconstruction).
    if (p.dim == 1) {
      const Grid grid = grid_from(cfg, 1, 40.0, 2048);
      const GaussonSpec spec = make_gausson(p, Branch::Minus);
      const WaveField phi = gausson_field(spec, p, grid);
      GaussianAnsatz g = make_ansatz({tau_s + eps, 0.0}, gausson_value(spec, p, 0.0));
      double tt = 0.0, max_l2 = 0.0;
      const double t_last = traj.back().t;
      std::size_t j = 0;
      for (const auto& smp : traj) {
        while (tt < smp.t - 1e-12) {
          g = advance_ansatz(g, p, dt);
          tt += dt;
        }
        double d = std::nan("");
        if (j++ % 10 == 0 || smp.t == t_last) {
          d = mod_distance(ansatz_to_field(g, grid), phi);
          max_l2 = std::max(max_l2, d);
        }
        l2.push_back(d);
      }
      s.put("max_l2_distance_from_gausson", max_l2);
    }
  } else {
    // Degenerate point: h(0) = 0, h'(0) = taudot_eps gives linear departure.
    const double k = roots.k_plus, tau_d = 1.0 / std::sqrt(k);
    const double t_lin = positive(cfg, "t_linear", 1.0);
    traj = depart({tau_d, taudot_eps}, tau_d);
    std::vector<double> lt, lh;
    for (const auto& smp : traj) {
      t.push_back(smp.t), h.push_back(smp.state.tau - tau_d);
      if (smp.t <= t_lin) lt.push_back(smp.t), lh.push_back(smp.state.tau - tau_d);
    }
    const LineFit lf = fit_line(lt, lh);
    s.put("degenerate_tau", tau_d);
    s.put("linear_slope_fit", lf.slope);
    s.put("linear_slope_expected", taudot_eps);
    s.put("linear_slope_rel_error", rel_err(lf.slope, taudot_eps));
    const double t_last = t.back(), h_last = h.back();
    s.put("final_t", t_last);
    s.put("final_h", h_last);
    const bool superlinear = h_last > taudot_eps * t_last;
    s.put("superlinear", superlinear);
    const auto cls = classify_trajectory({tau_d, taudot_eps}, p);
    s.put("kind", std::string(to_string(cls.kind)));
    res.pass &= rel_err(lf.slope, taudot_eps) <= tol_rate && superlinear && cls.kind == TrajectoryKind::Unbounded;
  }

  CsvWriter csv(out / "departure.csv", {"t", "tau", "tau_dot", "h", "l2_distance"});
  for (std::size_t i = 0; i < traj.size(); ++i)
    csv.row(traj[i].t, traj[i].state.tau, traj[i].state.tau_dot, h[i], i < l2.size() ? l2[i] : std::nan(""));
  Plot plot{"Departure from the stationary width", "t", "|h(t)|", false, true, {}, {}};
  std::vector<double> ah(h.size());
  std::transform(h.begin(), h.end(), ah.begin(), [](double x) { return std::abs(x); });
  plot.series.push_back({"|tau - tau_stationary|", t, ah, kPalette[0]});
  write_svg(plot, out / "departure.svg");
  return res;
}

// ---------------------------------------------------------------------------
// dispersion

inline CommandResult cmd_dispersion(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg, -1.0, 2.0);
  const TauState init{positive(cfg, "tau0", 1.0), cfg.num("taudot0", 0.0)};
  const double b0 = positive(cfg, "b0", 1.0);
  const double t_end = positive(cfg, "t_end", 10.0);
  const double dt = positive(cfg, "dt", 1e-3);
  const double fit_start = cfg.num("fit.start", 5.0), fit_end = cfg.num("fit.end", t_end);
  const double tol = cfg.num("tol.slope", 0.05);
  if (!(fit_start < fit_end) || fit_end > t_end) throw ConfigError("dispersion: need fit.start < fit.end <= t_end");
  put_params(s, p);

  const auto traj = integrate_tau(init, p, t_end, dt, static_cast<std::size_t>(std::max(1L, cfg.integer("record_every", 10))));
  std::vector<double> t, lt, ls;
  CsvWriter csv(out / "dispersion.csv", {"t", "tau", "log_tau", "supnorm"});
  for (const auto& smp : traj) {
    const double sup = b0 * std::pow(init.tau / smp.state.tau, 0.5 * p.dim);
    csv.row(smp.t, smp.state.tau, std::log(smp.state.tau), sup);
    t.push_back(smp.t), lt.push_back(std::log(smp.state.tau)), ls.push_back(std::log(sup));
  }
  const double slope = window_fit(t, lt, fit_start, fit_end).slope;
  const double exponent = window_fit(t, ls, fit_start, fit_end).slope;
  const auto cls = classify_trajectory(init, p);
  const bool escapes = cls.kind == TrajectoryKind::Unbounded;
  const double want_slope = escapes ? p.omega : 0.0;
  const double want_exp = -0.5 * p.dim * want_slope;
  s.put("kind", std::string(to_string(cls.kind)));
  s.put("log_tau_slope", slope);
  s.put("log_tau_slope_expected", want_slope);
  s.put("supnorm_exponent", exponent);
  s.put("supnorm_exponent_expected", want_exp);
  s.put("log_tau_over_t", std::log(traj.back().state.tau / init.tau) / traj.back().t);
  s.put("fit.start", fit_start);
  s.put("fit.end", fit_end);
  res.pass &= std::abs(slope - want_slope) <= tol * std::max(1.0, want_slope) &&
              std::abs(exponent - want_exp) <= tol * std::max(1.0, std::abs(want_exp));
  if (escapes) res.pass &= cls.growth_rate && std::abs(*cls.growth_rate - p.omega) <= tol * p.omega;

  Plot plot{"Width growth of the Gaussian solution", "t", "log tau", false, false, {}, {}};
  plot.series.push_back({"log tau", t, lt, kPalette[0]});
  plot.series.push_back({"log supnorm", t, ls, kPalette[1]});
  write_svg(plot, out / "dispersion.svg");
  return res;
}

// ---------------------------------------------------------------------------
// nehari-witness

inline CommandResult cmd_nehari_witness(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const PhysParams p = physical_params(cfg);
  const double nu = cfg.num("nu", 0.0);
  const double reg = reg_from(cfg);
  const auto eps_list = cfg.list("eps_list", {0.1, 0.01, 0.001});
  const double contrast_max = positive(cfg, "contrast.eps_max", 0.5);
  const double tol = cfg.num("tol.nehari", 1e-5);
  for (double e : eps_list)
    if (!(e > 0.0)) throw ConfigError("eps_list entries must be positive");
  put_params(s, p);
  s.put("nu", nu);

  const auto rows = delta_nu_scan(nu, p, eps_list, reg);
  s.put("n_witnesses", rows.size());
  s.put("n_skipped", eps_list.size() - rows.size());
  CsvWriter csv(out / "scan.csv", {"eps", "x0", "mass", "nehari_residual"});
  std::vector<double> es, ms;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv.row(r.eps, r.x0, r.mass, r.nehari_residual);
    s.put("eps_" + std::to_string(i), r.eps);
    s.put("x0_" + std::to_string(i), r.x0);
    s.put("mass_" + std::to_string(i), r.mass);
    s.put("quadrature_mass_" + std::to_string(i), r.quadrature_mass);
    s.put("nehari_residual_" + std::to_string(i), r.nehari_residual);
    res.pass &= std::abs(r.nehari_residual) <= tol * r.mass && rel_err(r.quadrature_mass, r.mass) <= 1e-8;
    es.push_back(r.eps), ms.push_back(r.mass);
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rows[a].eps > rows[b].eps; });
  bool monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i) monotone &= rows[order[i]].mass < rows[order[i - 1]].mass;
  s.put("masses_decreasing", monotone);
  res.pass &= monotone && !rows.empty();

  Plot plot{"Nehari witnesses: mass against amplitude", "eps", "mass", true, true, {}, {}};
  plot.series.push_back({"witness mass", es, ms, kPalette[0], true});

  if (has_gausson(p)) {
    const Grid grid = grid_from(cfg, p.dim, 40.0, 2048);
    double min_gausson = std::numeric_limits<double>::infinity();
    for (Branch b : branches(p)) {
      const GaussonSpec spec = make_gausson(p, b, nu);
      const WaveField phi = gausson_field(spec, p, grid);
      const QuadraticTerms terms = quadratic_terms(phi, reg);
      const double rel = std::abs(nehari(terms, nu, p)) / nehari_scale(terms, nu, p);
      const double m = gausson_mass(spec.k, p.lambda, p.dim) * std::exp(-nu / p.lambda);
      s.put("gausson_nehari_rel_" + branch_name(b), rel);
      s.put("gausson_mass_" + branch_name(b), m);
      res.pass &= rel <= tol;
      min_gausson = std::min(min_gausson, m);
      plot.hlines.push_back({m, "Gausson " + branch_name(b)});
    }
    std::vector<double> dense;
    for (int i = 0; i < 40; ++i) dense.push_back(contrast_max * std::pow(10.0, -0.15 * i));
    double max_witness = 0.0;
    for (double e : dense)
      if (solve_witness_x0(e, nu, p)) max_witness = std::max(max_witness, witness_integrals({e, {}, nu, p.dim}).mass);
    s.put("contrast.eps_max", contrast_max);
    s.put("max_witness_mass_below_eps_max", max_witness);
    s.put("witnesses_below_gausson_masses", max_witness < min_gausson);
    res.pass &= max_witness < min_gausson;
  }
  write_svg(plot, out / "scan.svg");
  return res;
}

// ---------------------------------------------------------------------------
// invariance-check

struct RegimeCase {
  double lambda;
  double omega;
};

inline std::vector<RegimeCase> parse_regimes(const std::string& text) {
  std::vector<RegimeCase> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');) {
    item = trim(item);
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ConfigError("regimes: expected 'lambda,omega' pairs separated by ';'");
    try {
      out.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ConfigError("regimes: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("regimes: empty list");
  return out;
}

inline CommandResult cmd_invariance_check(const ExperimentConfig& cfg, const fs::path& out) {
  using namespace detail;
  CommandResult res;
  Summary& s = res.summary;
  const double t = positive(cfg, "t_end", 1.0);
  const double width = positive(cfg, "width", 0.8);
  const double tol = cfg.num("tol", 1e-5);
  const cplx c(cfg.num("c.re", 1.2), cfg.num("c.im", 0.3));
  const Vec2 v{cfg.num("v", 0.05), 0.0};
  const Vec2 x0{cfg.num("x0", 0.05), 0.0};
  const double sign = cfg.num("galilean_phase_sign", 1.0);
  const long n2d = cfg.integer("grid.N2d", 256);
  const auto cases = parse_regimes(cfg.str("regimes", "-2,1; -2,2; -1,2"));
  if (c == cplx(0.0, 0.0)) throw ConfigError("c must be nonzero");
  if (cfg.integer("dim", 1) != 1) throw ConfigError("invariance-check runs 1D data (tensor rows use 2D)");
  const Grid grid = grid_from(cfg, 1, 80.0, 4096);
  Grid grid2(1.0, 2);
  try {
    grid2 = Grid(grid.length, static_cast<std::size_t>(n2d), 1);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.put("t", t);
  s.put("tol", tol);
  s.put("grid.L", grid.length);
  s.put("grid.N", grid.points);
  s.put("galilean_phase_sign", sign);

  auto gaussian = [&](const Grid& g, double shift) {
    WaveField u(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = g.coord(i) - shift;
      u.values[i] = std::exp(-x * x / (2.0 * width * width));
    }
    return u;
  };

  CsvWriter csv(out / "invariance_matrix.csv", {"regime", "lambda", "omega", "transform", "role", "defect", "tol", "pass"});
  double max_defect = 0.0, min_control = std::numeric_limits<double>::infinity();
  std::vector<std::string> labels;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    PhysParams p;
    try {
      p = PhysParams(cases[ci].lambda, cases[ci].omega);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!(p.omega > 0.0)) throw ConfigError("invariance-check: every regime needs omega > 0");
    std::string label = std::string(to_string(regime(p)));
    if (std::count(labels.begin(), labels.end(), label)) label += "_" + std::to_string(ci);
    labels.push_back(label);
    Summary scratch;
    const SolverConfig sc = [&] {
      SolverConfig cfg1 = solver_config(cfg, grid, p, t, 1000000, ci == 0 ? s : scratch);
      cfg1.store_snapshots = false;
      return cfg1;
    }();
    auto run = [&](const WaveField& u0, const PhysParams& pp) { return evolve(u0, pp, sc).final_state; };

    const WaveField u0 = gaussian(grid, 0.0);
    const WaveField base = run(u0, p);
    struct Entry {
      std::string name, role;
      double defect;
    };
    std::vector<Entry> entries;
    auto galilean = [&](const WaveField& u, const Vec2& vv, double tt, double sg) {
      return gausson::detail::galilean(u, vv, tt, p.omega, sg);
    };
    entries.push_back({"size", "check",
                       l2_distance(run(apply_size(u0, c, 0.0, p.lambda), p), apply_size(base, c, t, p.lambda))});
    entries.push_back({"galilean", "check",
                       l2_distance(run(galilean(u0, v, 0.0, sign), p), galilean(base, v, t, sign))});
    entries.push_back({"translation", "check",
                       l2_distance(run(apply_translation(u0, x0, 0.0, p.omega), p),
                                   apply_translation(base, x0, t, p.omega))});
    {
      const WaveField a = gaussian(grid2, 0.3), b = gaussian(grid2, -0.2);
      PhysParams p2 = p;
      p2.dim = 2;
      const WaveField lhs = run(tensor_product(a, b), p2);
      entries.push_back({"tensor", "check", l2_distance(lhs, tensor_product(run(a, p), run(b, p)))});
    }
    entries.push_back({"size_identity", "identity",
                       l2_distance(run(apply_size(u0, 1.0, 0.0, p.lambda), p), apply_size(base, 1.0, t, p.lambda))});
    entries.push_back({"galilean_identity", "identity",
                       l2_distance(run(apply_galilean(u0, {0.0, 0.0}, 0.0, p.omega), p),
                                   apply_galilean(base, {0.0, 0.0}, t, p.omega))});
    entries.push_back({"translation_identity", "identity",
                       l2_distance(run(apply_translation(u0, {0.0, 0.0}, 0.0, p.omega), p),
                                   apply_translation(base, {0.0, 0.0}, t, p.omega))});
    entries.push_back({"galilean_wrong_sign", "control",
                       l2_distance(run(galilean(u0, v, 0.0, -1.0), p), galilean(base, v, t, -1.0))});

    for (const auto& e : entries) {
      const bool ok = e.role == "control" ? e.defect > tol : e.defect <= tol;
      csv.row(label, p.lambda, p.omega, e.name, e.role, e.defect, tol, std::string(ok ? "true" : "false"));
      s.put("defect." + label + "." + e.name, e.defect);
      if (e.role == "control") {
        min_control = std::min(min_control, e.defect);
      } else {
        max_defect = std::max(max_defect, e.defect);
        res.pass &= ok;
      }
    }
  }
  const bool flagged = min_control > tol;
  s.put("max_defect", max_defect);
  s.put("control_min_defect", min_control);
  s.put("control_flagged", flagged);
  res.pass &= flagged;
  return res;
}

// ---------------------------------------------------------------------------

inline const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> list = {
      {"gausson-check", "Build the Gaussons, check residuals, masses and PDE stationarity",
       with_common({"nu", "record_every", "tol.residual", "tol.stationarity"}), cmd_gausson_check},
      {"phase-portrait", "Phase portrait and trajectory classification of the width ODE",
       with_common({"tau.min", "tau.max", "taudot.min", "taudot.max", "n_tau", "n_taudot", "sample_every",
                    "clip_factor", "classify.dt", "tol.first_integral"}),
       cmd_phase_portrait},
      {"instability-translate", "Orbital instability of a translated Gausson via the exact transform",
       with_common({"branch", "nu", "x0", "v", "boost", "t_max", "sample_dt", "eta", "pde_t_end", "record_every",
                    "tol.pde", "tol.oracle"}),
       cmd_instability_translate},
      {"instability-gaussian", "Departure of Gaussian solutions from the stationary width",
       with_common({"eps", "taudot_eps", "h_max", "t_linear", "record_every", "tol.rate"}), cmd_instability_gaussian},
      {"dispersion", "Exponential dispersion of Gaussian solutions",
       with_common({"tau0", "taudot0", "b0", "fit.start", "fit.end", "record_every", "tol.slope"}), cmd_dispersion},
      {"nehari-witness", "Vanishing-mass witnesses on the Nehari manifold",
       with_common({"nu", "eps_list", "contrast.eps_max", "tol.nehari"}), cmd_nehari_witness},
      {"invariance-check", "Commutation of the exact symmetries with the solver",
       with_common({"width", "tol", "c.re", "c.im", "v", "x0", "galilean_phase_sign", "grid.N2d", "regimes"}),
       cmd_invariance_check},
  };
  return list;
}

inline const CommandInfo* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

/// Runs a command and writes summary.txt. Exit code 0 pass, 1 tolerance failure, 2 configuration error.
inline int run_command(const CommandInfo& cmd, const ExperimentConfig& cfg, const std::optional<fs::path>& out_flag,
                       std::ostream& log = std::cerr) {
  fs::path out;
  try {
    cfg.check_keys(cmd.keys);
    out = out_flag ? *out_flag : fs::path(cfg.str("output_dir", "out/" + cmd.name));
    fs::create_directories(out);
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  }
  auto finish = [&](Summary s, const std::string& status, int code) {
    Summary head;
    head.put("command", cmd.name);
    head.put("status", status);
    head.put("pass", code == 0);
    for (const auto& [k, v] : s.entries()) head.put(k, v);
    head.write(out / "summary.txt");
    return code;
  };
  try {
    CommandResult r = cmd.run(cfg, out);
    return finish(std::move(r.summary), r.pass ? "pass" : "tolerance_failure", r.pass ? 0 : 1);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "config_error", 2);
  } catch (const RegimeError& e) {
    log << "regime error: " << e.what() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "regime_error", 2);
  } catch (const GridResolutionError& e) {
    log << "grid error: " << e.what() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "config_error", 2);
  } catch (const BoundaryLeak& e) {
    log << "boundary leak at t=" << e.time() << "\n";
    Summary s;
    s.put("error", e.what());
    s.put("boundary_leak_time", e.time());
    return finish(s, "boundary_leak", 1);
  } catch (const StepRejected& e) {
    log << "step rejected at t=" << e.time() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "step_rejected", 1);
  } catch (const std::logic_error& e) {
    log << "invalid input: " << e.what() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "config_error", 2);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    Summary s;
    s.put("error", e.what());
    return finish(s, "error", 1);
  }
}

}  // namespace gausson::cli
