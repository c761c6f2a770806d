// Gaussian-ansatz reduction: tau-ODE, first integral, fixed points, classification, ansatz fields.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gausson/gausson.hpp"

using namespace gausson;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const PhysParams kFig1(-2.0, 1.0);
const PhysParams kFig2(-2.0, 2.0);
const PhysParams kFig3(-1.0, 2.0);

// U(tau) = -4 lambda ln tau + 1/tau^2 - omega^2 tau^2, so that C = tau'^2 + U(tau).
double effective_potential(double tau, const PhysParams& p) { return first_integral({tau, 0.0}, p); }

}  // namespace

TEST(TauRhs, VanishesAtStationaryPoints) {
  for (const PhysParams& p : {kFig1, kFig2, PhysParams(-3.0, 0.5)})
    for (double tau : stationary_taus(p)) EXPECT_LE(std::abs(tau_rhs({tau, 0.0}, p)), 1e-12);
  EXPECT_DOUBLE_EQ(tau_rhs({1.0, 0.0}, kFig1), -2.0);
  EXPECT_THROW(tau_rhs({0.0, 0.0}, kFig1), DomainError);
  EXPECT_THROW(tau_rhs({-1.0, 0.0}, kFig1), DomainError);
}

TEST(TauRhs, FactoredFormAgrees) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> tau(0.2, 5.0), lam(-5.0, 1.0), om(0.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const PhysParams p(lam(rng), om(rng));
    const TauState s{tau(rng), 0.0};
    const double a = tau_rhs(s, p), b = tau_rhs_factored(s, p);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(FirstIntegral, SymmetricAndStationaryValue) {
  const TauState s{0.8, 0.37};
  EXPECT_DOUBLE_EQ(first_integral(s, kFig1), first_integral({0.8, -0.37}, kFig1));
  const double tm = stationary_taus(kFig1)[0];
  EXPECT_NEAR(first_integral({tm, 0.0}, kFig1), 8.0 * std::log(tm) + 1.0 / (tm * tm) - tm * tm, 1e-14);
  EXPECT_THROW(first_integral({0.0, 1.0}, kFig1), DomainError);
}

TEST(FirstIntegral, ConservedAlongTrajectory) {
  const auto traj = integrate_tau({1.0, 0.0}, kFig1, 20.0, 1e-3);
  const auto fine = integrate_tau({1.0, 0.0}, kFig1, 20.0, 1e-4, 10);
  const double c0 = first_integral(traj.front().state, kFig1);
  double drift = 0.0;
  for (const auto& s : traj) drift = std::max(drift, std::abs(first_integral(s.state, kFig1) - c0));
  EXPECT_LE(drift / std::max(1.0, std::abs(c0)), 1e-8);
  ASSERT_EQ(traj.size(), fine.size());
  EXPECT_NEAR(traj.back().state.tau, fine.back().state.tau, 1e-8);
  EXPECT_NEAR(traj.back().t, 20.0, 1e-12);
}

TEST(IntegrateTau, StationaryTrajectoryIsConstant) {
  for (double tau : stationary_taus(kFig1)) {
    const auto traj = integrate_tau({tau, 0.0}, kFig1, 10.0, 1e-3);
    for (const auto& s : traj) {
      EXPECT_NEAR(s.state.tau, tau, 1e-10);
      EXPECT_NEAR(s.state.tau_dot, 0.0, 1e-10);
    }
  }
}

TEST(IntegrateTau, NoStationaryRegimeGrowsAtRateOmega) {
  const auto traj = integrate_tau({1.0, 0.0}, kFig3, 10.0, 1e-3);
  std::vector<double> t, lt;
  for (const auto& s : traj)
    if (s.t >= 5.0) {
      t.push_back(s.t);
      lt.push_back(std::log(s.state.tau));
    }
  EXPECT_NEAR(fit_line(t, lt).slope, 2.0, 0.05 * 2.0);
}

TEST(IntegrateTau, PeriodicOrbitReturns) {
  const TauState init{0.4, 0.0};
  const auto cls = classify_trajectory(init, kFig1);
  ASSERT_EQ(cls.kind, TrajectoryKind::Periodic);
  ASSERT_TRUE(cls.period.has_value());
  const auto traj = integrate_tau(init, kFig1, *cls.period, 1e-3);
  EXPECT_NEAR(traj.back().state.tau, 0.4, 1e-6);
  int changes = 0;
  for (std::size_t i = 2; i < traj.size(); ++i)
    if ((traj[i].state.tau_dot > 0) != (traj[i - 1].state.tau_dot > 0)) ++changes;
  EXPECT_GE(changes, 1);
  // Oracle: period from a 10x finer classification.
  ClassifyOptions fine;
  fine.dt = 1e-4;
  const auto ref = classify_trajectory(init, kFig1, fine);
  ASSERT_TRUE(ref.period.has_value());
  EXPECT_NEAR(*cls.period, *ref.period, 1e-7);
}

TEST(IntegrateTau, RejectsCoarseSteps) {
  EXPECT_THROW(integrate_tau({0.3, 0.0}, kFig1, 5.0, 0.2), StepRejected);
  EXPECT_THROW(integrate_tau({0.0, 0.0}, kFig1, 1.0, 1e-3), DomainError);
  EXPECT_THROW(integrate_tau({1.0, 0.0}, kFig1, 1.0, 0.0), std::invalid_argument);
}

TEST(StationaryTaus, ThreeRegimes) {
  const auto two = stationary_taus(kFig1);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0], 0.51764, 1e-5);
  EXPECT_NEAR(two[1], 1.93185, 1e-5);
  EXPECT_NEAR(two[0], 1.0 / std::sqrt(2.0 + kSqrt3), 1e-15);
  const auto one = stationary_taus(kFig2);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(stationary_taus(kFig3).empty());
}

TEST(LinearizedRate, ClosedFormsAndFiniteDifferenceOracle) {
  const auto r = *gausson_k(kFig1);
  EXPECT_NEAR(linearized_rate(r.k_minus, kFig1), 8.0 * kSqrt3 - 12.0, 1e-12);
  EXPECT_NEAR(linearized_rate(r.k_plus, kFig1), -(8.0 * kSqrt3 + 12.0), 1e-11);
  EXPECT_NEAR(linearized_rate(2.0, kFig2), 0.0, 1e-12);
  for (double k : {r.k_minus, r.k_plus}) {
    EXPECT_NEAR(linearized_rate(k, kFig1), -4.0 * k * (k + kFig1.lambda), 1e-12);
    // Oracle: central difference of the right-hand side at tau = 1/sqrt(k).
    const double tau = 1.0 / std::sqrt(k), h = 1e-5;
    const double fd = (tau_rhs({tau + h, 0.0}, kFig1) - tau_rhs({tau - h, 0.0}, kFig1)) / (2.0 * h);
    EXPECT_NEAR(linearized_rate(k, kFig1), fd, 1e-6 * std::abs(fd));
  }
}

// Integrated departure around each fixed point matches sqrt|Omega_eff| within 1%.
TEST(LinearizedRate, MatchesIntegratedDynamics) {
  const auto r = *gausson_k(kFig1);
  const double t_saddle = 1.0 / std::sqrt(r.k_minus);
  const double eps = 1e-7;
  const auto traj = integrate_tau({t_saddle + eps, 0.0}, kFig1, 8.0, 1e-3);
  std::vector<double> t, lh;
  for (const auto& s : traj) {
    const double h = s.state.tau - t_saddle;
    if (h > 10.0 * eps && h < 1e-4) {
      t.push_back(s.t);
      lh.push_back(std::log(h));
    }
  }
  ASSERT_GT(t.size(), 100u);
  const double rate = std::sqrt(linearized_rate(r.k_minus, kFig1));
  EXPECT_NEAR(fit_line(t, lh).slope, rate, 0.01 * rate);

  const double t_center = 1.0 / std::sqrt(r.k_plus);
  ClassifyOptions opt;
  const auto cls = classify_trajectory({t_center + 1e-4, 0.0}, kFig1, opt);
  ASSERT_EQ(cls.kind, TrajectoryKind::Periodic);
  const double freq = std::sqrt(-linearized_rate(r.k_plus, kFig1));
  EXPECT_NEAR(2.0 * std::numbers::pi / *cls.period, freq, 0.01 * freq);
}

TEST(Classify, NamedExamples) {
  const double tm = stationary_taus(kFig1)[0];
  EXPECT_EQ(classify_trajectory({tm, 0.0}, kFig1).kind, TrajectoryKind::Stationary);
  EXPECT_EQ(classify_trajectory({stationary_taus(kFig1)[1], 0.0}, kFig1).kind, TrajectoryKind::Stationary);
  // 0.51764 is tau_- to five digits: a 2e-6 orbit around the center.
  EXPECT_EQ(classify_trajectory({0.51764, 0.0}, kFig1).kind, TrajectoryKind::Periodic);
  const auto per = classify_trajectory({0.45, 0.0}, kFig1);
  EXPECT_EQ(per.kind, TrajectoryKind::Periodic);
  EXPECT_GT(*per.period, 0.0);
  for (const TauState init : {TauState{1.0, 0.0}, TauState{0.3, -1.0}, TauState{2.5, 1.0}}) {
    const auto esc = classify_trajectory(init, kFig3);
    ASSERT_EQ(esc.kind, TrajectoryKind::Unbounded);
    EXPECT_NEAR(*esc.growth_rate, 2.0, 0.02);
  }
}

// Classification on 10 x 10 grids matches the first-integral criterion: in the two-Gausson case
// an orbit is bounded iff it starts left of the saddle below the saddle level; otherwise all escape.
TEST(Classify, TrichotomyOnInitialConditionGrids) {
  PortraitSpec spec;
  for (const PhysParams& p : {kFig1, kFig2, kFig3}) {
    const auto fixed = stationary_taus(p);
    int inconclusive = 0;
    for (const TauState& init : portrait_initial_conditions(spec)) {
      const auto cls = classify_trajectory(init, p);
      if (cls.kind == TrajectoryKind::Inconclusive) ++inconclusive;
      if (regime(p) == Regime::TwoGaussons) {
        const double t_saddle = fixed[1];
        const bool bounded = init.tau < t_saddle && first_integral(init, p) < effective_potential(t_saddle, p);
        EXPECT_EQ(cls.kind, bounded ? TrajectoryKind::Periodic : TrajectoryKind::Unbounded)
            << init.tau << "," << init.tau_dot;
      } else {
        EXPECT_EQ(cls.kind, TrajectoryKind::Unbounded) << init.tau << "," << init.tau_dot;
        EXPECT_NEAR(*cls.growth_rate, p.omega, 0.02 * p.omega);
      }
    }
    EXPECT_EQ(inconclusive, 0);
  }
}

TEST(Classify, ReportsInconclusiveInsteadOfGuessing) {
  // A bounded orbit whose return cannot be certified at this tolerance.
  ClassifyOptions opt;
  opt.return_tol = 1e-18;
  const auto cls = classify_trajectory({0.45, 0.0}, kFig1, opt);
  EXPECT_EQ(cls.kind, TrajectoryKind::Inconclusive);
  EXPECT_FALSE(cls.period.has_value());
}

TEST(PhasePortrait, FixedPointTopologies) {
  const auto f1 = fixed_points(kFig1);
  ASSERT_EQ(f1.size(), 2u);
  EXPECT_EQ(f1[0].type, FixedPointType::Center);
  EXPECT_NEAR(f1[0].tau, 0.518, 5e-4);
  EXPECT_EQ(f1[1].type, FixedPointType::Saddle);
  EXPECT_NEAR(f1[1].tau, 1.932, 5e-4);
  const auto f2 = fixed_points(kFig2);
  ASSERT_EQ(f2.size(), 1u);
  EXPECT_EQ(f2[0].type, FixedPointType::Degenerate);
  EXPECT_TRUE(fixed_points(kFig3).empty());
}

TEST(PhasePortrait, OrbitsConserveFirstIntegral) {
  PortraitSpec spec;
  for (const PhysParams& p : {kFig1, kFig2, kFig3}) {
    const auto portrait = phase_portrait(p, spec);
    ASSERT_EQ(portrait.orbits.size(), 100u);
    for (const auto& o : portrait.orbits) {
      EXPECT_LE(o.max_relative_drift, 1e-8);
      EXPECT_GE(o.samples.size(), 2u);
    }
  }
  EXPECT_THROW(phase_portrait(kFig1, PortraitSpec{.tau_min = 0.0}), DomainError);
}

TEST(Ansatz, ModulusLawAlongTrajectory) {
  const auto g0 = make_ansatz({0.7, 0.3}, 1.3, 0.2);
  for (const auto& s : integrate_ansatz(g0, kFig1, 5.0, 1e-3, 50))
    EXPECT_NEAR(s.g.amplitude() * std::sqrt(s.g.state.tau), 1.3 * std::sqrt(0.7), 1e-10);
}

TEST(Ansatz, StaticWidthGivesRealExponent) {
  const auto g = make_ansatz({0.9, 0.0}, 1.0);
  EXPECT_DOUBLE_EQ(g.a().real(), 1.0 / 0.81);
  EXPECT_EQ(g.a().imag(), 0.0);
}

TEST(Ansatz, StationaryAnsatzIsRotatingGausson) {
  const auto r = *gausson_k(kFig1);
  const double nu = 0.6;
  const GaussonSpec spec = make_gausson(kFig1, Branch::Plus, nu);
  const Grid grid(40.0, 2048);
  const auto g0 = make_ansatz({1.0 / std::sqrt(r.k_plus), 0.0}, gausson_value(spec, kFig1, 0.0));
  EXPECT_NEAR(ansatz_phase_rate(g0, g0.state.tau, kFig1.lambda), nu, 1e-12);
  const WaveField u0 = ansatz_to_field(g0, grid);
  EXPECT_LE(l2_distance(u0, gausson_field(spec, kFig1, grid)), 1e-12);
  const auto traj = integrate_ansatz(g0, kFig1, 2.0, 1e-3);
  EXPECT_NEAR(traj.back().g.theta, nu * 2.0, 1e-9);
  EXPECT_THROW(ansatz_to_field(g0, Grid(10.0, 64, 2)), GridMismatch);
}
