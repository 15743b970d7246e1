#include "qecdyn/dynamics.hpp"
#include "qecdyn/errors.hpp"
#include "qecdyn/metrics.hpp"
#include "qecdyn/pauli_channels.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

using namespace qecdyn;
using code5::Decoder;
using code5::DecoderKind;
using code5::LogicalState;

namespace {

const Decoder& standard() { return Decoder::get(DecoderKind::Standard); }
const Decoder& fc() { return Decoder::get(DecoderKind::FullConnectivityZZ); }

Vector basis(Eigen::Index dim, Eigen::Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST(Eta, ZeroForIdealAndCorrectableStates) {
  for (auto kind : {DecoderKind::Standard, DecoderKind::FullConnectivityZZ, DecoderKind::Ring}) {
    const auto& d = Decoder::get(kind);
    for (auto s : code5::kAllLogicalStates) {
      const PureState& psi = code5::logical_state(s);
      EXPECT_NEAR(failure_eta(projector(psi), d, psi), 0.0, 1e-12);
      for (const auto& c : code5::correctable_set(d)) {
        EXPECT_NEAR(failure_eta(projector(apply_pauli(c, psi)), d, psi), 0.0, 1e-12);
      }
    }
  }
}

TEST(Eta, RangeAndComplement) {
  fixtures::Random rng(71);
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = rng.density_matrix(32);
    const double p = success_probability(rho, standard(), psi);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_NEAR(failure_eta(rho, standard(), psi), 1.0 - p, 1e-15);
  }
  // Maximally mixed: the 16 correctable images span half of the space.
  EXPECT_NEAR(failure_eta(Matrix(Matrix::Identity(32, 32) / 32.0), standard(), psi), 0.5, 1e-12);
}

TEST(Eta, GroundStateLimit) {
  // |00000>: only I and Z_k images of the even-weight |0>_L overlap it (5/8 failure),
  // only X_k and Y_k images of |1>_L do (3/8 failure).
  const DensityMatrix ground = projector(basis(32, 0));
  EXPECT_NEAR(failure_eta(ground, standard(), code5::logical_state(LogicalState::Zero)), 5.0 / 8, 1e-12);
  EXPECT_NEAR(failure_eta(ground, standard(), code5::logical_state(LogicalState::One)), 3.0 / 8, 1e-12);
  EXPECT_NEAR(failure_eta(ground, standard(), code5::logical_state(LogicalState::Plus)), 0.5, 1e-12);
}

TEST(AlphaBeta, LogicalInputs) {
  for (auto s : code5::kAllLogicalStates) {
    const PureState& psi = code5::logical_state(s);
    const AlphaBeta ab = corrected_alpha_beta(projector(psi), standard(), psi);
    EXPECT_NEAR(ab.alpha, 0.0, 1e-12);
    EXPECT_NEAR(std::abs(ab.beta), 0.0, 1e-12);
  }
  const PureState& zero = code5::logical_state(LogicalState::Zero);
  const AlphaBeta flipped = logical_alpha_beta(projector(code5::logical_state(LogicalState::One)), zero);
  EXPECT_NEAR(flipped.alpha, 1.0, 1e-12);
}

TEST(AlphaBeta, CoherentLogicalRotation) {
  // cos(a)|0> + sin(a)|1>: alpha = sin^2 a, |beta| = |sin a cos a|.
  const PureState& zero = code5::logical_state(LogicalState::Zero);
  const PureState& one = code5::logical_state(LogicalState::One);
  for (double a : {0.1, 0.5, M_PI / 4}) {
    const PureState psi = std::cos(a) * zero + std::sin(a) * one;
    const AlphaBeta ab = corrected_alpha_beta(projector(psi), standard(), zero);
    EXPECT_NEAR(ab.alpha, std::sin(a) * std::sin(a), 1e-12);
    EXPECT_NEAR(std::abs(ab.beta), std::abs(std::sin(a) * std::cos(a)), 1e-12);
    EXPECT_LE(std::abs(ab.beta), 0.5 + 1e-12);
  }
}

TEST(AlphaBeta, AlphaEqualsEtaAfterCorrection) {
  fixtures::Random rng(72);
  for (auto state : code5::kAllLogicalStates) {
    const PureState& psi = code5::logical_state(state);
    const DensityMatrix rho = 0.7 * projector(psi) + 0.3 * rng.density_matrix(32);
    for (const auto* d : {&standard(), &fc()}) {
      EXPECT_NEAR(corrected_alpha_beta(rho, *d, psi).alpha, failure_eta(rho, *d, psi), 1e-12);
    }
  }
}

TEST(PhysicalInfidelity, Analytic) {
  const auto& states = one_qubit_basis_states();
  ASSERT_EQ(states.size(), 6u);
  const QubitParams q{0.2, 0.03, 0.02};
  EXPECT_NEAR(physical_infidelity(q, 0.0, states[1]), 0.0, 1e-15);
  const double t = 5.0;
  EXPECT_NEAR(physical_infidelity({0.0, 0.03, 0.0}, t, states[1]), 1 - std::exp(-0.03 * t), 1e-12);
  EXPECT_NEAR(physical_infidelity({0.0, 0.0, 0.02}, t, states[2]), 0.5 * (1 - std::exp(-2 * 0.02 * t)), 1e-12);
  EXPECT_NEAR(physical_infidelity({0.0, 0.0, 0.02}, t, states[0]), 0.0, 1e-15);
}

TEST(PhysicalInfidelity, PauliPreservesAverage) {
  fixtures::Random rng(73);
  for (int i = 0; i < 20; ++i) {
    const QubitParams q{rng.uniform(-1, 1), rng.uniform(0, 0.1), rng.uniform(0, 0.1)};
    const double t = rng.uniform(0, 30);
    EXPECT_NEAR(physical_infidelity_average(q, t, PhysicalNoise::Exact),
                physical_infidelity_average(q, t, PhysicalNoise::Pauli), 1e-13);
  }
  // Individual states differ: damping is not a Pauli channel.
  const QubitParams damp{0.0, 0.05, 0.0};
  const auto& one = one_qubit_basis_states()[1];
  EXPECT_GT(std::abs(physical_infidelity(damp, 10.0, one, PhysicalNoise::Exact) -
                     physical_infidelity(damp, 10.0, one, PhysicalNoise::Pauli)),
            1e-3);
}

TEST(PhysicalInfidelity, ModelAverage) {
  const DeviceModel m = fixtures::heron_model();
  EXPECT_NEAR(model_physical_infidelity(m, 3.0), physical_infidelity_average(m.qubit(0), 3.0), 1e-15);

  DeviceModel mixed = m;
  mixed.g0[1] = 0.05;
  const double expected =
      (4 * physical_infidelity_average(m.qubit(0), 3.0) + physical_infidelity_average(mixed.qubit(1), 3.0)) / 5;
  EXPECT_NEAR(model_physical_infidelity(mixed, 3.0), expected, 1e-15);
}

TEST(ApproximationParse, Names) {
  EXPECT_EQ(Approximation::parse("dynamical").kind, Approximation::Kind::Dynamical);
  EXPECT_FALSE(Approximation::parse("composite_order2").order.one_qubit_first);
  EXPECT_EQ(Approximation::parse("composite_xy_order2").order.edge_order.front(), (std::pair<int, int>{1, 2}));
  const auto t = Approximation::parse("trotter(8)");
  EXPECT_EQ(t.kind, Approximation::Kind::Trotter);
  EXPECT_EQ(t.trotter_steps, 8);
  const auto s = Approximation::parse("pauli_scaled(1.25)");
  EXPECT_EQ(s.kind, Approximation::Kind::Pauli);
  EXPECT_DOUBLE_EQ(s.crosstalk_scale, 1.25);
  EXPECT_TRUE(Approximation::parse("pauli_scaled(auto)").auto_scale);
  EXPECT_EQ(Approximation::parse("oneq_v1").kind, Approximation::Kind::OneQKraus);
  EXPECT_EQ(Approximation::parse("oneq_pauli").physical_noise(), PhysicalNoise::Pauli);
  EXPECT_EQ(Approximation::pauli(1.5).label, "pauli_scaled(1.5)");
  EXPECT_EQ(Approximation::pauli().label, "pauli");

  for (const char* bad : {"", "pauli_scaled(-1)", "pauli_scaled(x)", "trotter(0)", "trotter(2.5)", "trotter",
                          "exact"}) {
    EXPECT_THROW(Approximation::parse(bad), ValidationError) << bad;
  }
}

TEST(EvolveApprox, DispatchesToModules) {
  const DeviceModel m = fixtures::eagle_model();
  const DensityMatrix rho = projector(code5::logical_state(LogicalState::MinusI));
  const double t = 2.0;
  EXPECT_LT(max_abs_diff(evolve_approx(Approximation::dynamical(), m, t, rho), evolve_dynamical(rho, m, t)), 1e-14);
  EXPECT_LT(max_abs_diff(evolve_approx(Approximation::composite_order2(), m, t, rho),
                         composite_apply(m, t, CompositeOrder::order2(), rho)),
            1e-14);
  EXPECT_LT(max_abs_diff(evolve_approx(Approximation::parse("trotter(3)"), m, t, rho),
                         trotter_apply(m, t, 3, CompositeOrder::order1(), rho)),
            1e-14);
  EXPECT_LT(max_abs_diff(evolve_approx(Approximation::pauli(1.2), m, t, rho), pauli_apply(m, t, rho, 1.2)), 1e-14);
  EXPECT_LT(max_abs_diff(evolve_approx(Approximation::parse("oneq_v1"), m, t, rho),
                         apply_channels(one_q_surrogate_channels(m, t), rho)),
            1e-14);
  EXPECT_THROW(evolve_approx(Approximation::parse("pauli_scaled(auto)"), m, t, rho), ValidationError);
}

TEST(EvolveApprox, TimeGridMatchesSingleTimes) {
  const DeviceModel m = fixtures::heron_model();
  const DensityMatrix rho = projector(code5::logical_state(LogicalState::Plus));
  const std::vector<double> times = {0.0, 0.5, 3.0};
  for (const char* name : {"dynamical", "composite_order1", "pauli", "oneq_pauli"}) {
    const auto a = Approximation::parse(name);
    const auto all = evolve_approx(a, m, std::span<const double>(times), rho);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(max_abs_diff(all[0], rho), 0.0) << name;
    for (std::size_t k = 1; k < times.size(); ++k) {
      EXPECT_LT(max_abs_diff(all[k], evolve_approx(a, m, times[k], rho)), 1e-8) << name;
    }
  }
}

TEST(EvolveOperator, LinearAndConsistent) {
  const DeviceModel m = fixtures::heron_model();
  const PureState& a = code5::logical_state(LogicalState::Zero);
  const PureState& b = code5::logical_state(LogicalState::One);
  const DensityMatrix rho = projector(code5::logical_state(LogicalState::Plus));
  const double t = 1.5;
  for (const char* name : {"dynamical", "composite_order1", "pauli"}) {
    const auto approx = Approximation::parse(name);
    // |+><+| = (|0><0| + |0><1| + |1><0| + |1><1|)/2
    const Matrix sum = 0.5 * (evolve_operator(approx, m, t, a * a.adjoint()) + evolve_operator(approx, m, t, a * b.adjoint()) +
                              evolve_operator(approx, m, t, b * a.adjoint()) + evolve_operator(approx, m, t, b * b.adjoint()));
    EXPECT_LT(max_abs_diff(sum, evolve_approx(approx, m, t, rho)), 1e-8) << name;
  }
}

TEST(EtaCurves, ZeroAtStartAndBounded) {
  const DeviceModel m = fixtures::eagle_model();
  const std::vector<double> times = {0.0, 1.0, 10.0, 40.0};
  for (const char* name : {"dynamical", "pauli", "oneq_v1"}) {
    const auto curves = eta_curves(Approximation::parse(name), m, standard(), code5::kAllLogicalStates, times);
    ASSERT_EQ(curves.size(), 6u);
    for (const auto& row : curves) {
      ASSERT_EQ(row.size(), times.size());
      EXPECT_NEAR(row[0], 0.0, 1e-12);
      for (double eta : row) {
        EXPECT_GE(eta, -1e-12);
        EXPECT_LE(eta, 1.0 + 1e-12);
      }
    }
  }
}

TEST(EtaCurves, PureZZDecoderOrdering) {
  const DeviceModel m = fixtures::pure_zz_model(-30.0);
  const std::vector<double> times = {0.3};
  const auto s = eta_curves(Approximation::dynamical(), m, standard(), code5::kAllLogicalStates, times);
  const auto f = eta_curves(Approximation::dynamical(), m, fc(), code5::kAllLogicalStates, times);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_LT(f[i][0], s[i][0]);
}

TEST(PseudoThreshold, NoCrossingForPureZZ) {
  const auto r = pseudo_threshold(fixtures::pure_zz_model(-30.0), Approximation::pauli(), standard(),
                                  PhysicalMode::SameApprox);
  EXPECT_FALSE(r.t_star.has_value());
  EXPECT_EQ(r.crossings, 0);
}

TEST(PseudoThreshold, BracketsTheCrossing) {
  const DeviceModel m = fixtures::heron_model();
  PseudoThresholdOptions o;
  o.grid_points = 40;
  const auto r = pseudo_threshold(m, Approximation::composite_order1(), standard(), PhysicalMode::SameApprox, o);
  ASSERT_TRUE(r.t_star.has_value());
  const double t = *r.t_star;
  auto gap = [&](double x) {
    const std::vector<double> ts = {x};
    double eta = 0.0;
    for (const auto& row : eta_curves(Approximation::composite_order1(), m, standard(), code5::kAllLogicalStates, ts))
      eta += row[0] / 6.0;
    return eta - model_physical_infidelity(m, x);
  };
  EXPECT_LT(gap(t - 2e-3) * gap(t + 2e-3), 0.0);
}

TEST(PseudoThreshold, InvalidOptions) {
  PseudoThresholdOptions o;
  o.t_min = 5.0;
  o.t_max = 1.0;
  EXPECT_THROW(pseudo_threshold(fixtures::heron_model(), Approximation::pauli(), standard(), PhysicalMode::SameApprox, o),
               ValidationError);
}

TEST(CycleSeries, NoiselessStaysPerfect) {
  const DeviceModel m = make_uniform_model(5, {}, 0.0);
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  CycleOptions o;
  o.record_every = 10;
  const auto series = cycle_series(m, fc(), 1.0, 35, psi, Approximation::dynamical(), o);
  ASSERT_EQ(series.size(), 4u);
  EXPECT_EQ(series[0].cycle, 10);
  EXPECT_EQ(series.back().cycle, 35);
  for (const auto& r : series) {
    EXPECT_NEAR(r.alpha, 0.0, 1e-10);
    EXPECT_NEAR(r.beta_abs, 0.0, 1e-10);
  }
}

TEST(CycleSeries, FirstCycleMatchesDirectComputation) {
  const DeviceModel m = fixtures::cycle_model();
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  for (const char* name : {"dynamical", "pauli", "composite_order2"}) {
    const auto approx = Approximation::parse(name);
    const auto series = cycle_series(m, fc(), 1.0, 1, psi, approx);
    ASSERT_EQ(series.size(), 1u);
    const AlphaBeta direct = corrected_alpha_beta(evolve_approx(approx, m, 1.0, projector(psi)), fc(), psi);
    EXPECT_NEAR(series[0].alpha, direct.alpha, 1e-9) << name;
    EXPECT_NEAR(series[0].beta_abs, std::abs(direct.beta), 1e-9) << name;
    EXPECT_NEAR(first_cycle_alpha_beta(approx, m, fc(), 1.0, psi).alpha, direct.alpha, 1e-9) << name;
  }
}

TEST(CycleSeries, LogicalTransferMatchesFullSuperoperator) {
  const DeviceModel m = fixtures::cycle_model();
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  CycleOptions full;
  full.method = CycleMethod::FullSuperoperator;
  for (const char* name : {"pauli_scaled(1.149)", "composite_order1", "dynamical"}) {
    const auto approx = Approximation::parse(name);
    const auto a = cycle_series(m, fc(), 1.0, 30, psi, approx);
    const auto b = cycle_series(m, fc(), 1.0, 30, psi, approx, full);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].alpha, b[i].alpha, 1e-8) << name << " cycle " << a[i].cycle;
      EXPECT_NEAR(a[i].beta_abs, b[i].beta_abs, 1e-8) << name << " cycle " << a[i].cycle;
    }
  }
}

TEST(CycleSeries, Deterministic) {
  const DeviceModel m = fixtures::cycle_model();
  const PureState& psi = code5::logical_state(LogicalState::Zero);
  CycleOptions o;
  o.record_every = 7;
  const auto a = cycle_series(m, standard(), 0.5, 100, psi, Approximation::dynamical(), o);
  const auto b = cycle_series(m, standard(), 0.5, 100, psi, Approximation::dynamical(), o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].alpha, b[i].alpha);
    EXPECT_EQ(a[i].beta_abs, b[i].beta_abs);
  }
}

TEST(CycleSeries, Errors) {
  const DeviceModel m = fixtures::cycle_model();
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  EXPECT_THROW(cycle_series(m, fc(), 0.0, 10, psi, Approximation::dynamical()), ValidationError);
  EXPECT_THROW(cycle_series(m, fc(), 1.0, 0, psi, Approximation::dynamical()), ValidationError);
  EXPECT_THROW(cycle_series(make_uniform_model(3, {}, 0.1), fc(), 1.0, 10, psi, Approximation::dynamical()),
               ValidationError);
}

TEST(ScaleFactor, AutoScaledSeriesUsesMatchedFactor) {
  const DeviceModel m = fixtures::cycle_model();
  const PureState& psi = code5::logical_state(LogicalState::Plus);
  const double f = crosstalk_scale_factor(m, fc(), 1.0, psi);
  const auto dyn = first_cycle_alpha_beta(Approximation::dynamical(), m, fc(), 1.0, psi);
  const auto pauli = first_cycle_alpha_beta(Approximation::pauli(f), m, fc(), 1.0, psi);
  EXPECT_LE(std::abs(pauli.alpha - dyn.alpha) / dyn.alpha, 1e-3);
  const auto a = cycle_series(m, fc(), 1.0, 3, psi, Approximation::parse("pauli_scaled(auto)"));
  const auto b = cycle_series(m, fc(), 1.0, 3, psi, Approximation::pauli(f));
  EXPECT_NEAR(a.back().alpha, b.back().alpha, 1e-12);
}
