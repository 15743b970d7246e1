#include "qecdyn/errors.hpp"
#include "qecdyn/five_qubit_code.hpp"
#include "qecdyn/metrics.hpp"
#include "qecdyn/pauli_channels.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qecdyn;

namespace {

double max_prob_diff(const PauliChannel& a, const PauliChannel& b) {
  EXPECT_EQ(a.arity(), b.arity());
  double worst = 0.0;
  for (const auto& p : all_pauli_strings(a.arity())) {
    worst = std::max(worst, std::abs(a.probability(p) - b.probability(p)));
  }
  return worst;
}

PauliChannel random_pauli_channel(fixtures::Random& rng, std::vector<int> acts_on) {
  std::map<PauliString, double> probs;
  double total = 0.0;
  for (const auto& p : all_pauli_strings(static_cast<int>(acts_on.size()))) {
    probs[p] = rng.uniform();
    total += probs[p];
  }
  for (auto& [p, v] : probs) v /= total;
  return make_pauli_channel(std::move(acts_on), std::move(probs));
}

}  // namespace

TEST(PauliChannel, Construction) {
  const PauliChannel c = make_pauli_channel({0}, {{PauliString("I"), 1.0 + 5e-11}, {PauliString("Z"), -5e-13}});
  EXPECT_EQ(c.probability(PauliString("Z")), 0.0);
  EXPECT_EQ(c.probability(PauliString("X")), 0.0);
  EXPECT_THROW(make_pauli_channel({0}, {{PauliString("I"), 1.1}, {PauliString("Z"), -0.1}}), NumericalError);
  EXPECT_THROW(make_pauli_channel({0}, {{PauliString("I"), 0.5}}), NumericalError);
  EXPECT_ANY_THROW(make_pauli_channel({0}, {{PauliString("II"), 1.0}}));
}

TEST(PauliChannel, AllStrings) {
  const auto two = all_pauli_strings(2);
  ASSERT_EQ(two.size(), 16u);
  EXPECT_EQ(two.front().str(), "II");
  EXPECT_EQ(two[1].str(), "IX");
  EXPECT_EQ(two.back().str(), "ZZ");
}

TEST(PauliProject, Unitary) {
  for (double phi : {0.0, 0.3, 1.7, M_PI}) {
    KrausChannel u;
    u.operators = {Matrix(Vector(Vector::Ones(2)).asDiagonal())};
    u.operators[0](1, 1) = std::exp(Complex(0.0, phi));
    u.acts_on = {0};
    const PauliChannel p = pauli_project(u);
    EXPECT_NEAR(p.probability(PauliString("I")), std::pow(std::cos(phi / 2), 2), 1e-15);
    EXPECT_NEAR(p.probability(PauliString("Z")), std::pow(std::sin(phi / 2), 2), 1e-15);
  }
}

TEST(PauliProject, Idempotent) {
  fixtures::Random rng(51);
  for (int i = 0; i < 10; ++i) {
    const PauliChannel c = random_pauli_channel(rng, {0, 1});
    EXPECT_LE(max_prob_diff(pauli_project(c), c), 1e-12);
    EXPECT_LE(max_prob_diff(pauli_project(to_kraus(c)), c), 1e-12);
  }
}

TEST(PauliProject, ClosedFormsMatchProjection) {
  fixtures::Random rng(52);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double h = rng.uniform(-2, 2), g0 = rng.uniform(0, 1), g2 = rng.uniform(0, 1);
    const double z = rng.uniform(-2, 2), t = rng.uniform(0, 30);
    worst = std::max(worst, max_prob_diff(pauli_1q(h, g0, g2, t), pauli_project(combined_1q_channel(h, g0, g2, t))));
    worst = std::max(worst, max_prob_diff(pauli_2q_zz(z, t), pauli_project(zz_channel_2q(z, t))));
    const int n = static_cast<int>(rng.uniform(0, 5));
    const KrausChannel surrogate = compose(one_q_crosstalk_channel(z, t, n), combined_1q_channel(h, g0, g2, t));
    worst = std::max(worst, max_prob_diff(pauli_1q_with_crosstalk(h, g0, g2, z, t, n), pauli_project(surrogate)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(PauliProject, TwoQubitZZValues) {
  EXPECT_NEAR(pauli_2q_zz(0.3, 0.0).probability(PauliString("II")), 1.0, 1e-15);
  EXPECT_NEAR(pauli_2q_zz(M_PI, 1.0).probability(PauliString("ZZ")), 1.0, 1e-15);
}

TEST(PauliProject, OneQubitValues) {
  EXPECT_NEAR(pauli_1q(0.3, 0.1, 0.1, 0.0).probability(PauliString("I")), 1.0, 1e-15);

  const double g2 = 0.05, t = 4.0;
  const double p_pd = 1 - std::exp(-4 * g2 * t);
  const PauliChannel deph = pauli_1q(0.0, 0.0, g2, t);
  EXPECT_NEAR(deph.probability(PauliString("Z")), (1 - std::sqrt(1 - p_pd)) / 2, 1e-15);
  EXPECT_EQ(deph.probability(PauliString("X")), 0.0);
  EXPECT_LE(max_prob_diff(deph, pauli_project(damping_channel(0.0, g2, t))), 1e-15);

  const PauliChannel late = pauli_1q(0.37, 0.2, 0.1, 500.0);
  for (const char* p : {"I", "X", "Y", "Z"}) EXPECT_NEAR(late.probability(PauliString(p)), 0.25, 1e-12);

  fixtures::Random rng(53);
  for (int i = 0; i < 50; ++i) {
    const PauliChannel c = pauli_1q(rng.uniform(-1, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 10));
    for (const auto& p : all_pauli_strings(1)) {
      EXPECT_GE(c.probability(p), 0.0);
      EXPECT_LE(c.probability(p), 1.0);
    }
  }
}

TEST(PauliProject, CrosstalkSurrogateValues) {
  EXPECT_LE(max_prob_diff(pauli_1q_with_crosstalk(0.2, 0.1, 0.05, 0.7, 3.0, 0), pauli_1q(0.2, 0.1, 0.05, 3.0)),
            1e-15);
  const double zt = 0.8;
  const PauliChannel one = pauli_1q_with_crosstalk(0.0, 0.0, 0.0, zt, 1.0, 1);
  EXPECT_NEAR(one.probability(PauliString("Z")), 0.5 - 0.5 * std::cos(zt), 1e-15);
  for (int n = 0; n < 6; ++n) EXPECT_LE(one_q_crosstalk_channel(0.6, 2.0, n).completeness_error(), 1e-12);
  EXPECT_EQ(one_q_crosstalk_channel(0.6, 2.0, 3).operators.size(), 4u);
}

TEST(SplitVsWhole, Values) {
  const auto [w0, s0] = split_vs_whole_demo(0.0);
  EXPECT_NEAR(w0.probability(PauliString("I")), 1.0, 1e-15);
  EXPECT_NEAR(s0.probability(PauliString("I")), 1.0, 1e-15);
  const auto [w1, s1] = split_vs_whole_demo(M_PI);
  EXPECT_NEAR(w1.probability(PauliString("Z")), 1.0, 1e-15);
  EXPECT_NEAR(s1.probability(PauliString("I")), 0.5, 1e-15);
  EXPECT_NEAR(s1.probability(PauliString("Z")), 0.5, 1e-15);
  const auto [w2, s2] = split_vs_whole_demo(M_PI / 2);
  EXPECT_NEAR(w2.probability(PauliString("I")), 0.5, 1e-15);
  EXPECT_NEAR(s2.probability(PauliString("I")), 0.75, 1e-15);
  for (double phi : {0.4, 2.0}) {
    const auto [w, s] = split_vs_whole_demo(phi);
    EXPECT_NEAR(s.probability(PauliString("I")), 0.25 * (std::cos(phi) + 3), 1e-15);
    EXPECT_NEAR(s.probability(PauliString("Z")), 0.5 * std::pow(std::sin(phi / 2), 2), 1e-15);
    EXPECT_GT(std::abs(w.probability(PauliString("Z")) - s.probability(PauliString("Z"))), 1e-3);
  }
}

TEST(PauliChannel, SuperoperatorsCommute) {
  fixtures::Random rng(54);
  for (int i = 0; i < 10; ++i) {
    const Superoperator a = pauli_channel_superoperator(random_pauli_channel(rng, {0, 2}), 3);
    const Superoperator b = pauli_channel_superoperator(random_pauli_channel(rng, {1, 2}), 3);
    EXPECT_LE(max_abs_diff(Matrix(a * b), Matrix(b * a)), 1e-12);
  }
}

TEST(PauliChannel, ApplyMatchesKraus) {
  fixtures::Random rng(55);
  const PauliChannel c = random_pauli_channel(rng, {2, 0});
  const DensityMatrix rho = rng.density_matrix(8);
  EXPECT_LE(max_abs_diff(apply_pauli_channel(c, rho), apply_channel(to_kraus(c), rho)), 1e-14);
  EXPECT_LE((pauli_channel_superoperator(c, 3) * vectorize(rho) - vectorize(apply_pauli_channel(c, rho)))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(PauliChannel, Compose) {
  fixtures::Random rng(56);
  const PauliChannel a = random_pauli_channel(rng, {0});
  const PauliChannel b = random_pauli_channel(rng, {0, 1});
  const PauliChannel ab = compose(a, b);
  EXPECT_NEAR(ab.total(), 1.0, 1e-12);
  const DensityMatrix rho = rng.density_matrix(4);
  EXPECT_LE(max_abs_diff(apply_pauli_channel(ab, rho), apply_pauli_channel(b, apply_pauli_channel(a, rho))), 1e-14);
}

TEST(SurvivingPair, MatchesSyndromes) {
  const auto stabs = code5::stabilizer_list();
  EXPECT_TRUE(surviving_pair(stabs, PauliString("XIIII"), PauliString("XIIII")));
  EXPECT_TRUE(surviving_pair(stabs, PauliString("IIIII"), stabs[0]));
  EXPECT_FALSE(surviving_pair(stabs, PauliString("XIIII"), PauliString("IIZII")));
  EXPECT_TRUE(surviving_pair(stabs, PauliString("IIIII"), code5::logical_x()));
  fixtures::Random rng(57);
  for (int i = 0; i < 300; ++i) {
    std::string a, b;
    for (int q = 0; q < 5; ++q) {
      a += "IXYZ"[static_cast<int>(rng.uniform(0, 4))];
      b += "IXYZ"[static_cast<int>(rng.uniform(0, 4))];
    }
    const PauliString pa(a), pb(b);
    bool same = true;
    for (const auto& s : stabs) same = same && (s.commutes_with(pa) == s.commutes_with(pb));
    EXPECT_EQ(surviving_pair(stabs, pa, pb), same) << a << " " << b;
    EXPECT_EQ(surviving_pair(stabs, pa, pb), code5::syndrome_of(pa) == code5::syndrome_of(pb));
  }
}

TEST(PauliApprox, ModelChannels) {
  const DeviceModel m = fixtures::eagle_model();
  const auto channels = pauli_channels(m, 2.0);
  ASSERT_EQ(channels.size(), 15u);
  const double zeta = m.edges[0].strength;
  EXPECT_NEAR(channels[5].probability(PauliString("ZZ")), std::pow(std::sin(zeta * 2.0 / 2), 2), 1e-15);
  const auto scaled = pauli_channels(m, 2.0, 1.5);
  EXPECT_NEAR(scaled[5].probability(PauliString("ZZ")), std::pow(std::sin(1.5 * zeta * 2.0 / 2), 2), 1e-15);
  EXPECT_LE(max_prob_diff(scaled[0], channels[0]), 0.0);
}

TEST(PauliApprox, EqualsProjectedComposite) {
  const DeviceModel m = fixtures::heron_model();
  const auto kraus = composite_channels(m, 3.0);
  const auto pauli = pauli_channels(m, 3.0);
  ASSERT_EQ(kraus.size(), pauli.size());
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    EXPECT_EQ(kraus[i].acts_on, pauli[i].acts_on);
    EXPECT_LE(max_prob_diff(pauli_project(kraus[i]), pauli[i]), 1e-14);
  }
}

TEST(PauliApprox, NonSymmetricRepresentationsDiffer) {
  DeviceModel two = fixtures::heron_model();
  two.frame = Frame::NonSym2QAdjusted;
  DeviceModel one = two;
  one.frame = Frame::NonSym1QAdjusted;
  const DeviceModel s = symmetric_equivalent(two);
  EXPECT_EQ(s.frame, Frame::Symmetric);
  EXPECT_NEAR(s.h[0], two.h[0] + 4 * two.edges[0].strength, 1e-15);

  const DensityMatrix rho = projector(code5::logical_state(code5::LogicalState::Plus));
  const double t = 2.0;
  EXPECT_LE(max_abs_diff(pauli_apply(one, t, rho), pauli_apply(s, t, rho)), 1e-14);
  EXPECT_GT(trace_distance(pauli_apply(two, t, rho), pauli_apply(one, t, rho)), 1e-6);

  const auto channels = pauli_channels(two, t);
  const double zeta = two.edges.back().strength;
  EXPECT_LE(max_prob_diff(channels.back(), pauli_project(nonsym_zz_channel_2q(zeta, t, 3, 4))), 1e-15);
  EXPECT_GT(channels.back().probability(PauliString("ZI")), 0.0);
}

TEST(Surrogate, ChannelsPerQubit) {
  const DeviceModel eagle = fixtures::eagle_model();
  const auto k = one_q_surrogate_channels(eagle, 1.0);
  ASSERT_EQ(k.size(), 5u);
  for (const auto& c : k) {
    EXPECT_EQ(c.arity(), 1);
    EXPECT_LE(c.completeness_error(), 1e-12);
  }
  const auto p = one_q_surrogate_pauli_channels(eagle, 1.0);
  const auto q = eagle.qubit(0);
  EXPECT_LE(max_prob_diff(p[0], pauli_1q_with_crosstalk(q.h, q.g0, q.g2, eagle.edges[0].strength, 1.0, 4)), 1e-14);

  const DeviceModel xy = make_uniform_model(3, {}, 0.1, Connectivity::AllToAll, CouplingKind::XY);
  EXPECT_THROW(one_q_surrogate_channels(xy, 1.0), ValidationError);
}

TEST(ScaleFactor, PureZZSmallAngleLimit) {
  const double zeta = khz_to_angular(30.0);
  const DeviceModel m = fixtures::pure_zz_model(30.0);
  const auto& fc = code5::Decoder::get(code5::DecoderKind::FullConnectivityZZ);
  const PureState& plus = code5::logical_state(code5::LogicalState::Plus);
  const double f = crosstalk_scale_factor(m, fc, 0.02 / zeta, plus);
  EXPECT_NEAR(f, std::pow(3.0, 0.25), 0.02);
  EXPECT_EQ(crosstalk_scale_factor(fixtures::uniform_model(5, 0, 100, 100), fc, 1.0, plus), 1.0);
}
