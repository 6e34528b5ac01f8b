#include <gtest/gtest.h>

#include <functional>
#include <numbers>

#include "qcft/observables.hpp"
#include "support.hpp"

using namespace qcft;
using namespace qcft::testing;

namespace {

TimeSeries synthetic(double t_max, int n, const std::function<double(double)>& f) {
  TimeSeries s;
  s.times = uniform_times(t_max, n);
  for (double t : s.times) s.values.push_back(f(t));
  return s;
}

}  // namespace

TEST(Packet, NormalizedAndCentered) {
  const LatticeSpec spec = LatticeSpec::periodic(128);
  const ComplexVector psi = gaussian_packet(spec, FieldModel::weyl(1), WavePacket{60.0, 0.3, 4.0, {1.0}});
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
  EXPECT_NEAR(position_expectation(psi, spec), 60.0, 1e-9);
}

TEST(Packet, OpenBoundaryClearanceEnforced) {
  const LatticeSpec spec = LatticeSpec::open(64);
  EXPECT_THROW(gaussian_packet(spec, FieldModel::weyl(1), WavePacket{10.0, 0.0, 4.0, {1.0}}), PreconditionError);
  EXPECT_NO_THROW(gaussian_packet(spec, FieldModel::weyl(1), WavePacket{30.0, 0.0, 4.0, {1.0}}));
  EXPECT_THROW(gaussian_packet(spec, FieldModel::weyl(1), WavePacket{30.0, 0.0, 0.5, {1.0}}), PreconditionError);
}

TEST(Position, SiteExcitationAndNormCheck) {
  const LatticeSpec spec = LatticeSpec::periodic(10);
  EXPECT_DOUBLE_EQ(position_expectation(site_excitation(spec, FieldModel::dirac(0.2), 7, 3), spec), 7.0);
  EXPECT_THROW(position_expectation(2.0 * site_excitation(spec, FieldModel::weyl(1), 7), spec), PreconditionError);
}

TEST(Frequency, RecoversSinusoidWithinOneBin) {
  for (int trial = 0; trial < 20; ++trial) {
    const double omega = uniform(0.2, 1.5), amp = uniform(0.1, 3.0), drift = uniform(-0.5, 0.5);
    const auto s = synthetic(100.0, 256, [&](double t) { return 3.0 + drift * t + amp * std::sin(omega * t + 0.3); });
    const auto f = dominant_frequency(s);
    ASSERT_TRUE(f.oscillating);
    EXPECT_NEAR(f.omega, omega, f.resolution);
    EXPECT_NEAR(f.resolution, 2 * std::numbers::pi / 100.0, 1e-12);
  }
}

TEST(Frequency, FlatSignalHasNoOscillation) {
  EXPECT_FALSE(dominant_frequency(synthetic(10.0, 128, [](double t) { return 1.0 + 0.1 * t; })).oscillating);
  EXPECT_THROW(dominant_frequency(synthetic(10.0, 32, [](double t) { return std::sin(t); })), PreconditionError);
}

TEST(Amplitude, DetrendedExcursion) {
  // A cosine over whole periods is orthogonal to the fitted line, so the
  // detrended series is the cosine itself.
  const auto s = synthetic(16 * std::numbers::pi, 2000, [](double t) { return 0.7 * t + 1.5 * std::cos(2.0 * t); });
  const auto a = oscillation_amplitude(s);
  EXPECT_NEAR(a.semi_amplitude, 1.5, 0.01);
  EXPECT_NEAR(a.excursion, 3.0, 0.02);
  EXPECT_NEAR(linear_drift(s), 0.7, 0.01);
}

TEST(Speed, FiniteDifferenceMaximum) {
  EXPECT_NEAR(max_speed(synthetic(4.0, 64, [](double t) { return -0.25 * t; })), 0.25, 1e-12);
}

TEST(Transport, SchrodingerPacketDriftsAtGroupVelocity) {
  // E(k) = omega (2 cos k - 2) with omega = 1/(2m): |v| = sin(k0) / m.
  const double m = 0.5, k0 = 0.2;
  const LatticeSpec spec = LatticeSpec::periodic(256);
  const FieldModel model = FieldModel::schrodinger(m);
  const ComplexVector psi = gaussian_packet(spec, model, WavePacket{128.0, k0, 8.0, {1.0}});
  const auto s = position_trace(model, spec, psi, 20.0, 64);
  EXPECT_NEAR(std::abs(linear_drift(s)), std::sin(k0) / m, 0.05 * std::sin(k0) / m);
}

TEST(Transport, WeylPacketNeverExceedsLightSpeed) {
  const LatticeSpec spec = LatticeSpec::periodic(256);
  for (double k0 : {0.0, 0.3, 1.0, -0.5}) {
    const ComplexVector psi = gaussian_packet(spec, FieldModel::weyl(1), WavePacket{128.0, k0, 4.0, {1.0}});
    EXPECT_LE(max_speed(position_trace(FieldModel::weyl(1), spec, psi, 40.0, 128)), 1.05);
  }
}

TEST(Zitter, FrequencyEqualsZeroMomentumGap) {
  const double mu = 0.2;
  const LatticeSpec spec = LatticeSpec::open(256);
  const auto s = zitterbewegung_trace(spec, mu, WavePacket{127.5, 0.0, 8.0, zitter_spinor()}, 100.0, 256);
  const auto f = dominant_frequency(s);
  ASSERT_TRUE(f.oscillating);
  EXPECT_NEAR(dirac_zero_momentum_gap(mu), 2 * mu, 1e-12);
  EXPECT_NEAR(f.omega, dirac_zero_momentum_gap(mu), f.resolution);
  EXPECT_LE(max_speed(s), 1.05);
}

TEST(Zitter, PureBranchPacketRejected) {
  const double h = 1.0 / std::sqrt(2.0);
  const LatticeSpec spec = LatticeSpec::periodic(256);
  try {
    zitterbewegung_trace(spec, 50.0, WavePacket{128.0, 0.0, 20.0, {h, 0.0, h, 0.0}}, 10.0, 64);
    FAIL() << "expected rejection";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("single energy branch"), std::string::npos) << e.what();
  }
}

TEST(LightCone, CircuitLeakageIsExactlyZero) {
  for (const FieldModel& m : {FieldModel::weyl(1), FieldModel::dirac(0.2)}) {
    const BrickWallCircuit c = compile(m, LatticeSpec::periodic(40), 5.0, 10);
    for (std::size_t layers : {1u, 4u, 9u, 15u})
      for (int comp = 0; comp < m.components_per_site(); ++comp)
        EXPECT_LE(lightcone_leakage(c, 20, layers, comp), tol::light_cone);
  }
}

TEST(LightCone, ExactEvolutionLeaksButDecaysWithRadius) {
  const FieldModel m = FieldModel::weyl(1);
  const LatticeSpec spec = LatticeSpec::periodic(64);
  double previous = 1.0;
  for (int r : {4, 6, 8, 10, 12}) {
    const double leak = lightcone_leakage(m, spec, 32, 4.0, r);
    EXPECT_GT(leak, 0.0);
    EXPECT_LT(leak, previous);
    previous = leak;
  }
  EXPECT_THROW(lightcone_leakage(m, spec, 2, 4.0, 8), PreconditionError);
}
