#include <gtest/gtest.h>

#include <numbers>

#include "qcft/trotter_circuit.hpp"
#include "support.hpp"

using namespace qcft;
using namespace qcft::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle: literal product of dense layer exponentials, built independently of
// the gate list (embed every pair by hand with weights 1/(pairs per site)).
DenseMatrix manual_layer_sum(const FieldModel& m, int n_sites, bool periodic, int first) {
  const int d = m.components_per_site();
  DenseMatrix h = DenseMatrix::Zero(n_sites * d, n_sites * d);
  const DenseMatrix global = build_hamiltonian(m, periodic ? LatticeSpec::periodic(n_sites) : LatticeSpec::open(n_sites))
                                 .matrix.to_dense();
  const int last = periodic ? n_sites - 1 : n_sites - 2;
  for (int left = first; left <= last; left += 2) {
    const int right = (left + 1) % n_sites;
    // hopping entries between the two sites come straight from the global H
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        h(left * d + a, right * d + b) += global(left * d + a, right * d + b);
        h(right * d + b, left * d + a) += global(right * d + b, left * d + a);
      }
  }
  // on-site terms are shared between the pairs touching a site
  for (int s = 0; s < n_sites; ++s) {
    int pairs = 0, in_layer = 0;
    for (int left = 0; left <= last; ++left) {
      const bool touches = left == s || (left + 1) % n_sites == s;
      if (touches) {
        ++pairs;
        if ((left - first) % 2 == 0) ++in_layer;
      }
    }
    if (pairs == 0) continue;
    const double w = static_cast<double>(in_layer) / pairs;
    h.block(s * d, s * d, d, d) += w * global.block(s * d, s * d, d, d);
  }
  return h;
}

DenseMatrix oracle_circuit(const FieldModel& m, int n_sites, bool periodic, double t, int steps) {
  const double phase = kPi * t / (4.0 * steps) * (4.0 / kPi);
  const DenseMatrix even = expm_unitary(manual_layer_sum(m, n_sites, periodic, 0), phase).matrix();
  const DenseMatrix odd = expm_unitary(manual_layer_sum(m, n_sites, periodic, 1), phase).matrix();
  DenseMatrix u = DenseMatrix::Identity(even.rows(), even.cols());
  for (int i = 0; i < steps; ++i) u = odd * even * u;
  return u;
}

// Oracle for the bound: same closed form, evaluated in log space.
double log_suzuki(double h, double w, double t, int n, double nx) {
  const double width = 2 * nx + 1;
  return 2 * std::log(h) + 2 * std::log(kPi * w * t * width) - std::log(2.0 * n) +
         (kPi * w * t / 2) * width * (static_cast<double>(n + 2) / n) * h;
}

}  // namespace

TEST(Calibration, PairSumReproducesHamiltonian) {
  EXPECT_LT(calibration_residual(FieldModel::dirac(0.2), LatticeSpec::periodic(16)), tol::exact_identity);
  EXPECT_LT(calibration_residual(FieldModel::dirac(0.7), LatticeSpec::open(7)), tol::exact_identity);
  EXPECT_LT(calibration_residual(FieldModel::weyl(1), LatticeSpec::periodic(32)), tol::exact_identity);
  EXPECT_LT(calibration_residual(FieldModel::weyl(-1), LatticeSpec::open(9)), tol::exact_identity);
}

TEST(Calibration, GateCouplingIsFourOverPi) {
  const DenseMatrix g = gate_generator(FieldModel::weyl(1)).to_dense();
  const DenseMatrix h = gate_hamiltonian(FieldModel::weyl(1)).to_dense();
  EXPECT_LT(max_abs(h - (4 / kPi) * g), 1e-15);
  EXPECT_NEAR(gate_phase(1.0, 2.0, 8), kPi * 2 / 32, 1e-15);
}

TEST(Calibration, SchrodingerHasNoGateSet) {
  EXPECT_THROW(gate_generator(FieldModel::schrodinger(0.5)), PreconditionError);
}

TEST(Circuit, LayerStructure) {
  const BrickWallCircuit c = compile(FieldModel::dirac(0.2), LatticeSpec::periodic(8), 1.0, 3);
  ASSERT_EQ(c.layers().size(), 6u);
  EXPECT_EQ(c.layers()[0].parity, Parity::even);
  EXPECT_EQ(c.layers()[1].parity, Parity::odd);
  EXPECT_EQ(c.layers()[0].gates.size(), 4u);
  EXPECT_EQ(c.layers()[1].gates.size(), 4u);
  EXPECT_EQ(c.layers()[1].gates.back().left_site, 7);  // wrap pair
  const BrickWallCircuit o = compile(FieldModel::weyl(1), LatticeSpec::open(7), 1.0, 1);
  EXPECT_EQ(o.layers()[0].gates.size(), 3u);
  EXPECT_EQ(o.layers()[1].gates.size(), 3u);
}

TEST(Circuit, OddPeriodicWidthRejected) {
  EXPECT_THROW(compile(FieldModel::dirac(0.2), LatticeSpec::periodic(15), 1.0, 2), PreconditionError);
}

TEST(Circuit, MatchesDenseLayerProductOracle) {
  struct Case { FieldModel m; int n; bool periodic; double t; int steps; };
  const Case cases[] = {{FieldModel::dirac(0.2), 6, true, 2.0, 4}, {FieldModel::dirac(0.5), 5, false, 1.3, 3},
                        {FieldModel::weyl(1), 10, true, 3.0, 5}, {FieldModel::weyl(-1), 7, false, 0.7, 2}};
  for (const auto& c : cases) {
    const LatticeSpec spec = c.periodic ? LatticeSpec::periodic(c.n) : LatticeSpec::open(c.n);
    const DenseMatrix u = dense_unitary(compile(c.m, spec, c.t, c.steps)).matrix();
    EXPECT_LT(max_abs(u - oracle_circuit(c.m, c.n, c.periodic, c.t, c.steps)), 1e-12);
  }
}

TEST(Circuit, UnitaryAndNormPreservingOnRandomStates) {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 * uniform_int(2, 12);
    const BrickWallCircuit c = compile(FieldModel::dirac(uniform(0, 1)), LatticeSpec::periodic(n), uniform(0, 5),
                                       uniform_int(1, 6));
    const ComplexVector v = random_unit_vector(static_cast<Eigen::Index>(c.dimension()));
    EXPECT_NEAR(apply_circuit(c, v).norm(), 1.0, tol::norm_preservation);
    EXPECT_LT(UnitaryOperator::unitarity_defect(dense_unitary(c).matrix()), tol::circuit_unitary);
  }
}

TEST(Circuit, ZeroTimeIsIdentity) {
  const DenseMatrix u = dense_unitary(compile(FieldModel::dirac(0.2), LatticeSpec::periodic(6), 0.0, 4)).matrix();
  EXPECT_EQ(max_abs(u - DenseMatrix::Identity(u.rows(), u.cols())), 0.0);
  const auto r = trotter_error(FieldModel::dirac(0.2), LatticeSpec::periodic(6), 0.0, 4);
  EXPECT_EQ(r.empirical_error, 0.0);
  EXPECT_EQ(r.suzuki_bound, 0.0);
}

TEST(Circuit, WeylSwapTimeTranslatesByOneSitePerLayer) {
  // At t = pi N / omega each massless gate fully transfers amplitude.
  const int n = 12, steps = 3;
  const LatticeSpec spec = LatticeSpec::periodic(n);
  const BrickWallCircuit c = compile(FieldModel::weyl(1), spec, swap_time(FieldModel::weyl(1), spec, steps), steps);
  ComplexVector v = ComplexVector::Zero(n);
  v[4] = 1.0;
  for (std::size_t layer = 1; layer <= c.layers().size(); ++layer) {
    const ComplexVector w = apply_layers(c, v, layer);
    Eigen::Index where = 0;
    EXPECT_NEAR(w.cwiseAbs().maxCoeff(&where), 1.0, 1e-12);
    const int expected = ((4 + static_cast<int>(layer)) % n + n) % n;
    const int alt = ((4 - static_cast<int>(layer)) % n + n) % n;
    EXPECT_TRUE(where == expected || where == alt) << "layer " << layer << " at " << where;
  }
}

TEST(Trotter, ErrorHalvesWithDoubledSteps) {
  std::vector<double> errors;
  for (int steps : {8, 16, 32, 64})
    errors.push_back(trotter_error(FieldModel::dirac(0.2), LatticeSpec::periodic(16), 2.0, steps).empirical_error);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    EXPECT_LT(errors[i], errors[i - 1]);
    EXPECT_NEAR(errors[i - 1] / errors[i], 2.0, 0.1);
  }
}

TEST(Trotter, BoundDominatesEmpiricalError) {
  for (int steps : {8, 16, 32}) {
    const auto r = trotter_error(FieldModel::dirac(0.2), LatticeSpec::periodic(16), 2.0, steps, 2.0);
    EXPECT_GE(r.suzuki_bound, r.empirical_error);
  }
}

TEST(Trotter, SuzukiBoundMatchesLogFormOracle) {
  for (int trial = 0; trial < 50; ++trial) {
    const double h = uniform(0.1, 3), w = uniform(0.1, 2), t = uniform(0.01, 3), nx = uniform_int(0, 8);
    const int n = uniform_int(1, 200);
    const double b = suzuki_bound(h, w, t, n, nx);
    const double lb = log_suzuki(h, w, t, n, nx);
    if (lb > 700) {
      EXPECT_TRUE(std::isinf(b));
    } else {
      EXPECT_NEAR(std::log(b), lb, 1e-10);
    }
  }
  EXPECT_TRUE(std::isinf(suzuki_bound(2.0, 1.0, 100.0, 1, 8)));
}

TEST(Trotter, SampledErrorIsDeterministicAndBelowExact) {
  const FieldModel m = FieldModel::dirac(0.2);
  const LatticeSpec spec = LatticeSpec::periodic(8);
  const auto a = sampled_trotter_error(m, spec, 2.0, 8, 99);
  const auto b = sampled_trotter_error(m, spec, 2.0, 8, 99);
  EXPECT_EQ(a.empirical_error, b.empirical_error);
  EXPECT_TRUE(a.estimated);
  EXPECT_LE(a.empirical_error, trotter_error(m, spec, 2.0, 8).empirical_error + 1e-12);
}

TEST(Trotter, DenseOracleLimitEnforced) {
  EXPECT_THROW(trotter_error(FieldModel::dirac(0.2), LatticeSpec::periodic(130), 1.0, 1), PreconditionError);
}
