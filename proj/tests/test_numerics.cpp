#include <gtest/gtest.h>

#include <numbers>

#include "qcft/numerics.hpp"
#include "qcft/trotter_circuit.hpp"
#include "support.hpp"

using namespace qcft;
using namespace qcft::testing;

namespace {

DenseMatrix pauli_z() {
  DenseMatrix z = DenseMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

}  // namespace

TEST(Expm, ZeroAngleIsExactIdentity) {
  const DenseMatrix h = random_hermitian(5);
  const DenseMatrix u = expm_unitary(h, 0.0).matrix();
  EXPECT_EQ(max_abs(u - DenseMatrix::Identity(5, 5)), 0.0);
}

TEST(Expm, PauliZAtPiIsMinusIdentity) {
  // exp(-i theta sz) = diag(e^{-i theta}, e^{i theta}).
  const double theta = std::numbers::pi;
  DenseMatrix expected = DenseMatrix::Zero(2, 2);
  expected(0, 0) = std::exp(-kI * theta);
  expected(1, 1) = std::exp(kI * theta);
  const DenseMatrix u = expm_unitary(pauli_z(), theta).matrix();
  EXPECT_LT(max_abs(u - expected), 1e-14);
  EXPECT_LT(max_abs(u + DenseMatrix::Identity(2, 2)), 1e-14);
}

TEST(Expm, HoppingBlockAtPiSwapsAmplitudes) {
  // [[0,-i/2],[i/2,0]] = sy/2, so exp(-i pi sy/2) = -i sy = [[0,-1],[1,0]].
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(0, 1) = -0.5 * kI;
  h(1, 0) = 0.5 * kI;
  DenseMatrix expected = DenseMatrix::Zero(2, 2);
  expected(0, 1) = -1.0;
  expected(1, 0) = 1.0;
  EXPECT_LT(max_abs(expm_unitary(h, std::numbers::pi).matrix() - expected), 1e-14);
}

TEST(Expm, RejectsNonHermitianWithAsymmetry) {
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  try {
    expm_unitary(h, 1.0);
    FAIL() << "expected rejection";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("max |H - H^dag| = 1"), std::string::npos) << e.what();
  }
}

TEST(Expm, InverseAndGroupPropertyOnRandomInstances) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = uniform_int(1, 64);
    const HermitianOperator h(random_hermitian(n));
    const double a = uniform(-3, 3), b = uniform(-3, 3);
    const DenseMatrix ua = expm_unitary(h, a).matrix();
    const DenseMatrix uma = expm_unitary(h, -a).matrix();
    EXPECT_LT(max_abs(ua * uma - DenseMatrix::Identity(n, n)), tol::unitary);
    const DenseMatrix uab = expm_unitary(h, a + b).matrix();
    EXPECT_LT(max_abs(uab - ua * expm_unitary(h, b).matrix()), tol::group_property);
    EXPECT_LT(UnitaryOperator::unitarity_defect(ua), tol::unitary);
  }
}

TEST(OperatorNorm, IdentityAndDiagonal) {
  EXPECT_NEAR(operator_norm(DenseMatrix::Identity(7, 7)), 1.0, 1e-14);
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  EXPECT_NEAR(operator_norm(d), 5.0, 1e-14);
}

TEST(OperatorNorm, DiracGateGeneratorMatchesEigenOracle) {
  // Oracle: sqrt of the largest eigenvalue of G^dag G (a different path from SVD).
  const DenseMatrix g = gate_hamiltonian(FieldModel::dirac(0.2)).to_dense();
  ASSERT_EQ(g.rows(), 8);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(g.adjoint() * g);
  EXPECT_NEAR(operator_norm(g), std::sqrt(es.eigenvalues().maxCoeff()), 1e-12);
}

TEST(OperatorNorm, RejectsNonFinite) {
  DenseMatrix a = DenseMatrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(operator_norm(a), PreconditionError);
}

TEST(Apply, IdentityInnerAndNorm) {
  const ComplexVector v = random_vector(9);
  const HermitianOperator id(DenseMatrix::Identity(9, 9));
  EXPECT_LT((qcft::apply(id, v) - v).norm(), 1e-15);
  EXPECT_NEAR(inner(v, v).real(), norm(v) * norm(v), 1e-12);
  EXPECT_NEAR(inner(v, v).imag(), 0.0, 1e-15);
}

TEST(Apply, DimensionMismatchRejected) {
  const HermitianOperator id(DenseMatrix::Identity(3, 3));
  EXPECT_THROW(qcft::apply(id, random_vector(4)), PreconditionError);
  EXPECT_THROW(inner(random_vector(3), random_vector(4)), PreconditionError);
}

TEST(Banded, ApplyMatchesDenseOracleOn16Dims) {
  for (int trial = 0; trial < 10; ++trial) {
    auto [b, d] = random_banded(16, static_cast<std::size_t>(uniform_int(1, 3)));
    const ComplexVector v = random_vector(16);
    EXPECT_LT((b.apply(v) - d * v).cwiseAbs().maxCoeff(), tol::banded_dense);
  }
}

TEST(Banded, BandedAndDensePathsAgreeUpTo64) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto bw = static_cast<std::size_t>(uniform_int(1, 5));
    const auto n = static_cast<std::size_t>(uniform_int(static_cast<int>(2 * bw + 1), 64));
    auto [b, d] = random_banded(n, bw);
    const HermitianOperator hb(b), hd(d);
    const ComplexVector v = random_vector(static_cast<Eigen::Index>(n));
    EXPECT_LT((hb.apply(v) - hd.apply(v)).cwiseAbs().maxCoeff(), tol::banded_dense);
    const double theta = uniform(-2, 2);
    EXPECT_LT(max_abs(expm_unitary(hb, theta).matrix() - expm_unitary(hd, theta).matrix()), tol::banded_dense * 100);
  }
}

TEST(Banded, NeverAddressesOutsideBand) {
  BandedMatrix b(10, 1);
  EXPECT_NO_THROW(b.add(0, 9, 1.0));  // cyclic neighbour
  EXPECT_THROW(b.add(0, 5, 1.0), PreconditionError);
  EXPECT_EQ(b.entry(0, 5), Complex{});
  EXPECT_THROW(BandedMatrix(4, 2), PreconditionError);
}

TEST(Unitary, RejectsNonUnitary) {
  DenseMatrix m = DenseMatrix::Identity(2, 2);
  m(0, 0) = 1.1;
  EXPECT_THROW(UnitaryOperator{m}, PreconditionError);
}
