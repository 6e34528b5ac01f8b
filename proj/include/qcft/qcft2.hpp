#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "qcft/field_models.hpp"
#include "qcft/numerics.hpp"

namespace qcft {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Operator assembly bound (2^12 basis states) and state bound (2^20).
inline constexpr int kMaxOperatorQubits = 12;
inline constexpr int kMaxStateQubits = 20;

/// Basis index convention: qubit 0 is the most significant bit; |down> is bit 0.
inline bool qubit_up(std::uint64_t basis, int qubit, int n_qubits) {
  return (basis >> (n_qubits - 1 - qubit)) & 1u;
}

inline std::uint64_t qubit_mask(int qubit, int n_qubits) { return std::uint64_t{1} << (n_qubits - 1 - qubit); }

/// Jordan-Wigner string sign prod_{j<k} sigma_z^j on a basis state, with
/// sigma_z = +1 on |up> and -1 on |down>.
inline double jw_string_sign(std::uint64_t basis, int k, int n_qubits) {
  int downs = 0;
  for (int j = 0; j < k; ++j) downs += qubit_up(basis, j, n_qubits) ? 0 : 1;
  return downs % 2 == 0 ? 1.0 : -1.0;
}

/// Gamma_k |basis>: (sign, target) or nothing when qubit k is already down.
inline std::optional<std::pair<double, std::uint64_t>> jw_lower(std::uint64_t basis, int k, int n_qubits) {
  if (!qubit_up(basis, k, n_qubits)) return std::nullopt;
  return std::make_pair(jw_string_sign(basis, k, n_qubits), basis ^ qubit_mask(k, n_qubits));
}

/// Gamma_k^dag |basis>.
inline std::optional<std::pair<double, std::uint64_t>> jw_raise(std::uint64_t basis, int k, int n_qubits) {
  if (qubit_up(basis, k, n_qubits)) return std::nullopt;
  return std::make_pair(jw_string_sign(basis, k, n_qubits), basis ^ qubit_mask(k, n_qubits));
}

/// Gamma_k = (prod_{j<k} sigma_z^j) sigma^-_k on M qubits, as a sparse 2^M x 2^M matrix.
inline SparseMatrix jw_operator(int k, int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxOperatorQubits, "jw_operator: need 1 <= M <= 12");
  require(k >= 0 && k < n_qubits, "jw_operator: index k out of range [0, M)");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint64_t i = 0; i < dim; ++i)
    if (auto r = jw_lower(i, k, n_qubits))
      entries.emplace_back(static_cast<int>(r->second), static_cast<int>(i), r->first);
  SparseMatrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  g.setFromTriplets(entries.begin(), entries.end());
  return g;
}

/// Total excitation number sum_k Gamma_k^dag Gamma_k (diagonal popcount).
inline SparseMatrix number_operator(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxOperatorQubits, "number_operator: need 1 <= M <= 12");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  SparseMatrix n(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint64_t i = 0; i < dim; ++i)
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), static_cast<double>(std::popcount(i)));
  n.setFromTriplets(entries.begin(), entries.end());
  return n;
}

inline double sparse_max_abs(const SparseMatrix& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

class QubitChainState {
 public:
  QubitChainState(int n_qubits, ComplexVector amplitudes, double tolerance = tol::unit_norm)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    require(n_qubits >= 1 && n_qubits <= kMaxStateQubits, "QubitChainState: need 1 <= M <= 20");
    require(static_cast<std::uint64_t>(amplitudes_.size()) == (std::uint64_t{1} << n_qubits),
            "QubitChainState: amplitude count must be 2^M");
    const double dev = std::abs(amplitudes_.norm() - 1.0);
    if (!(dev <= tolerance)) {
      std::ostringstream msg;
      msg << "QubitChainState: norm deviates from 1 by " << dev;
      throw PreconditionError(msg.str());
    }
  }

  int n_qubits() const { return n_qubits_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  int n_qubits_;
  ComplexVector amplitudes_;
};

/// All-down state |0> = |down ... down>.
inline QubitChainState vacuum(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxStateQubits, "vacuum: need 1 <= M <= 20");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits);
  return QubitChainState(n_qubits, ComplexVector::Unit(dim, 0));
}

/// <N> for a chain state.
inline double excitation_number(const QubitChainState& s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i)
    acc += std::norm(s.amplitudes()[i]) * std::popcount(static_cast<std::uint64_t>(i));
  return acc;
}

struct SecondQuantizedHamiltonian {
  SparseMatrix op;  // hbar omega sum_ab K_ab Gamma_a^dag Gamma_b
  FieldModel model;
  LatticeSpec spec;
  int n_qubits;
};

/// Max-norm of [H, N].
inline double number_commutator(const SecondQuantizedHamiltonian& h2) {
  const SparseMatrix n = number_operator(h2.n_qubits);
  return sparse_max_abs(SparseMatrix(h2.op * n - n * h2.op));
}

/// Second-quantized Hamiltonian with the same couplings as the QCFT1 matrix,
/// phi_a^dag phi_b -> Gamma_a^dag Gamma_b, on M = n_sites * d qubits.
inline SecondQuantizedHamiltonian build_h2(const FieldModel& model, const LatticeSpec& spec) {
  const int m = spec.n_sites * model.components_per_site();
  require(m <= kMaxOperatorQubits, "build_h2: n_sites * d must be <= 12");
  const LatticeHamiltonian h1 = build_hamiltonian(model, spec);
  const DenseMatrix k = h1.matrix.to_dense();
  const std::uint64_t dim = std::uint64_t{1} << m;

  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint64_t i = 0; i < dim; ++i)
    for (int b = 0; b < m; ++b) {
      const auto lowered = jw_lower(i, b, m);
      if (!lowered) continue;
      for (int a = 0; a < m; ++a) {
        const Complex kab = k(a, b);
        if (kab == Complex{}) continue;
        const auto raised = jw_raise(lowered->second, a, m);
        if (!raised) continue;
        entries.emplace_back(static_cast<int>(raised->second), static_cast<int>(i),
                             h1.omega * kab * lowered->first * raised->first);
      }
    }
  SparseMatrix op(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.setFromTriplets(entries.begin(), entries.end());
  op.makeCompressed();

  const double asym = sparse_max_abs(SparseMatrix(op - SparseMatrix(op.adjoint())));
  require(asym <= tol::hermitian * std::max(1.0, sparse_max_abs(op)), "build_h2: assembled operator not Hermitian");
  SecondQuantizedHamiltonian h2{std::move(op), model, spec, m};
  require(number_commutator(h2) <= tol::exact_identity, "build_h2: operator does not conserve excitation number");
  return h2;
}

/// Basis indices with exactly `count` excitations, ascending.
inline std::vector<std::uint64_t> sector_indices(int n_qubits, int count) {
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::uint64_t i = 0; i < dim; ++i)
    if (std::popcount(i) == count) out.push_back(i);
  return out;
}

/// Dense restriction of a sparse operator to the given basis indices.
inline DenseMatrix restrict_to(const SparseMatrix& op, const std::vector<std::uint64_t>& indices) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  DenseMatrix block(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      block(r, c) = op.coeff(static_cast<Eigen::Index>(indices[r]), static_cast<Eigen::Index>(indices[c]));
  return block;
}

/// Single-excitation basis state Gamma_n^dag |0> has amplitude (-1)^n at the
/// index with only qubit n up.
inline double single_excitation_sign(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

/// psi -> sum_n psi_n Gamma_n^dag |0>.
inline QubitChainState embed_single_particle(const ComplexVector& psi, int n_qubits) {
  require(psi.size() == n_qubits, "embed_single_particle: psi length must equal M");
  require(n_qubits >= 1 && n_qubits <= kMaxStateQubits, "embed_single_particle: need 1 <= M <= 20");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits);
  ComplexVector amps = ComplexVector::Zero(dim);
  for (int n = 0; n < n_qubits; ++n)
    amps[static_cast<Eigen::Index>(qubit_mask(n, n_qubits))] = single_excitation_sign(n) * psi[n];
  return QubitChainState(n_qubits, std::move(amps), tol::expectation_norm);
}

/// Inverse of embed_single_particle; rejects states leaking out of the sector.
inline ComplexVector extract_single_particle(const QubitChainState& s) {
  const int m = s.n_qubits();
  ComplexVector psi(m);
  double inside = 0.0;
  for (int n = 0; n < m; ++n) {
    const Complex amp = s.amplitudes()[static_cast<Eigen::Index>(qubit_mask(n, m))];
    psi[n] = single_excitation_sign(n) * amp;
    inside += std::norm(amp);
  }
  const double leakage = std::max(0.0, s.amplitudes().squaredNorm() - inside);
  if (leakage > tol::sector_leakage) {
    std::ostringstream msg;
    msg << "extract_single_particle: weight " << leakage << " outside the one-excitation sector";
    throw PreconditionError(msg.str());
  }
  return psi;
}

/// exp(-i t H2) applied sector by sector (H2 conserves excitation number).
inline QubitChainState evolve_exact(const SecondQuantizedHamiltonian& h2, const QubitChainState& state, double t) {
  require(state.n_qubits() == h2.n_qubits, "evolve_exact: qubit count mismatch");
  require(std::isfinite(t), "evolve_exact: t must be finite");
  if (t == 0.0) return state;
  ComplexVector out = ComplexVector::Zero(state.amplitudes().size());
  for (int count = 0; count <= h2.n_qubits; ++count) {
    const auto idx = sector_indices(h2.n_qubits, count);
    ComplexVector local(static_cast<Eigen::Index>(idx.size()));
    double weight = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      local[static_cast<Eigen::Index>(i)] = state.amplitudes()[static_cast<Eigen::Index>(idx[i])];
      weight += std::norm(local[static_cast<Eigen::Index>(i)]);
    }
    if (weight == 0.0) continue;
    const SpectralDecomposition sd{HermitianOperator(restrict_to(h2.op, idx))};
    local = sd.evolve(local, t);
    for (std::size_t i = 0; i < idx.size(); ++i)
      out[static_cast<Eigen::Index>(idx[i])] = local[static_cast<Eigen::Index>(i)];
  }
  const double slack = std::abs(state.amplitudes().norm() - 1.0) + tol::norm_preservation;
  return QubitChainState(state.n_qubits(), std::move(out), slack);
}

}  // namespace qcft
