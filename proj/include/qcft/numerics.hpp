#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qcft/tolerances.hpp"

namespace qcft {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

inline double max_abs(const DenseMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest entrywise deviation |A_ij - conj(A_ji)|.
inline double max_asymmetry(const DenseMatrix& m) {
  require(m.rows() == m.cols(), "max_asymmetry: matrix must be square");
  return max_abs(m - m.adjoint());
}

/// Square matrix stored by cyclic diagonals: row i keeps the entries at
/// columns (i + o) mod n for o in [-bandwidth, bandwidth]. Periodic wraps
/// therefore stay inside the band. Requires n >= 2 * bandwidth + 1 so that no
/// two offsets alias the same column.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t bandwidth)
      : n_(n), bandwidth_(bandwidth), data_(n * (2 * bandwidth + 1), Complex{}) {
    require(n > 0, "BandedMatrix: dimension must be positive");
    require(n >= 2 * bandwidth + 1,
            "BandedMatrix: dimension must be at least 2*bandwidth+1");
  }

  std::size_t dimension() const { return n_; }
  std::size_t bandwidth() const { return bandwidth_; }

  /// Cyclic offset of column j relative to row i, if it lies inside the band.
  bool in_band(std::size_t i, std::size_t j) const { return offset_of(i, j).first; }

  Complex entry(std::size_t i, std::size_t j) const {
    auto [ok, slot] = offset_of(i, j);
    return ok ? data_[slot] : Complex{};
  }

  void add(std::size_t i, std::size_t j, Complex value) {
    auto [ok, slot] = offset_of(i, j);
    if (!ok) {
      std::ostringstream msg;
      msg << "BandedMatrix: entry (" << i << ", " << j << ") outside bandwidth " << bandwidth_;
      throw PreconditionError(msg.str());
    }
    data_[slot] += value;
  }

  /// O(bandwidth * n) product.
  ComplexVector apply(const ComplexVector& v) const {
    require(static_cast<std::size_t>(v.size()) == n_, "BandedMatrix::apply: dimension mismatch");
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n_));
    const std::size_t width = 2 * bandwidth_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
      Complex acc{};
      const Complex* row = &data_[i * width];
      for (std::size_t k = 0; k < width; ++k) {
        const std::size_t j = (i + n_ + k - bandwidth_) % n_;
        acc += row[k] * v[static_cast<Eigen::Index>(j)];
      }
      out[static_cast<Eigen::Index>(i)] = acc;
    }
    return out;
  }

  DenseMatrix to_dense() const {
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    const std::size_t width = 2 * bandwidth_ + 1;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < width; ++k) {
        const std::size_t j = (i + n_ + k - bandwidth_) % n_;
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += data_[i * width + k];
      }
    return m;
  }

 private:
  std::pair<bool, std::size_t> offset_of(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) return {false, 0};
    const std::size_t forward = (j + n_ - i) % n_;  // j - i mod n
    std::size_t k;
    if (forward <= bandwidth_) {
      k = bandwidth_ + forward;
    } else if (n_ - forward <= bandwidth_) {
      k = bandwidth_ - (n_ - forward);
    } else {
      return {false, 0};
    }
    return {true, i * (2 * bandwidth_ + 1) + k};
  }

  std::size_t n_;
  std::size_t bandwidth_;
  std::vector<Complex> data_;
};

/// Immutable Hermitian operator with dense or banded storage. Construction
/// rejects inputs whose conjugate transpose differs beyond tol::hermitian.
class HermitianOperator {
 public:
  explicit HermitianOperator(DenseMatrix m) : storage_(std::move(m)) { validate(); }
  explicit HermitianOperator(BandedMatrix b) : storage_(std::move(b)) { validate(); }

  std::size_t dimension() const {
    return std::visit(
        [](const auto& s) -> std::size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DenseMatrix>)
            return static_cast<std::size_t>(s.rows());
          else
            return s.dimension();
        },
        storage_);
  }

  bool is_banded() const { return std::holds_alternative<BandedMatrix>(storage_); }

  /// Declared bandwidth; dense storage reports dimension - 1.
  std::size_t bandwidth() const {
    return is_banded() ? std::get<BandedMatrix>(storage_).bandwidth() : dimension() - 1;
  }

  Complex entry(std::size_t i, std::size_t j) const {
    if (is_banded()) return std::get<BandedMatrix>(storage_).entry(i, j);
    return std::get<DenseMatrix>(storage_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  DenseMatrix to_dense() const {
    if (is_banded()) return std::get<BandedMatrix>(storage_).to_dense();
    return std::get<DenseMatrix>(storage_);
  }

  ComplexVector apply(const ComplexVector& v) const {
    require(static_cast<std::size_t>(v.size()) == dimension(), "apply: dimension mismatch");
    if (is_banded()) return std::get<BandedMatrix>(storage_).apply(v);
    return std::get<DenseMatrix>(storage_) * v;
  }

 private:
  void validate() const {
    require(dimension() > 0, "HermitianOperator: dimension must be positive");
    const DenseMatrix m = to_dense();
    require(m.rows() == m.cols(), "HermitianOperator: matrix must be square");
    require(m.allFinite(), "HermitianOperator: entries must be finite");
    const double asym = max_asymmetry(m);
    const double scale = std::max(1.0, max_abs(m));
    if (asym > tol::hermitian * scale) {
      std::ostringstream msg;
      msg << "HermitianOperator: not Hermitian, max |H - H^dag| = " << asym;
      throw PreconditionError(msg.str());
    }
  }

  std::variant<DenseMatrix, BandedMatrix> storage_;
};

/// Immutable unitary; construction checks ||U^dag U - I||_max.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(DenseMatrix m, double tolerance = tol::unitary) : m_(std::move(m)) {
    require(m_.rows() == m_.cols() && m_.rows() > 0, "UnitaryOperator: matrix must be square");
    const double dev = unitarity_defect(m_);
    if (!(dev <= tolerance)) {
      std::ostringstream msg;
      msg << "UnitaryOperator: ||U^dag U - I||_max = " << dev << " exceeds " << tolerance;
      throw PreconditionError(msg.str());
    }
  }

  static double unitarity_defect(const DenseMatrix& m) {
    return max_abs(m.adjoint() * m - DenseMatrix::Identity(m.rows(), m.cols()));
  }

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const DenseMatrix& matrix() const { return m_; }

  ComplexVector apply(const ComplexVector& v) const {
    require(v.size() == m_.cols(), "apply: dimension mismatch");
    return m_ * v;
  }

  UnitaryOperator operator*(const UnitaryOperator& rhs) const {
    require(dimension() == rhs.dimension(), "UnitaryOperator product: dimension mismatch");
    return UnitaryOperator(m_ * rhs.m_, 10 * tol::unitary);
  }

  UnitaryOperator adjoint() const { return UnitaryOperator(m_.adjoint(), 10 * tol::unitary); }

 private:
  DenseMatrix m_;
};

/// Eigendecomposition H = V diag(E) V^dag, reused for many evolution times.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.to_dense());
    require(solver.info() == Eigen::Success, "SpectralDecomposition: eigensolver failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  const RealVector& energies() const { return energies_; }
  const DenseMatrix& vectors() const { return vectors_; }
  std::size_t dimension() const { return static_cast<std::size_t>(energies_.size()); }

  /// exp(-i theta H) v.
  ComplexVector evolve(const ComplexVector& v, double theta) const {
    require(static_cast<std::size_t>(v.size()) == dimension(), "evolve: dimension mismatch");
    if (theta == 0.0) return v;
    ComplexVector c = vectors_.adjoint() * v;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(-kI * (theta * energies_[i]));
    return vectors_ * c;
  }

  /// exp(-i theta H) as a dense matrix.
  DenseMatrix exponential(double theta) const {
    const auto n = static_cast<Eigen::Index>(dimension());
    if (theta == 0.0) return DenseMatrix::Identity(n, n);
    ComplexVector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::exp(-kI * (theta * energies_[i]));
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

 private:
  RealVector energies_;
  DenseMatrix vectors_;
};

/// exp(-i theta H). Exact identity for theta == 0.
inline UnitaryOperator expm_unitary(const HermitianOperator& h, double theta) {
  require(std::isfinite(theta), "expm_unitary: theta must be finite");
  return UnitaryOperator(SpectralDecomposition(h).exponential(theta));
}

/// Dense overload; validates Hermiticity first (diagnostic carries max asymmetry).
inline UnitaryOperator expm_unitary(const DenseMatrix& h, double theta) {
  return expm_unitary(HermitianOperator(h), theta);
}

/// Spectral norm (largest singular value).
inline double operator_norm(const DenseMatrix& a) {
  require(a.size() > 0, "operator_norm: empty matrix");
  require(a.allFinite(), "operator_norm: entries must be finite");
  Eigen::BDCSVD<DenseMatrix> svd(a);
  return svd.singularValues()(0);
}

inline double operator_norm(const HermitianOperator& h) { return operator_norm(h.to_dense()); }
inline double operator_norm(const UnitaryOperator& u) { return operator_norm(u.matrix()); }

inline ComplexVector apply(const HermitianOperator& a, const ComplexVector& v) { return a.apply(v); }
inline ComplexVector apply(const UnitaryOperator& a, const ComplexVector& v) { return a.apply(v); }

inline Complex inner(const ComplexVector& u, const ComplexVector& v) {
  require(u.size() == v.size(), "inner: dimension mismatch");
  return u.dot(v);  // conjugates u
}

inline double norm(const ComplexVector& v) { return v.norm(); }

}  // namespace qcft
