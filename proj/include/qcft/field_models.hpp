#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcft/numerics.hpp"

namespace qcft {

enum class Boundary { periodic, open };
enum class FieldKind { schrodinger, weyl, dirac };

inline std::string_view to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

inline std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::schrodinger: return "schrodinger";
    case FieldKind::weyl: return "weyl";
    case FieldKind::dirac: return "dirac";
  }
  return "?";
}

/// Discretization of a 1D lattice. Internal units: hbar = c = 1, and the
/// defaults a = tau = omega = 1 so that omega * a = c = a / tau.
struct LatticeSpec {
  int n_sites = 2;
  double spacing = 1.0;     // a
  double time_grain = 1.0;  // tau
  double omega = 1.0;       // proper frequency of the hopping fields
  Boundary boundary = Boundary::periodic;

  static LatticeSpec periodic(int n) { return {n, 1.0, 1.0, 1.0, Boundary::periodic}; }
  static LatticeSpec open(int n) { return {n, 1.0, 1.0, 1.0, Boundary::open}; }

  /// Lattice with spacing a; omega = c / a and tau = a / c.
  static LatticeSpec with_spacing(int n, double a, Boundary b = Boundary::periodic) {
    return {n, a, a, 1.0 / a, b};
  }

  double period() const { return 2.0 * std::numbers::pi / omega; }

  void validate() const {
    require(n_sites >= 2, "LatticeSpec: n_sites must be >= 2");
    require(spacing > 0 && time_grain > 0 && omega > 0, "LatticeSpec: a, tau, omega must be positive");
    const double c_from_omega = omega * spacing;
    const double c_from_grain = spacing / time_grain;
    require(std::abs(c_from_omega - 1.0) <= 1e-12 && std::abs(c_from_grain - 1.0) <= 1e-12,
            "LatticeSpec: grain relations require omega * a = c = a / tau = 1");
  }
};

struct FieldModel {
  FieldKind kind = FieldKind::weyl;
  int chirality = +1;        // weyl only
  double mass_ratio = 0.2;   // a / lambda, dirac only
  double mass = 0.5;         // schrodinger only; omega = hbar / (2 m a^2)

  static FieldModel schrodinger(double m) { return {FieldKind::schrodinger, +1, 0.0, m}; }
  static FieldModel weyl(int s) { return {FieldKind::weyl, s, 0.0, 0.5}; }
  static FieldModel dirac(double ratio) { return {FieldKind::dirac, +1, ratio, 0.5}; }

  int components_per_site() const { return kind == FieldKind::dirac ? 4 : 1; }

  void validate() const {
    require(chirality == 1 || chirality == -1, "FieldModel: chirality must be +1 or -1");
    require(std::isfinite(mass_ratio) && mass_ratio >= 0.0, "FieldModel: mass_ratio must be >= 0");
    require(kind != FieldKind::schrodinger || (std::isfinite(mass) && mass > 0.0),
            "FieldModel: schrodinger mass must be positive");
  }
};

/// Dimensionless H together with the frequency omega of U_t = exp(-i omega t H).
struct LatticeHamiltonian {
  HermitianOperator matrix;
  double omega;
};

/// omega = c / a for the hopping fields, hbar / (2 m a^2) for Schrodinger.
inline double proper_frequency(const FieldModel& model, const LatticeSpec& spec) {
  if (model.kind == FieldKind::schrodinger) return 1.0 / (2.0 * model.mass * spec.spacing * spec.spacing);
  return 1.0 / spec.spacing;
}

namespace detail {

// Collects entries into banded storage when the dimension allows it,
// otherwise dense. Periodic wraps land inside the cyclic band.
class OperatorAssembler {
 public:
  OperatorAssembler(std::size_t n, std::size_t bandwidth)
      : banded_(n >= 2 * bandwidth + 1), band_(banded_ ? n : 2 * bandwidth + 1, bandwidth),
        dense_(DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

  void add(std::size_t i, std::size_t j, Complex v) {
    if (banded_)
      band_.add(i, j, v);
    else
      dense_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
  }

  /// Adds v at (i, j) and conj(v) at (j, i).
  void add_hermitian_pair(std::size_t i, std::size_t j, Complex v) {
    add(i, j, v);
    add(j, i, std::conj(v));
  }

  HermitianOperator build() && {
    if (banded_) return HermitianOperator(std::move(band_));
    return HermitianOperator(std::move(dense_));
  }

 private:
  bool banded_;
  BandedMatrix band_;
  DenseMatrix dense_;
};

// Nearest-neighbour bonds (n, n+1) present on the lattice.
inline std::vector<int> bond_left_sites(const LatticeSpec& spec) {
  std::vector<int> out;
  const int last = spec.boundary == Boundary::periodic ? spec.n_sites : spec.n_sites - 1;
  for (int n = 0; n < last; ++n) out.push_back(n);
  return out;
}

}  // namespace detail

/// H = sum_j e_{j+1,j} - 2 e_{j,j} + e_{j,j+1}; omega = hbar / (2 m a^2).
inline LatticeHamiltonian build_schrodinger(const LatticeSpec& spec, double m) {
  spec.validate();
  require(m > 0.0 && std::isfinite(m), "build_schrodinger: mass must be positive");
  const auto n = static_cast<std::size_t>(spec.n_sites);
  detail::OperatorAssembler h(n, 1);
  for (std::size_t j = 0; j < n; ++j) h.add(j, j, -2.0);
  for (int left : detail::bond_left_sites(spec)) {
    const auto i = static_cast<std::size_t>(left);
    const auto j = static_cast<std::size_t>((left + 1) % spec.n_sites);
    h.add_hermitian_pair(i, j, 1.0);
  }
  return {std::move(h).build(), proper_frequency(FieldModel::schrodinger(m), spec)};
}

/// One-particle kernel of H_s = -s (i/2) sum_n (phi_n^dag phi_{n+1} - h.c.):
/// entry -s i/2 at (n, n+1), +s i/2 at (n+1, n).
inline LatticeHamiltonian build_weyl(const LatticeSpec& spec, int s) {
  spec.validate();
  require(s == 1 || s == -1, "build_weyl: chirality must be +1 or -1");
  const auto n = static_cast<std::size_t>(spec.n_sites);
  detail::OperatorAssembler h(n, 1);
  for (int left : detail::bond_left_sites(spec)) {
    const auto i = static_cast<std::size_t>(left);
    const auto j = static_cast<std::size_t>((left + 1) % spec.n_sites);
    h.add_hermitian_pair(i, j, -static_cast<double>(s) * kI * 0.5);
  }
  return {std::move(h).build(), proper_frequency(FieldModel::weyl(s), spec)};
}

/// Component index of (site, alpha) in the site-major ordering u1, u2, v1, v2.
inline std::size_t dirac_index(int site, int alpha) { return static_cast<std::size_t>(4 * site + alpha); }

/// Dirac block Hamiltonian
///   [ (i/2) sx (d+ - d-)      (a/lambda) I           ]
///   [ (a/lambda) I            -(i/2) sx (d+ - d-)    ]
/// in the site-major ordering (u1, u2, v1, v2); cyclic bandwidth 5.
inline LatticeHamiltonian build_dirac(const LatticeSpec& spec, double mass_ratio) {
  spec.validate();
  require(std::isfinite(mass_ratio) && mass_ratio >= 0.0, "build_dirac: mass_ratio must be >= 0");
  const auto dim = static_cast<std::size_t>(4 * spec.n_sites);
  detail::OperatorAssembler h(dim, 5);
  for (int left : detail::bond_left_sites(spec)) {
    const int right = (left + 1) % spec.n_sites;
    // sigma_x couples component 0 <-> 1 within each two-component block.
    for (int a = 0; a < 2; ++a) {
      const int b = 1 - a;
      h.add_hermitian_pair(dirac_index(left, a), dirac_index(right, b), 0.5 * kI);
      h.add_hermitian_pair(dirac_index(left, 2 + a), dirac_index(right, 2 + b), -0.5 * kI);
    }
  }
  for (int site = 0; site < spec.n_sites; ++site)
    for (int a = 0; a < 2; ++a) h.add_hermitian_pair(dirac_index(site, a), dirac_index(site, 2 + a), mass_ratio);
  return {std::move(h).build(), proper_frequency(FieldModel::dirac(mass_ratio), spec)};
}

inline LatticeHamiltonian build_hamiltonian(const FieldModel& model, const LatticeSpec& spec) {
  model.validate();
  switch (model.kind) {
    case FieldKind::schrodinger: return build_schrodinger(spec, model.mass);
    case FieldKind::weyl: return build_weyl(spec, model.chirality);
    case FieldKind::dirac: return build_dirac(spec, model.mass_ratio);
  }
  throw PreconditionError("build_hamiltonian: unknown field kind");
}

struct DispersionPoint {
  double k;                          // wavenumber, 1 / length
  std::vector<double> closed_form;   // sorted, units of hbar
  std::vector<double> diagonalized;  // sorted, from the plane-wave block of H
};

/// Closed-form energies of omega * H(k), sorted ascending.
inline std::vector<double> closed_form_energies(const FieldModel& model, double omega, double ka) {
  switch (model.kind) {
    case FieldKind::schrodinger: return {omega * (2.0 * std::cos(ka) - 2.0)};
    case FieldKind::weyl: return {omega * model.chirality * std::sin(ka)};
    case FieldKind::dirac: {
      const double e = omega * std::sqrt(std::sin(ka) * std::sin(ka) + model.mass_ratio * model.mass_ratio);
      return {-e, -e, e, e};
    }
  }
  return {};
}

/// Allowed wavenumbers 2 pi j / (N a), with j folded into (-N/2, N/2].
inline std::vector<double> allowed_wavenumbers(const LatticeSpec& spec) {
  std::vector<double> ks;
  const int n = spec.n_sites;
  for (int j = -((n - 1) / 2); j <= n / 2; ++j)
    ks.push_back(2.0 * std::numbers::pi * j / (n * spec.spacing));
  return ks;
}

/// Per-k energies: closed form next to the eigenvalues of the d x d block
/// P_k^dag H P_k, where P_k holds the plane waves e^{i k n a} / sqrt(N).
inline std::vector<DispersionPoint> dispersion(const FieldModel& model, const LatticeSpec& spec) {
  model.validate();
  spec.validate();
  require(spec.boundary == Boundary::periodic, "dispersion: requires periodic boundary (plane waves)");
  const LatticeHamiltonian h = build_hamiltonian(model, spec);
  const int d = model.components_per_site();
  const int n = spec.n_sites;
  const auto dim = static_cast<Eigen::Index>(n * d);

  std::vector<DispersionPoint> out;
  for (double k : allowed_wavenumbers(spec)) {
    DenseMatrix plane = DenseMatrix::Zero(dim, d);
    for (int site = 0; site < n; ++site)
      for (int a = 0; a < d; ++a)
        plane(site * d + a, a) = std::exp(kI * (k * site * spec.spacing)) / std::sqrt(static_cast<double>(n));
    DenseMatrix hp(dim, d);
    for (int a = 0; a < d; ++a) hp.col(a) = h.matrix.apply(plane.col(a));
    const DenseMatrix block = plane.adjoint() * hp;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(0.5 * (block + block.adjoint()), Eigen::EigenvaluesOnly);
    DispersionPoint p{k, closed_form_energies(model, h.omega, k * spec.spacing), {}};
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      p.diagonalized.push_back(h.omega * solver.eigenvalues()[i]);
    std::sort(p.closed_form.begin(), p.closed_form.end());
    std::sort(p.diagonalized.begin(), p.diagonalized.end());
    out.push_back(std::move(p));
  }
  return out;
}

/// Largest |closed form - diagonalized| over all k and bands.
inline double dispersion_max_deviation(const std::vector<DispersionPoint>& points) {
  double worst = 0.0;
  for (const auto& p : points)
    for (std::size_t i = 0; i < p.closed_form.size(); ++i)
      worst = std::max(worst, std::abs(p.closed_form[i] - p.diagonalized[i]));
  return worst;
}

/// Full dense spectrum of omega * H, sorted.
inline std::vector<double> full_spectrum(const LatticeHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.matrix.to_dense(), Eigen::EigenvaluesOnly);
  std::vector<double> e;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) e.push_back(h.omega * solver.eigenvalues()[i]);
  return e;
}

/// Least-squares slope of log omega against log a over the given spacings.
inline double fit_frequency_exponent(const FieldModel& model, const std::vector<double>& spacings, int n_sites = 8) {
  require(spacings.size() >= 2, "fit_frequency_exponent: need at least two spacings");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double a : spacings) {
    const LatticeSpec spec = LatticeSpec::with_spacing(n_sites, a);
    const double omega = build_hamiltonian(model, spec).omega;
    const double x = std::log(a), y = std::log(omega);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(spacings.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace qcft
