#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "qcft/field_models.hpp"
#include "qcft/numerics.hpp"

namespace qcft {

/// Pairs whose left site is odd / even. The first layer applied to a state is
/// the even one, matching U^(N) = [(prod_odd)(prod_even)]^N.
enum class Parity { odd, even };

inline std::string_view to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// Coupling that turns the calibrated pair generator into the gate
/// Hamiltonian H_{n,n+1} = -+(2i/pi)(...): 2/pi per bond against
/// the calibrated 1/2.
inline constexpr double kGateCoupling = 4.0 / std::numbers::pi;

/// Phase per gate, pi * omega * t / (4 N).
inline double gate_phase(double omega, double t, int n_steps) {
  return std::numbers::pi * omega * t / (4.0 * n_steps);
}

/// Calibrated one-particle generator on sites (n, n+1), 2d x 2d, ordered
/// (site n components, site n+1 components). Dirac mass on each site is
/// weighted so that the sum over all pairs reproduces the global mass term.
inline HermitianOperator gate_generator(const FieldModel& model, double left_mass_weight = 0.5,
                                        double right_mass_weight = 0.5) {
  model.validate();
  switch (model.kind) {
    case FieldKind::weyl: {
      DenseMatrix g = DenseMatrix::Zero(2, 2);
      g(0, 1) = -static_cast<double>(model.chirality) * kI * 0.5;
      g(1, 0) = std::conj(g(0, 1));
      return HermitianOperator(g);
    }
    case FieldKind::dirac: {
      DenseMatrix g = DenseMatrix::Zero(8, 8);
      for (int a = 0; a < 2; ++a) {
        const int b = 1 - a;
        g(a, 4 + b) += 0.5 * kI;
        g(4 + b, a) += -0.5 * kI;
        g(2 + a, 4 + 2 + b) += -0.5 * kI;
        g(4 + 2 + b, 2 + a) += 0.5 * kI;
      }
      for (int a = 0; a < 2; ++a) {
        g(a, 2 + a) += model.mass_ratio * left_mass_weight;
        g(2 + a, a) += model.mass_ratio * left_mass_weight;
        g(4 + a, 4 + 2 + a) += model.mass_ratio * right_mass_weight;
        g(4 + 2 + a, 4 + a) += model.mass_ratio * right_mass_weight;
      }
      return HermitianOperator(g);
    }
    case FieldKind::schrodinger:
      break;
  }
  throw PreconditionError("gate_generator: schrodinger fields are evolved exactly, no gate set is defined");
}

/// Gate Hamiltonian H_{n,n+1} with the gate coupling (4/pi x calibrated).
inline HermitianOperator gate_hamiltonian(const FieldModel& model, double left_mass_weight = 0.5,
                                          double right_mass_weight = 0.5) {
  return HermitianOperator(kGateCoupling * gate_generator(model, left_mass_weight, right_mass_weight).to_dense());
}

struct GateSpec {
  int left_site;
  HermitianOperator generator;  // gate Hamiltonian (4/pi x calibrated generator)
  double phase;                 // theta; gate = exp(-i theta generator)
  UnitaryOperator unitary;
};

struct Layer {
  Parity parity;
  std::vector<GateSpec> gates;  // disjoint site pairs
};

/// Left sites of the pairs in a layer. Periodic lattices include the wrap
/// pair (N-1, 0) in the odd layer; open lattices omit it.
inline std::vector<int> pair_left_sites(const LatticeSpec& spec, Parity parity) {
  std::vector<int> out;
  const int first = parity == Parity::odd ? 1 : 0;
  const int last = spec.boundary == Boundary::periodic ? spec.n_sites - 1 : spec.n_sites - 2;
  for (int n = first; n <= last; n += 2) out.push_back(n);
  return out;
}

/// Number of pairs (over both parities) that contain each site.
inline std::vector<int> pair_membership(const LatticeSpec& spec) {
  std::vector<int> count(static_cast<std::size_t>(spec.n_sites), 0);
  for (Parity p : {Parity::odd, Parity::even})
    for (int n : pair_left_sites(spec, p)) {
      ++count[static_cast<std::size_t>(n)];
      ++count[static_cast<std::size_t>((n + 1) % spec.n_sites)];
    }
  return count;
}

inline void require_brick_wall_lattice(const LatticeSpec& spec) {
  spec.validate();
  require(spec.boundary == Boundary::open || spec.n_sites % 2 == 0,
          "brick wall: periodic lattices need an even number of sites (width-parity rule)");
}

/// Calibrated generator of one pair with the lattice's mass weights.
inline HermitianOperator pair_generator(const FieldModel& model, const LatticeSpec& spec, int left_site) {
  const auto membership = pair_membership(spec);
  const int right = (left_site + 1) % spec.n_sites;
  return gate_generator(model, 1.0 / membership[static_cast<std::size_t>(left_site)],
                        1.0 / membership[static_cast<std::size_t>(right)]);
}

/// Sum of the calibrated pair generators of one parity, embedded in the
/// full one-particle space.
inline DenseMatrix layer_generator_sum(const FieldModel& model, const LatticeSpec& spec, Parity parity) {
  require_brick_wall_lattice(spec);
  const int d = model.components_per_site();
  const auto dim = static_cast<Eigen::Index>(spec.n_sites * d);
  DenseMatrix sum = DenseMatrix::Zero(dim, dim);
  for (int n : pair_left_sites(spec, parity)) {
    const DenseMatrix g = pair_generator(model, spec, n).to_dense();
    const int sites[2] = {n, (n + 1) % spec.n_sites};
    for (int i = 0; i < 2 * d; ++i)
      for (int j = 0; j < 2 * d; ++j)
        sum(sites[i / d] * d + i % d, sites[j / d] * d + j % d) += g(i, j);
  }
  return sum;
}

/// Largest entrywise deviation of (odd sum + even sum) from the global H.
inline double calibration_residual(const FieldModel& model, const LatticeSpec& spec) {
  const DenseMatrix total = layer_generator_sum(model, spec, Parity::odd) + layer_generator_sum(model, spec, Parity::even);
  return max_abs(total - build_hamiltonian(model, spec).matrix.to_dense());
}

class BrickWallCircuit {
 public:
  BrickWallCircuit(LatticeSpec spec, int components, int n_steps, std::vector<Layer> layers)
      : spec_(spec), components_(components), n_steps_(n_steps), layers_(std::move(layers)) {}

  const LatticeSpec& spec() const { return spec_; }
  int components_per_site() const { return components_; }
  int n_steps() const { return n_steps_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t dimension() const { return static_cast<std::size_t>(spec_.n_sites * components_); }

 private:
  LatticeSpec spec_;
  int components_;
  int n_steps_;
  std::vector<Layer> layers_;
};

/// Brick-wall circuit U_t^(N): 2N alternating layers, even layer first.
inline BrickWallCircuit compile(const FieldModel& model, const LatticeSpec& spec, double t, int n_steps) {
  require(n_steps >= 1, "compile: n_steps must be >= 1");
  require(std::isfinite(t) && t >= 0.0, "compile: t must be finite and >= 0");
  require_brick_wall_lattice(spec);
  const double phase = gate_phase(proper_frequency(model, spec), t, n_steps);

  auto build_layer = [&](Parity parity) {
    Layer layer{parity, {}};
    for (int n : pair_left_sites(spec, parity)) {
      HermitianOperator g(kGateCoupling * pair_generator(model, spec, n).to_dense());
      UnitaryOperator u = expm_unitary(g, phase);
      layer.gates.push_back(GateSpec{n, std::move(g), phase, std::move(u)});
    }
    return layer;
  };
  const Layer even = build_layer(Parity::even);
  const Layer odd = build_layer(Parity::odd);
  std::vector<Layer> layers;
  layers.reserve(static_cast<std::size_t>(2 * n_steps));
  for (int step = 0; step < n_steps; ++step) {
    layers.push_back(even);
    layers.push_back(odd);
  }
  return BrickWallCircuit(spec, model.components_per_site(), n_steps, std::move(layers));
}

/// Applies one layer in place: each gate mixes the 2d amplitudes of its pair.
inline void apply_layer(const Layer& layer, int n_sites, int d, ComplexVector& v) {
  Eigen::VectorXcd local(2 * d);
  for (const GateSpec& g : layer.gates) {
    const int right = (g.left_site + 1) % n_sites;
    for (int a = 0; a < d; ++a) {
      local[a] = v[g.left_site * d + a];
      local[d + a] = v[right * d + a];
    }
    local = g.unitary.matrix() * local;
    for (int a = 0; a < d; ++a) {
      v[g.left_site * d + a] = local[a];
      v[right * d + a] = local[d + a];
    }
  }
}

/// Applies the first n_layers layers (all when omitted).
inline ComplexVector apply_layers(const BrickWallCircuit& c, ComplexVector v, std::optional<std::size_t> n_layers = {}) {
  require(static_cast<std::size_t>(v.size()) == c.dimension(), "apply_circuit: dimension mismatch");
  const std::size_t count = n_layers.value_or(c.layers().size());
  require(count <= c.layers().size(), "apply_layers: circuit has fewer layers than requested");
  for (std::size_t i = 0; i < count; ++i) apply_layer(c.layers()[i], c.spec().n_sites, c.components_per_site(), v);
  return v;
}

inline ComplexVector apply_circuit(const BrickWallCircuit& c, const ComplexVector& v) { return apply_layers(c, v); }

/// Dense matrix of the whole circuit (column j = circuit applied to e_j).
inline UnitaryOperator dense_unitary(const BrickWallCircuit& c) {
  const auto n = static_cast<Eigen::Index>(c.dimension());
  DenseMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = apply_circuit(c, ComplexVector::Unit(n, j));
  return UnitaryOperator(std::move(m), tol::circuit_unitary);
}

/// Time at which every calibrated gate rotates by pi/2 (a swap up to local
/// unitaries for the massless hopping fields): omega t / N = pi.
inline double swap_time(const FieldModel& model, const LatticeSpec& spec, int n_steps) {
  return std::numbers::pi * n_steps / proper_frequency(model, spec);
}

/// Suzuki bound, evaluated literally:
///   (|H01|^2 pi^2 w^2 t^2 (2Nx+1)^2 / 2N) exp((pi w t / 2)(2Nx+1)((N+2)/N)|H01|).
/// Returns +inf on overflow.
inline double suzuki_bound(double h_gate_norm, double omega, double t, int n_steps, double n_x) {
  require(h_gate_norm >= 0 && omega >= 0 && t >= 0 && n_x >= 0, "suzuki_bound: inputs must be >= 0");
  require(n_steps >= 1, "suzuki_bound: n_steps must be >= 1");
  const double pi = std::numbers::pi;
  const double n = n_steps;
  const double width = 2.0 * n_x + 1.0;
  const double prefactor = h_gate_norm * h_gate_norm * pi * pi * omega * omega * t * t * width * width / (2.0 * n);
  if (prefactor == 0.0) return 0.0;
  const double exponent = (pi * omega * t / 2.0) * width * ((n + 2.0) / n) * h_gate_norm;
  const double value = prefactor * std::exp(exponent);
  return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
}

/// Largest dimension for which the dense exact unitary is built.
inline constexpr std::size_t kDenseOracleLimit = 512;

struct TrotterErrorReport {
  int n_steps = 0;
  double empirical_error = 0.0;  // spectral norm |U_t - U_t^(N)| (or sampled estimate)
  double suzuki_bound = 0.0;
  double n_x = 0.0;
  double wall_time = 0.0;        // seconds
  bool estimated = false;        // true when sampled on random states
};

/// Norm of the bulk gate Hamiltonian |H_{0,1}| entering the bound.
inline double gate_norm(const FieldModel& model) { return operator_norm(gate_hamiltonian(model)); }

/// Exact spectral-norm Trotter error; the bound uses N_x = (n_sites - 1) / 2
/// unless given.
inline TrotterErrorReport trotter_error(const FieldModel& model, const LatticeSpec& spec, double t, int n_steps,
                                        std::optional<double> n_x = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = static_cast<std::size_t>(spec.n_sites * model.components_per_site());
  require(dim <= kDenseOracleLimit,
          "trotter_error: lattice too large for the dense oracle (n_sites*d > 512); use sampled_trotter_error");
  const BrickWallCircuit c = compile(model, spec, t, n_steps);
  const LatticeHamiltonian h = build_hamiltonian(model, spec);
  const UnitaryOperator exact = expm_unitary(h.matrix, h.omega * t);
  const UnitaryOperator trotter = dense_unitary(c);

  TrotterErrorReport r;
  r.n_steps = n_steps;
  r.empirical_error = t == 0.0 ? 0.0 : operator_norm(DenseMatrix(exact.matrix() - trotter.matrix()));
  r.n_x = n_x.value_or((spec.n_sites - 1) / 2.0);
  r.suzuki_bound = suzuki_bound(gate_norm(model), h.omega, t, n_steps, r.n_x);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Random unit vector with i.i.d. complex Gaussian entries.
inline ComplexVector random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

/// Lower estimate of the Trotter error: max over random states of
/// |U_t psi - U_t^(N) psi|. For lattices beyond the dense oracle.
inline TrotterErrorReport sampled_trotter_error(const FieldModel& model, const LatticeSpec& spec, double t,
                                                int n_steps, std::uint64_t seed, int samples = 32,
                                                std::optional<double> n_x = {}) {
  require(samples >= 1, "sampled_trotter_error: samples must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const BrickWallCircuit c = compile(model, spec, t, n_steps);
  const LatticeHamiltonian h = build_hamiltonian(model, spec);
  const SpectralDecomposition sd(h.matrix);
  std::mt19937_64 rng(seed);
  TrotterErrorReport r;
  r.n_steps = n_steps;
  r.estimated = true;
  for (int i = 0; i < samples; ++i) {
    const ComplexVector psi = random_state(c.dimension(), rng);
    r.empirical_error = std::max(r.empirical_error, (sd.evolve(psi, h.omega * t) - apply_circuit(c, psi)).norm());
  }
  r.n_x = n_x.value_or((spec.n_sites - 1) / 2.0);
  r.suzuki_bound = suzuki_bound(gate_norm(model), h.omega, t, n_steps, r.n_x);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace qcft
