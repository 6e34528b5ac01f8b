#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qcft/field_models.hpp"
#include "qcft/numerics.hpp"
#include "qcft/trotter_circuit.hpp"

namespace qcft {

struct WavePacket {
  double x0 = 0.0;      // center, site units
  double k0 = 0.0;      // momentum, 1 / length
  double sigma = 1.0;   // width, site units
  std::vector<Complex> spinor_weights{1.0};
};

/// Equal-weight u1/u2 spinor (a sigma_x eigenvector) mixing both energy
/// branches at k = 0; the Zitterbewegung initial condition.
inline std::vector<Complex> zitter_spinor() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, 0.0, 0.0};
}

/// Normalized psi_n^alpha = w_alpha exp(-(n - x0)^2 / 4 sigma^2) e^{i k0 n a}.
inline ComplexVector gaussian_packet(const LatticeSpec& spec, const FieldModel& model, const WavePacket& packet) {
  spec.validate();
  const int d = model.components_per_site();
  require(packet.sigma >= 1.0, "gaussian_packet: sigma must be >= 1 site");
  require(static_cast<int>(packet.spinor_weights.size()) == d, "gaussian_packet: need one spinor weight per component");
  require(std::any_of(packet.spinor_weights.begin(), packet.spinor_weights.end(), [](Complex w) { return w != Complex{}; }),
          "gaussian_packet: spinor weights are all zero");
  if (spec.boundary == Boundary::open) {
    const double clearance = 5.0 * packet.sigma;
    if (packet.x0 - clearance < 0.0 || packet.x0 + clearance > spec.n_sites - 1) {
      std::ostringstream msg;
      msg << "gaussian_packet: packet must sit >= 5 sigma (" << clearance << " sites) from open boundaries";
      throw PreconditionError(msg.str());
    }
  }
  ComplexVector psi(spec.n_sites * d);
  for (int n = 0; n < spec.n_sites; ++n) {
    const double env = std::exp(-(n - packet.x0) * (n - packet.x0) / (4.0 * packet.sigma * packet.sigma));
    const Complex wave = std::exp(kI * (packet.k0 * n * spec.spacing));
    for (int a = 0; a < d; ++a) psi[n * d + a] = packet.spinor_weights[static_cast<std::size_t>(a)] * env * wave;
  }
  return psi / psi.norm();
}

/// Probability per site, summed over components.
inline std::vector<double> site_probabilities(const ComplexVector& state, int n_sites) {
  require(n_sites > 0 && state.size() % n_sites == 0, "site_probabilities: state length must be a multiple of n_sites");
  const int d = static_cast<int>(state.size() / n_sites);
  std::vector<double> p(static_cast<std::size_t>(n_sites), 0.0);
  for (int n = 0; n < n_sites; ++n)
    for (int a = 0; a < d; ++a) p[static_cast<std::size_t>(n)] += std::norm(state[n * d + a]);
  return p;
}

/// <x> = sum_n n a sum_alpha |psi_n^alpha|^2.
inline double position_expectation(const ComplexVector& state, const LatticeSpec& spec) {
  const double dev = std::abs(state.norm() - 1.0);
  if (dev > tol::expectation_norm) {
    std::ostringstream msg;
    msg << "position_expectation: state norm deviates from 1 by " << dev;
    throw PreconditionError(msg.str());
  }
  const auto p = site_probabilities(state, spec.n_sites);
  double x = 0.0;
  for (int n = 0; n < spec.n_sites; ++n) x += n * spec.spacing * p[static_cast<std::size_t>(n)];
  return x;
}

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  double dt() const { return times.size() >= 2 ? times[1] - times[0] : 0.0; }

  void validate() const {
    require(times.size() >= 2 && times.size() == values.size(), "TimeSeries: need >= 2 samples with matching lengths");
    const double step = dt();
    require(step > 0.0, "TimeSeries: times must increase");
    for (std::size_t i = 1; i < times.size(); ++i)
      require(std::abs((times[i] - times[i - 1]) - step) <= 1e-9 * std::max(1.0, std::abs(step)),
              "TimeSeries: times must be uniformly spaced");
  }
};

/// Uniform grid t_i = i * t_max / n_samples, i in [0, n_samples).
inline std::vector<double> uniform_times(double t_max, int n_samples) {
  require(n_samples >= 2 && t_max > 0.0, "uniform_times: need n_samples >= 2 and t_max > 0");
  std::vector<double> t(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) t[static_cast<std::size_t>(i)] = i * t_max / n_samples;
  return t;
}

/// <x(t)> under exact evolution exp(-i omega t H); checks norm at every sample.
inline TimeSeries position_trace(const SpectralDecomposition& sd, double omega, const LatticeSpec& spec,
                                 const ComplexVector& psi0, double t_max, int n_samples) {
  TimeSeries series;
  series.times = uniform_times(t_max, n_samples);
  for (double t : series.times) {
    const ComplexVector psi = sd.evolve(psi0, omega * t);
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > tol::trace_norm) {
      std::ostringstream msg;
      msg << "position_trace: norm drifted by " << drift << " at t = " << t;
      throw PreconditionError(msg.str());
    }
    series.values.push_back(position_expectation(psi, spec));
  }
  return series;
}

inline TimeSeries position_trace(const FieldModel& model, const LatticeSpec& spec, const ComplexVector& psi0,
                                 double t_max, int n_samples) {
  const LatticeHamiltonian h = build_hamiltonian(model, spec);
  return position_trace(SpectralDecomposition(h.matrix), h.omega, spec, psi0, t_max, n_samples);
}

/// Weight of a state on the positive- and negative-energy eigenspaces.
inline std::pair<double, double> branch_weights(const SpectralDecomposition& sd, const ComplexVector& psi) {
  const ComplexVector c = sd.vectors().adjoint() * psi;
  double pos = 0.0, neg = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) (sd.energies()[i] >= 0.0 ? pos : neg) += std::norm(c[i]);
  return {pos, neg};
}

/// Smallest branch weight below which a packet counts as a pure branch.
inline constexpr double kPureBranchWeight = 1e-6;

/// <x(t)> of a Dirac packet under build_dirac; the packet must mix both
/// energy branches (no interference, no Zitterbewegung otherwise).
inline TimeSeries zitterbewegung_trace(const LatticeSpec& spec, double mass_ratio, const WavePacket& packet,
                                       double t_max, int n_samples) {
  const FieldModel model = FieldModel::dirac(mass_ratio);
  const LatticeHamiltonian h = build_dirac(spec, mass_ratio);
  const SpectralDecomposition sd(h.matrix);
  const ComplexVector psi0 = gaussian_packet(spec, model, packet);
  const auto [pos, neg] = branch_weights(sd, psi0);
  if (std::min(pos, neg) < kPureBranchWeight) {
    std::ostringstream msg;
    msg << "zitterbewegung_trace: packet lies on a single energy branch (weights " << pos << ", " << neg
        << "); without positive/negative energy interference there is no Zitterbewegung";
    throw PreconditionError(msg.str());
  }
  return position_trace(sd, h.omega, spec, psi0, t_max, n_samples);
}

/// Least-squares line (slope, intercept) through the series.
inline std::pair<double, double> fit_line(const TimeSeries& s) {
  const double n = static_cast<double>(s.values.size());
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    st += s.times[i];
    sv += s.values[i];
    stt += s.times[i] * s.times[i];
    stv += s.times[i] * s.values[i];
  }
  const double slope = (n * stv - st * sv) / (n * stt - st * st);
  return {slope, (sv - slope * st) / n};
}

/// Values with the least-squares line removed.
inline std::vector<double> detrend(const TimeSeries& s) {
  const auto [slope, icpt] = fit_line(s);
  std::vector<double> out(s.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.values[i] - (icpt + slope * s.times[i]);
  return out;
}

/// Mean velocity d<x>/dt from the least-squares line.
inline double linear_drift(const TimeSeries& s) {
  s.validate();
  return fit_line(s).first;
}

struct FrequencyEstimate {
  bool oscillating = false;
  double omega = 0.0;        // angular frequency of the dominant non-DC peak
  double resolution = 0.0;   // one DFT bin, 2 pi / (n dt)
  double amplitude = 0.0;    // semi-amplitude implied by the peak bin
};

/// Peak below this semi-amplitude (in value units) counts as no oscillation.
inline constexpr double kOscillationFloor = 1e-8;

/// Dominant angular frequency: linear detrend, rectangular-window DFT,
/// largest non-DC bin refined by quadratic interpolation.
inline FrequencyEstimate dominant_frequency(const TimeSeries& series) {
  series.validate();
  require(series.values.size() >= 64, "dominant_frequency: need at least 64 samples");
  const std::vector<double> x = detrend(series);
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, x);

  FrequencyEstimate est;
  est.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * series.dt());
  std::size_t peak = 1;
  for (std::size_t k = 1; k <= n / 2; ++k)
    if (std::abs(spectrum[k]) > std::abs(spectrum[peak])) peak = k;
  est.amplitude = 2.0 * std::abs(spectrum[peak]) / static_cast<double>(n);

  std::vector<double> mags;
  for (std::size_t k = 1; k <= n / 2; ++k) mags.push_back(std::abs(spectrum[k]));
  std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mags.size() / 2), mags.end());
  const double median = mags[mags.size() / 2];
  if (est.amplitude < kOscillationFloor || std::abs(spectrum[peak]) < 4.0 * median) return est;

  double delta = 0.0;
  if (peak > 1 && peak + 1 <= n / 2) {
    const double a = std::abs(spectrum[peak - 1]), b = std::abs(spectrum[peak]), c = std::abs(spectrum[peak + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  est.oscillating = true;
  est.omega = est.resolution * (static_cast<double>(peak) + delta);
  return est;
}

struct OscillationAmplitude {
  double excursion = 0.0;       // peak-to-peak of the detrended series
  double semi_amplitude = 0.0;  // half of it
};

inline OscillationAmplitude oscillation_amplitude(const TimeSeries& series) {
  series.validate();
  const auto x = detrend(series);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {*hi - *lo, 0.5 * (*hi - *lo)};
}

/// Largest |d<x>/dt| over consecutive samples.
inline double max_speed(const TimeSeries& series) {
  series.validate();
  double v = 0.0;
  for (std::size_t i = 1; i < series.values.size(); ++i)
    v = std::max(v, std::abs(series.values[i] - series.values[i - 1]) / (series.times[i] - series.times[i - 1]));
  return v;
}

/// Gap of the k = 0 block of build_dirac, E+ - E-, by diagonalization.
inline double dirac_zero_momentum_gap(double mass_ratio, int n_sites = 16) {
  const auto points = dispersion(FieldModel::dirac(mass_ratio), LatticeSpec::periodic(n_sites));
  for (const auto& p : points)
    if (p.k == 0.0) return p.diagonalized.back() - p.diagonalized.front();
  throw PreconditionError("dirac_zero_momentum_gap: k = 0 not on the grid");
}

/// Single-site excitation in component `component` of `site`.
inline ComplexVector site_excitation(const LatticeSpec& spec, const FieldModel& model, int site, int component = 0) {
  const int d = model.components_per_site();
  require(site >= 0 && site < spec.n_sites, "site_excitation: site out of range");
  require(component >= 0 && component < d, "site_excitation: component out of range");
  return ComplexVector::Unit(spec.n_sites * d, site * d + component);
}

/// Probability outside the sites [source - radius, source + radius].
inline double probability_outside(const ComplexVector& state, const LatticeSpec& spec, int source, int radius) {
  require(radius >= 0, "lightcone_leakage: radius must be >= 0");
  if (source - radius < 0 || source + radius >= spec.n_sites) {
    std::ostringstream msg;
    msg << "lightcone_leakage: interval [" << source - radius << ", " << source + radius << "] exceeds the lattice";
    throw PreconditionError(msg.str());
  }
  const auto p = site_probabilities(state, spec.n_sites);
  double out = 0.0;
  for (int n = 0; n < spec.n_sites; ++n)
    if (n < source - radius || n > source + radius) out += p[static_cast<std::size_t>(n)];
  return out;
}

/// Leakage after the first n_layers layers of a brick-wall circuit; the cone radius is n_layers.
inline double lightcone_leakage(const BrickWallCircuit& circuit, int source, std::size_t n_layers, int component = 0) {
  const LatticeSpec& spec = circuit.spec();
  const int radius = static_cast<int>(n_layers);
  require(source - radius >= 0 && source + radius < spec.n_sites,
          "lightcone_leakage: cone interval exceeds the lattice");
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(circuit.dimension()));
  psi[source * circuit.components_per_site() + component] = 1.0;
  return probability_outside(apply_layers(circuit, psi, n_layers), spec, source, radius);
}

/// Leakage under exact evolution to time t; default radius ceil(t / tau).
inline double lightcone_leakage(const FieldModel& model, const LatticeSpec& spec, int source, double t,
                                std::optional<int> radius = {}, int component = 0) {
  const int r = radius.value_or(static_cast<int>(std::ceil(t / spec.time_grain)));
  require(source - r >= 0 && source + r < spec.n_sites, "lightcone_leakage: cone interval exceeds the lattice");
  const LatticeHamiltonian h = build_hamiltonian(model, spec);
  const ComplexVector psi = expm_unitary(h.matrix, h.omega * t).apply(site_excitation(spec, model, source, component));
  return probability_outside(psi, spec, source, r);
}

}  // namespace qcft
