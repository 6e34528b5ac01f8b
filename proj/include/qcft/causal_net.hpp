#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcft/field_models.hpp"
#include "qcft/numerics.hpp"

namespace qcft {

/// Gate event at layer `layer` acting on sites (left_site, left_site + 1).
/// Layer parity fixes the pair parity: left_site == layer (mod 2).
struct Event {
  int layer;
  int left_site;
};

/// System line of one site between layer gap-1 and layer gap (gap in [0, L]).
/// tail/head are the nearest real events on the site before/after the gap.
struct Wire {
  int site;
  int gap;
  std::optional<int> tail;
  std::optional<int> head;
};

/// Brick-wall DAG of a circuit of width W and depth L.
class CausalNetwork {
 public:
  CausalNetwork(int width, int depth, Boundary boundary) : width_(width), depth_(depth), boundary_(boundary) {
    require(width >= 4 && width % 2 == 0, "build_network: width must be even and >= 4");
    require(depth >= 2, "build_network: depth must be >= 2");
    index_.assign(static_cast<std::size_t>(width * depth), -1);
    for (int l = 0; l < depth; ++l)
      for (int x = l % 2; x < width; x += 2) {
        if (boundary == Boundary::open && x + 1 >= width) continue;
        index_[slot(l, x)] = static_cast<int>(events_.size());
        events_.push_back({l, x});
      }
    successors_.resize(events_.size());
    predecessors_.resize(events_.size());
    for (std::size_t e = 0; e < events_.size(); ++e) {
      const Event ev = events_[e];
      for (int dx : {-1, +1})
        if (auto s = event_at(ev.layer + 1, ev.left_site + dx)) {
          successors_[e].push_back(*s);
          predecessors_[static_cast<std::size_t>(*s)].push_back(static_cast<int>(e));
        }
    }
    for (int s = 0; s < width; ++s)
      for (int g = 0; g <= depth; ++g) {
        Wire w{s, g, {}, {}};
        for (int l = g - 1; l >= 0 && !w.tail; --l) w.tail = event_touching(l, s);
        for (int l = g; l < depth && !w.head; ++l) w.head = event_touching(l, s);
        wires_.push_back(w);
      }
  }

  int width() const { return width_; }
  int depth() const { return depth_; }
  Boundary boundary() const { return boundary_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<Wire>& wires() const { return wires_; }
  const std::vector<int>& successors(int e) const { return successors_[static_cast<std::size_t>(e)]; }
  const std::vector<int>& predecessors(int e) const { return predecessors_[static_cast<std::size_t>(e)]; }

  /// Index of the wire of `site` at `gap`.
  int wire_index(int site, int gap) const { return site * (depth_ + 1) + gap; }

  /// Event whose pair starts at left_site on layer l, if present.
  std::optional<int> event_at(int l, int left_site) const {
    if (l < 0 || l >= depth_) return std::nullopt;
    if (boundary_ == Boundary::periodic) left_site = ((left_site % width_) + width_) % width_;
    if (left_site < 0 || left_site >= width_) return std::nullopt;
    const int id = index_[slot(l, left_site)];
    return id < 0 ? std::nullopt : std::optional<int>(id);
  }

  /// Left site of the (possibly boundary-clipped) pair touching `site` at layer l.
  static int pair_left_of(int l, int site) { return ((site - l) % 2 == 0) ? site : site - 1; }

  /// Event touching `site` at layer l, if present.
  std::optional<int> event_touching(int l, int site) const { return event_at(l, pair_left_of(l, site)); }

 private:
  std::size_t slot(int l, int x) const { return static_cast<std::size_t>(l * width_ + x); }

  int width_;
  int depth_;
  Boundary boundary_;
  std::vector<Event> events_;
  std::vector<int> index_;
  std::vector<std::vector<int>> successors_;
  std::vector<std::vector<int>> predecessors_;
  std::vector<Wire> wires_;
};

inline CausalNetwork build_network(int width, int depth, Boundary boundary = Boundary::open) {
  return CausalNetwork(width, depth, boundary);
}

/// Transitive closure of the event DAG as bitsets (strict reachability).
class Reachability {
 public:
  explicit Reachability(const CausalNetwork& net) : n_(net.events().size()), words_((n_ + 63) / 64) {
    bits_.assign(n_ * words_, 0);
    // Events are stored layer by layer, so reverse order is a reverse topological order.
    for (std::size_t e = n_; e-- > 0;)
      for (int s : net.successors(static_cast<int>(e))) {
        set(e, static_cast<std::size_t>(s));
        for (std::size_t w = 0; w < words_; ++w) bits_[e * words_ + w] |= bits_[static_cast<std::size_t>(s) * words_ + w];
      }
  }

  /// True when a directed path of length >= 1 leads from a to b.
  bool reaches(int a, int b) const {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    return (bits_[ua * words_ + ub / 64] >> (ub % 64)) & 1u;
  }

 private:
  void set(std::size_t a, std::size_t b) { bits_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64); }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// w1 precedes w2 when a directed path runs from w1 into w2: same site at a
/// later gap, or head(w1) equals or reaches tail(w2).
inline bool wire_precedes(const CausalNetwork& net, const Reachability& reach, int w1, int w2) {
  const Wire& a = net.wires()[static_cast<std::size_t>(w1)];
  const Wire& b = net.wires()[static_cast<std::size_t>(w2)];
  if (a.site == b.site) return a.gap < b.gap;
  if (!a.head || !b.tail) return false;
  return *a.head == *b.tail || reach.reaches(*a.head, *b.tail);
}

/// No directed path connects two wires of the set.
inline bool is_antichain(const CausalNetwork& net, const Reachability& reach, const std::vector<int>& wires) {
  for (std::size_t i = 0; i < wires.size(); ++i)
    for (std::size_t j = 0; j < wires.size(); ++j)
      if (i != j && wire_precedes(net, reach, wires[i], wires[j])) return false;
  return true;
}

/// Doubled boosted time 2 t' = 2 q l - p (2X + 1) of the pair (X, X+1) at layer l.
inline long boosted_time2(int layer, int left_site, int p, int q) {
  return 2L * q * layer - static_cast<long>(p) * (2L * left_site + 1);
}

/// Slicing by the level sets of t' = q l - p x at uniform proper spacing
/// sqrt(q^2 - p^2): cut k sits at 2 t' = theta_k = 2 r k - q, and slice k
/// holds the wires crossing that cut.
struct Foliation {
  int p = 0;
  int q = 1;
  double r = 1.0;
  int first_cut = 0;
  std::vector<double> thetas;
  std::vector<std::vector<int>> slices;  // wire indices, ascending site
  std::vector<int> coverage;             // slices containing each wire
};

/// Doubled boosted time of the position (site, layer) on the network,
/// -inf/+inf beyond the first/last layer.
inline double position_time2(int layer, int site, int depth, int p, int q) {
  if (layer < 0) return -std::numeric_limits<double>::infinity();
  if (layer >= depth) return std::numeric_limits<double>::infinity();
  return static_cast<double>(boosted_time2(layer, CausalNetwork::pair_left_of(layer, site), p, q));
}

inline void validate_velocity(int p, int q) {
  require(q >= 1, "boosted_foliation: q must be >= 1");
  require(std::abs(p) < q, "boosted_foliation: |p| >= q is superluminal (causal-speed bound a/tau)");
  require(std::gcd(std::abs(p), q) == 1, "boosted_foliation: p/q must be in lowest terms");
}

inline Foliation boosted_foliation(const CausalNetwork& net, int p, int q) {
  validate_velocity(p, q);
  require(p == 0 || net.boundary() == Boundary::open,
          "boosted_foliation: tilted slices need an open-boundary network");
  Foliation f;
  f.p = p;
  f.q = q;
  f.r = std::sqrt(static_cast<double>(q) * q - static_cast<double>(p) * p);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int s = 0; s < net.width(); ++s) {
    lo = std::min(lo, position_time2(0, s, net.depth(), p, q));
    hi = std::max(hi, position_time2(net.depth() - 1, s, net.depth(), p, q));
  }
  auto theta = [&](int k) { return 2.0 * f.r * k - q; };
  int k_lo = static_cast<int>(std::floor((lo + q) / (2.0 * f.r)));
  while (theta(k_lo) > lo) --k_lo;
  while (theta(k_lo + 1) <= lo) ++k_lo;
  int k_hi = k_lo;
  while (theta(k_hi) <= hi) ++k_hi;
  require(k_hi - k_lo + 1 >= 2 * q, "boosted_foliation: network too small, fewer than 2q slices fit");

  f.first_cut = k_lo;
  f.coverage.assign(net.wires().size(), 0);
  for (int k = k_lo; k <= k_hi; ++k) {
    const double th = theta(k);
    std::vector<int> slice;
    for (int s = 0; s < net.width(); ++s)
      for (int g = 0; g <= net.depth(); ++g) {
        const double tail = position_time2(g - 1, s, net.depth(), p, q);
        const double head = position_time2(g, s, net.depth(), p, q);
        if (tail < th && th <= head) {
          const int w = net.wire_index(s, g);
          slice.push_back(w);
          ++f.coverage[static_cast<std::size_t>(w)];
        }
      }
    f.thetas.push_back(th);
    f.slices.push_back(std::move(slice));
  }
  return f;
}

/// Slope in (site, layer) coordinates of the level sets: dl/dx = p/q.
inline double slice_slope(const Foliation& f) { return static_cast<double>(f.p) / f.q; }

struct LightlikePath {
  std::vector<int> sites;                 // position per layer, starting at start_layer
  std::vector<std::optional<int>> events; // gate touching the position (absent at clipped edges)
  int start_layer = 0;
  bool exited = false;
};

/// Maximal-speed chain: one site per layer in `direction`; optionally
/// reflects once on `reflect_site`. Truncated with an exit flag on leaving the net.
inline LightlikePath lightlike_path(const CausalNetwork& net, int start_site, int direction,
                                    std::optional<int> reflect_site = {}, int start_layer = 0,
                                    std::optional<int> max_layers = {}) {
  require(direction == 1 || direction == -1, "lightlike_path: direction must be +1 or -1");
  require(start_site >= 0 && start_site < net.width() && start_layer >= 0 && start_layer < net.depth(),
          "lightlike_path: start outside the network");
  LightlikePath path;
  path.start_layer = start_layer;
  int x = start_site;
  bool reflected = false;
  const int limit = max_layers.value_or(net.depth() - start_layer);
  for (int l = start_layer; l < start_layer + limit; ++l) {
    if (l >= net.depth() || x < 0 || x >= net.width()) {
      path.exited = true;
      break;
    }
    path.sites.push_back(x);
    path.events.push_back(net.event_touching(l, x));
    if (reflect_site && !reflected && x == *reflect_site) {
      direction = -direction;
      reflected = true;
    }
    x += direction;
  }
  return path;
}

/// Lorentz map on doubled-free integer coordinates: returns
/// (q T - p X, q X - p T) = r (T', X'). Applying it with p then -p yields
/// (q^2 - p^2) (T, X).
inline std::pair<long, long> boost_scaled(long t, long x, int p, int q) { return {q * t - p * x, q * x - p * t}; }

struct TicTacResult {
  int separation = 0;          // proper mirror separation D
  int lab_separation = 0;      // in network sites
  int period_layers = 0;       // layers between successive arrivals at mirror A
  int tic_layers = 0;          // A -> B leg
  int tac_layers = 0;          // B -> A leg
  int events_on_mirror = 0;    // gate events touching mirror A during one period
  int period_in_slices = 0;    // foliation cuts crossed by mirror A during one period
  std::vector<int> pulse_sites;  // pulse position per layer over the period (inclusive)
};

/// Mirror A worldline: static at rest, integer staircase x = a0 + floor(p l / q) when boosted.
inline int mirror_position(int a0, int layer, int p, int q) {
  const long num = static_cast<long>(p) * layer;
  const long fl = num >= 0 ? num / q : -((-num + q - 1) / q);
  return a0 + static_cast<int>(fl);
}

/// Lab-frame separation of comoving mirrors whose proper separation is D.
inline int lab_separation(int separation, int p, int q) {
  const double r = std::sqrt(static_cast<double>(q) * q - static_cast<double>(p) * p);
  return static_cast<int>(std::lround(separation * r / q));
}

/// Pulse geometry of one complete tic-tac, independent of any network.
inline TicTacResult tictac_trace(int separation, int p, int q, int a0) {
  validate_velocity(p, q);
  require(separation >= 1, "tictac: mirror separation must be >= 1");
  TicTacResult r;
  r.separation = separation;
  r.lab_separation = lab_separation(separation, p, q);
  require(r.lab_separation >= 1, "tictac: mirrors coincide in the lab frame");
  int x = mirror_position(a0, 0, p, q);
  int dir = +1;
  r.pulse_sites.push_back(x);
  for (int l = 1;; ++l) {
    x += dir;
    const int xa = mirror_position(a0, l, p, q);
    const int xb = xa + r.lab_separation;
    if (dir > 0 && x >= xb) {
      x = xb;
      dir = -1;
      r.tic_layers = l;
    } else if (dir < 0 && x <= xa) {
      x = xa;
      r.pulse_sites.push_back(x);
      r.period_layers = l;
      r.tac_layers = l - r.tic_layers;
      break;
    }
    r.pulse_sites.push_back(x);
  }
  return r;
}

/// Counts one complete tic-tac on the network: gate events on mirror A and
/// foliation cuts crossed by mirror A between two successive arrivals.
inline TicTacResult tictac_count(const CausalNetwork& net, const Foliation& f, int separation,
                                 std::optional<int> mirror_start = {}) {
  validate_velocity(f.p, f.q);
  int a0 = mirror_start.value_or(0);
  if (!mirror_start && f.p < 0) a0 = -mirror_position(0, net.depth() - 1, f.p, f.q);
  TicTacResult r = tictac_trace(separation, f.p, f.q, a0);
  if (r.period_layers + 1 > net.depth()) {
    std::ostringstream msg;
    msg << "tictac_count: network too small, need depth >= " << r.period_layers + 1;
    throw PreconditionError(msg.str());
  }
  for (int l = 0; l <= r.period_layers; ++l) {
    const int xa = mirror_position(a0, l, f.p, f.q);
    if (xa < 0 || xa + r.lab_separation >= net.width()) {
      std::ostringstream msg;
      msg << "tictac_count: network too narrow, mirror B leaves the net at layer " << l;
      throw PreconditionError(msg.str());
    }
  }
  for (int l = 0; l < r.period_layers; ++l)
    if (net.event_touching(l, mirror_position(a0, l, f.p, f.q))) ++r.events_on_mirror;
  const double t_start = position_time2(0, mirror_position(a0, 0, f.p, f.q), net.depth(), f.p, f.q);
  const double t_end =
      position_time2(r.period_layers, mirror_position(a0, r.period_layers, f.p, f.q), net.depth(), f.p, f.q);
  for (double th : f.thetas)
    if (t_start < th && th <= t_end) ++r.period_in_slices;
  return r;
}

/// Dilation estimate boosted_count / rest_count.
inline double gamma_estimate(int rest_count, int boosted_count) {
  require(rest_count > 0, "gamma_estimate: rest count must be positive");
  return static_cast<double>(boosted_count) / rest_count;
}

inline double analytic_gamma(int p, int q) {
  return q / std::sqrt(static_cast<double>(q) * q - static_cast<double>(p) * p);
}

struct DensityProfile {
  std::vector<int> counts;     // events with theta_k <= 2t' < theta_{k+1}
  std::vector<bool> complete;  // slab lies inside the network at every site
  double mean = 0.0;           // over complete slabs
};

/// Events per slab between consecutive cuts of the foliation.
inline DensityProfile density_profile(const CausalNetwork& net, const Foliation& f) {
  DensityProfile d;
  const std::size_t n = f.thetas.size();
  if (n < 2) return d;
  d.counts.assign(n - 1, 0);
  for (const Event& e : net.events()) {
    const double t = static_cast<double>(boosted_time2(e.layer, e.left_site, f.p, f.q));
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (f.thetas[k] <= t && t < f.thetas[k + 1]) {
        ++d.counts[k];
        break;
      }
  }
  double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
  for (int s = 0; s < net.width(); ++s) {
    lo = std::max(lo, position_time2(0, s, net.depth(), f.p, f.q));
    hi = std::min(hi, position_time2(net.depth() - 1, s, net.depth(), f.p, f.q));
  }
  int complete = 0;
  long total = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const bool ok = lo < f.thetas[k] && f.thetas[k + 1] <= hi;
    d.complete.push_back(ok);
    if (ok) {
      ++complete;
      total += d.counts[k];
    }
  }
  d.mean = complete > 0 ? static_cast<double>(total) / complete : 0.0;
  return d;
}

/// Plain-text dump of the DAG and a foliation for plotting.
inline void write_network_dump(std::ostream& out, const CausalNetwork& net, const Foliation& f) {
  out << "network " << net.width() << ' ' << net.depth() << ' ' << to_string(net.boundary()) << '\n';
  for (std::size_t e = 0; e < net.events().size(); ++e)
    out << "event " << e << ' ' << net.events()[e].layer << ' ' << net.events()[e].left_site << '\n';
  for (std::size_t e = 0; e < net.events().size(); ++e)
    for (int s : net.successors(static_cast<int>(e))) out << "edge " << e << ' ' << s << '\n';
  for (std::size_t w = 0; w < net.wires().size(); ++w) {
    const Wire& wire = net.wires()[w];
    out << "wire " << w << ' ' << wire.site << ' ' << wire.gap << ' ' << (wire.tail ? std::to_string(*wire.tail) : "-")
        << ' ' << (wire.head ? std::to_string(*wire.head) : "-") << '\n';
  }
  out << "foliation " << f.p << ' ' << f.q << '\n';
  for (std::size_t k = 0; k < f.slices.size(); ++k) {
    out << "slice " << f.first_cut + static_cast<int>(k);
    for (int w : f.slices[k]) out << ' ' << w;
    out << '\n';
  }
}

}  // namespace qcft
