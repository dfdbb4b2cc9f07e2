#include "asep/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "asep/rng.hpp"
#include "asep/signed_perm.hpp"

namespace asep {

namespace {

// Priority key: smaller key = higher priority (particle before hole).
inline int key_of(SimMode mode, int v) { return mode == SimMode::single || mode == SimMode::halfspace ? 1 - v : v; }

inline bool can_enter(SimMode mode, int v) {
  switch (mode) {
    case SimMode::multispecies: return v == 3 || v == 4;
    case SimMode::colored: return v > 0;
    default: return v == 0;
  }
}

inline int entered(SimMode mode, int v) {
  switch (mode) {
    case SimMode::multispecies: return v == 4 ? 1 : 2;
    case SimMode::colored: return -v;
    default: return 1;
  }
}

inline bool can_exit(SimMode mode, int v) {
  switch (mode) {
    case SimMode::multispecies: return v == 1 || v == 2;
    case SimMode::colored: return v < 0;
    default: return v == 1;
  }
}

inline int exited(SimMode mode, int v) {
  switch (mode) {
    case SimMode::multispecies: return v == 1 ? 4 : 3;
    case SimMode::colored: return -v;
    default: return 0;
  }
}

// In-place ring; returns +1 for an entry, -1 for an exit, 0 otherwise.
int apply_event(SimMode mode, std::vector<int>& s, const Event& ev, double q, double r) {
  switch (ev.channel) {
    case Channel::edge_fwd:
    case Channel::edge_bwd:
    case Channel::edge_hecke: {
      int& a = s[static_cast<std::size_t>(ev.edge - 1)];
      int& b = s[static_cast<std::size_t>(ev.edge)];
      const int ka = key_of(mode, a);
      const int kb = key_of(mode, b);
      bool swap = false;
      if (ev.channel == Channel::edge_fwd) swap = ka < kb;
      else if (ev.channel == Channel::edge_bwd) swap = ka > kb;
      else swap = ka < kb || (ka > kb && ev.u < q);
      if (swap) std::swap(a, b);
      return 0;
    }
    case Channel::enter:
      if (can_enter(mode, s[0])) {
        s[0] = entered(mode, s[0]);
        return 1;
      }
      return 0;
    case Channel::exit:
      if (can_exit(mode, s[0])) {
        s[0] = exited(mode, s[0]);
        return -1;
      }
      return 0;
    case Channel::boundary_hecke:
      if (can_enter(mode, s[0])) {
        s[0] = entered(mode, s[0]);
        return 1;
      }
      if (can_exit(mode, s[0]) && ev.u < r) {
        s[0] = exited(mode, s[0]);
        return -1;
      }
      return 0;
  }
  return 0;
}

void validate_sites(SimMode mode, const std::vector<int>& s) {
  if (s.empty()) throw std::invalid_argument("initial state has no sites");
  switch (mode) {
    case SimMode::single:
    case SimMode::halfspace:
      for (int v : s) {
        if (v != 0 && v != 1) throw std::invalid_argument("single-species sites must be 0 or 1");
      }
      break;
    case SimMode::multispecies:
      for (int v : s) {
        if (v < 1 || v > 4) throw std::invalid_argument("multispecies labels must be 1, 2, 3 or 4");
      }
      break;
    case SimMode::colored:
      (void)SignedPermutation::from_word(s);
      break;
  }
}

int rightmost_vacant(SimMode mode, const std::vector<int>& s) {
  if (mode == SimMode::halfspace) return -1;
  for (int x = static_cast<int>(s.size()); x >= 1; --x) {
    if (!can_exit(mode, s[static_cast<std::size_t>(x - 1)])) return x;
  }
  return 0;
}

Sample make_sample(SimMode mode, double time, const std::vector<int>& s, long net, bool record) {
  Sample out;
  out.time = time;
  out.particles = particle_count(mode, s);
  out.rightmost_empty = rightmost_vacant(mode, s);
  out.net_current = net;
  if (record) out.state = s;
  return out;
}

void check_spec(const SimSpec& spec) {
  validate(spec.params);
  if (!(spec.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  double prev = 0.0;
  for (double t : spec.sample_times) {
    if (t < prev || t > spec.t_end) {
      throw std::invalid_argument("sample times must be nondecreasing and inside [0, t_end]");
    }
    prev = t;
  }
}

// Uniformized engine for the segment modes. Stops at t_end or at the first
// post-event state accepted by `predicate`.
Trajectory run_segment(const SimSpec& spec, StreamRng& rng, const StatePredicate* predicate,
                       std::optional<double>* hit) {
  check_spec(spec);
  const SimMode mode = spec.mode;
  std::vector<int> s = initial_sites(spec);
  const int M = static_cast<int>(s.size());
  const double q = spec.params.q;
  const double alpha = spec.params.alpha;
  const double gamma = spec.params.gamma;
  const double r = spec.params.r();
  const bool hecke = spec.description == ClockDescription::hecke;
  const double edges = M - 1;
  const double total = hecke ? edges + alpha : edges * (1.0 + q) + alpha + gamma;

  Trajectory traj;
  traj.t_end = spec.t_end;
  traj.window = M;
  long net = 0;
  std::size_t next_sample = 0;
  double t = 0.0;

  if (predicate != nullptr && (*predicate)(s)) {
    *hit = 0.0;
    traj.terminal = s;
    return traj;
  }

  while (true) {
    const double t_next = t + rng.exponential(total);
    while (next_sample < spec.sample_times.size() && spec.sample_times[next_sample] < t_next) {
      traj.samples.push_back(make_sample(mode, spec.sample_times[next_sample], s, net, spec.record_states));
      ++next_sample;
    }
    if (t_next > spec.t_end) break;
    t = t_next;

    Event ev;
    ev.time = t;
    double v = rng.uniform() * total;
    if (hecke) {
      ev.u = rng.uniform();
      if (v < edges) {
        ev.channel = Channel::edge_hecke;
        ev.edge = std::min(M - 1, static_cast<int>(v) + 1);
      } else {
        ev.channel = Channel::boundary_hecke;
      }
    } else if (v < edges) {
      ev.channel = Channel::edge_fwd;
      ev.edge = std::min(M - 1, static_cast<int>(v) + 1);
    } else if ((v -= edges) < edges * q) {
      ev.channel = Channel::edge_bwd;
      ev.edge = std::min(M - 1, static_cast<int>(v / q) + 1);
    } else if ((v -= edges * q) < alpha) {
      ev.channel = Channel::enter;
    } else {
      ev.channel = Channel::exit;
    }
    const int flow = apply_event(mode, s, ev, q, r);
    net += flow;
    traj.entries += flow > 0;
    traj.exits += flow < 0;
    ++traj.events;
    if (predicate != nullptr && (*predicate)(s)) {
      *hit = t;
      break;
    }
  }
  traj.terminal = std::move(s);
  return traj;
}

// Membership set over edge indices with O(1) insert / erase / random access.
class EdgeSet {
 public:
  void resize(std::size_t n) { pos_.resize(n, -1); }
  bool contains(int e) const { return pos_[static_cast<std::size_t>(e)] >= 0; }
  void insert(int e) {
    if (contains(e)) return;
    pos_[static_cast<std::size_t>(e)] = static_cast<int>(items_.size());
    items_.push_back(e);
  }
  void erase(int e) {
    const int p = pos_[static_cast<std::size_t>(e)];
    if (p < 0) return;
    const int last = items_.back();
    items_[static_cast<std::size_t>(p)] = last;
    pos_[static_cast<std::size_t>(last)] = p;
    items_.pop_back();
    pos_[static_cast<std::size_t>(e)] = -1;
  }
  std::size_t size() const { return items_.size(); }
  int operator[](std::size_t i) const { return items_[i]; }

 private:
  std::vector<int> items_;
  std::vector<int> pos_;
};

}  // namespace

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::single: return "single";
    case SimMode::multispecies: return "multispecies";
    case SimMode::colored: return "colored";
    case SimMode::halfspace: return "halfspace";
  }
  return "?";
}

SimMode parse_sim_mode(const std::string& text) {
  if (text == "single") return SimMode::single;
  if (text == "multispecies") return SimMode::multispecies;
  if (text == "colored") return SimMode::colored;
  if (text == "halfspace") return SimMode::halfspace;
  throw std::invalid_argument("unknown simulation mode '" + text + "'");
}

SimState step(const SimState& state, const Event& event, const ModelParams& params) {
  SimState out = state;
  const int M = static_cast<int>(out.sites.size());
  const bool edge = event.channel == Channel::edge_fwd || event.channel == Channel::edge_bwd ||
                    event.channel == Channel::edge_hecke;
  if (M == 0) throw std::invalid_argument("state has no sites");
  if (edge && (event.edge < 1 || event.edge > M - 1)) throw std::out_of_range("edge index outside the segment");
  apply_event(state.mode, out.sites, event, params.q, params.r());
  return out;
}

int particle_count(SimMode mode, const std::vector<int>& sites) {
  int n = 0;
  for (int v : sites) n += can_exit(mode, v);
  return n;
}

std::vector<int> initial_sites(const SimSpec& spec) {
  std::vector<int> s = spec.initial;
  if (s.empty()) {
    const auto N = static_cast<std::size_t>(spec.params.N);
    switch (spec.mode) {
      case SimMode::multispecies: s.assign(N, 4); break;
      case SimMode::colored:
        s.resize(N);
        for (std::size_t i = 0; i < N; ++i) s[i] = static_cast<int>(i) + 1;
        break;
      default: s.assign(N, 0); break;
    }
  }
  validate_sites(spec.mode, s);
  return s;
}

Trajectory simulate(const SimSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  if (spec.mode == SimMode::halfspace) return simulate_halfspace(spec, seed, stream);
  StreamRng rng(seed, stream);
  return run_segment(spec, rng, nullptr, nullptr);
}

std::optional<double> hitting_time(const SimSpec& spec, const StatePredicate& predicate, std::uint64_t seed,
                                   std::uint64_t stream) {
  if (spec.mode == SimMode::halfspace) throw std::invalid_argument("hitting_time supports segment modes only");
  StreamRng rng(seed, stream);
  std::optional<double> hit;
  run_segment(spec, rng, &predicate, &hit);
  return hit;
}

Trajectory simulate_halfspace(const SimSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  check_spec(spec);
  if (spec.description != ClockDescription::independent) {
    throw std::invalid_argument("half-line simulation uses the independent clock description");
  }
  SimSpec single = spec;
  single.mode = SimMode::single;
  const std::vector<int> init = initial_sites(single);

  int rightmost = 0;
  for (int x = static_cast<int>(init.size()); x >= 1; --x) {
    if (init[static_cast<std::size_t>(x - 1)] == 1) {
      rightmost = x;
      break;
    }
  }
  int W = std::max(16, rightmost + 8);
  if (W > spec.window_cap) throw std::length_error("half-line window exceeds the configured cap");

  // sites 1-based, index 0 unused
  std::vector<std::uint8_t> s(static_cast<std::size_t>(W) + 1, 0);
  for (int x = 1; x <= rightmost; ++x) s[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(init[static_cast<std::size_t>(x - 1)]);
  EdgeSet fwd;
  EdgeSet bwd;
  fwd.resize(static_cast<std::size_t>(W) + 1);
  bwd.resize(static_cast<std::size_t>(W) + 1);
  auto refresh = [&](int e) {
    if (e < 1 || e > W - 1) return;
    const auto a = s[static_cast<std::size_t>(e)];
    const auto b = s[static_cast<std::size_t>(e) + 1];
    if (a == 1 && b == 0) fwd.insert(e); else fwd.erase(e);
    if (a == 0 && b == 1) bwd.insert(e); else bwd.erase(e);
  };
  for (int e = 1; e < W; ++e) refresh(e);
  auto grow = [&]() {
    while (rightmost >= W - 1) {
      const int next = 2 * W;
      if (next > spec.window_cap) throw std::length_error("half-line window exceeds the configured cap");
      s.resize(static_cast<std::size_t>(next) + 1, 0);
      fwd.resize(static_cast<std::size_t>(next) + 1);
      bwd.resize(static_cast<std::size_t>(next) + 1);
      const int old = W;
      W = next;
      refresh(old - 1);
    }
  };
  grow();

  const double q = spec.params.q;
  const double alpha = spec.params.alpha;
  const double gamma = spec.params.gamma;
  StreamRng rng(seed, stream);
  Trajectory traj;
  traj.t_end = spec.t_end;
  long particles = std::count(init.begin(), init.end(), 1);
  const long initial_particles = particles;
  std::size_t next_sample = 0;
  double t = 0.0;

  auto snapshot = [&](double time) {
    Sample smp;
    smp.time = time;
    smp.particles = static_cast<int>(particles);
    smp.rightmost_empty = -1;
    smp.net_current = particles - initial_particles;
    if (spec.record_states) {
      smp.state.assign(s.begin() + 1, s.begin() + 1 + std::max(rightmost, 1));
    }
    return smp;
  };

  while (true) {
    const double boundary = s[1] ? gamma : alpha;
    const double total = static_cast<double>(fwd.size()) + q * static_cast<double>(bwd.size()) + boundary;
    const double t_next = t + rng.exponential(total);
    while (next_sample < spec.sample_times.size() && spec.sample_times[next_sample] < t_next) {
      traj.samples.push_back(snapshot(spec.sample_times[next_sample]));
      ++next_sample;
    }
    if (t_next > spec.t_end) break;
    t = t_next;
    ++traj.events;

    double v = rng.uniform() * total;
    const double nf = static_cast<double>(fwd.size());
    if (v < nf) {
      const int e = fwd[std::min(fwd.size() - 1, static_cast<std::size_t>(v))];
      s[static_cast<std::size_t>(e)] = 0;
      s[static_cast<std::size_t>(e) + 1] = 1;
      if (e == rightmost) rightmost = e + 1;
      refresh(e - 1);
      refresh(e);
      refresh(e + 1);
      grow();
      continue;
    }
    v -= nf;
    const double nb = q * static_cast<double>(bwd.size());
    if (v < nb) {
      const int e = bwd[std::min(bwd.size() - 1, static_cast<std::size_t>(v / q))];
      s[static_cast<std::size_t>(e)] = 1;
      s[static_cast<std::size_t>(e) + 1] = 0;
      if (e + 1 == rightmost) rightmost = e;
      refresh(e - 1);
      refresh(e);
      refresh(e + 1);
      continue;
    }
    if (s[1] == 0) {
      s[1] = 1;
      ++particles;
      ++traj.entries;
      if (rightmost == 0) rightmost = 1;
    } else {
      s[1] = 0;
      --particles;
      ++traj.exits;
      if (rightmost == 1) rightmost = 0;
    }
    refresh(1);
    grow();
  }
  while (next_sample < spec.sample_times.size()) {
    traj.samples.push_back(snapshot(spec.sample_times[next_sample]));
    ++next_sample;
  }
  traj.terminal.assign(s.begin() + 1, s.begin() + 1 + std::max(rightmost, 1));
  traj.window = W;
  return traj;
}

namespace {

struct Clock {
  ClockStream stream;
  Channel channel;
  int edge;
};

std::uint64_t channel_code(Channel ch, int edge) {
  switch (ch) {
    case Channel::enter: return 0;
    case Channel::exit: return 1;
    case Channel::edge_fwd: return 2 * static_cast<std::uint64_t>(edge);
    default: return 2 * static_cast<std::uint64_t>(edge) + 1;
  }
}

Trajectory run_coupled(const SimSpec& spec, std::size_t index, std::uint64_t seed) {
  check_spec(spec);
  if (spec.mode != SimMode::single && spec.mode != SimMode::halfspace) {
    throw std::invalid_argument("couple supports single-species segment and half-line processes");
  }
  const bool half = spec.mode == SimMode::halfspace;
  SimSpec single = spec;
  single.mode = SimMode::single;
  std::vector<int> s = initial_sites(single);
  int rightmost = 0;
  for (int x = static_cast<int>(s.size()); x >= 1; --x) {
    if (s[static_cast<std::size_t>(x - 1)] == 1) {
      rightmost = x;
      break;
    }
  }
  int W = static_cast<int>(s.size());
  if (half) {
    W = std::max({16, rightmost + 8, spec.shared_prefix + 1});
    s.resize(static_cast<std::size_t>(W), 0);
  }
  const double q = spec.params.q;

  std::vector<Clock> clocks;
  using Key = std::tuple<double, std::uint64_t, std::uint64_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  double t = 0.0;
  auto add_clock = [&](Channel ch, int edge, double rate) {
    const std::uint64_t code = channel_code(ch, edge);
    const bool shared = ch == Channel::enter || ch == Channel::exit || edge + 1 <= spec.shared_prefix;
    const std::uint64_t stream = shared ? code : ((static_cast<std::uint64_t>(index) + 1) << 40) | code;
    Clock c{ClockStream(seed, stream, rate), ch, edge};
    while (c.stream.time() <= t) c.stream.advance();
    queue.emplace(c.stream.time(), c.stream.stream_id(), c.stream.sequence(), clocks.size());
    clocks.push_back(std::move(c));
  };
  add_clock(Channel::enter, 0, spec.params.alpha);
  add_clock(Channel::exit, 0, spec.params.gamma);
  for (int e = 1; e < W; ++e) {
    add_clock(Channel::edge_fwd, e, 1.0);
    add_clock(Channel::edge_bwd, e, q);
  }

  Trajectory traj;
  traj.t_end = spec.t_end;
  long net = 0;
  std::size_t next_sample = 0;
  const SimMode obs_mode = half ? SimMode::halfspace : SimMode::single;
  auto record = [&](double time) {
    Sample smp = make_sample(obs_mode, time, s, net, false);
    if (spec.record_states) smp.state.assign(s.begin(), half ? s.begin() + std::max(rightmost, 1) : s.end());
    traj.samples.push_back(std::move(smp));
  };

  while (!queue.empty()) {
    const auto [time, stream_id, seq, slot] = queue.top();
    while (next_sample < spec.sample_times.size() && spec.sample_times[next_sample] < time) {
      record(spec.sample_times[next_sample]);
      ++next_sample;
    }
    if (time > spec.t_end) break;
    queue.pop();
    t = time;
    Clock& c = clocks[slot];
    Event ev{time, c.channel, c.edge, c.stream.u()};
    const int flow = apply_event(SimMode::single, s, ev, q, spec.params.r());
    net += flow;
    traj.entries += flow > 0;
    traj.exits += flow < 0;
    ++traj.events;
    c.stream.advance();
    queue.emplace(c.stream.time(), c.stream.stream_id(), c.stream.sequence(), slot);

    if (half) {
      if (ev.channel == Channel::edge_fwd && s[static_cast<std::size_t>(ev.edge)] == 1 && ev.edge + 1 > rightmost) {
        rightmost = ev.edge + 1;
      } else if (ev.channel == Channel::edge_bwd && ev.edge + 1 == rightmost && s[static_cast<std::size_t>(ev.edge)] == 0) {
        rightmost = ev.edge;
      } else if (flow > 0 && rightmost == 0) {
        rightmost = 1;
      } else if (flow < 0 && rightmost == 1) {
        rightmost = 0;
      }
      while (rightmost >= W - 1) {
        const int next = 2 * W;
        if (next > spec.window_cap) throw std::length_error("half-line window exceeds the configured cap");
        s.resize(static_cast<std::size_t>(next), 0);
        for (int e = W; e < next; ++e) {
          add_clock(Channel::edge_fwd, e, 1.0);
          add_clock(Channel::edge_bwd, e, q);
        }
        W = next;
      }
    }
  }
  while (next_sample < spec.sample_times.size()) {
    record(spec.sample_times[next_sample]);
    ++next_sample;
  }
  traj.terminal = half ? std::vector<int>(s.begin(), s.begin() + std::max(rightmost, 1)) : s;
  traj.window = W;
  return traj;
}

}  // namespace

std::vector<Trajectory> couple(const std::vector<SimSpec>& specs, std::uint64_t seed) {
  if (specs.empty()) return {};
  const ModelParams& p0 = specs.front().params;
  for (const SimSpec& spec : specs) {
    if (spec.params.q != p0.q || spec.params.alpha != p0.alpha || spec.params.gamma != p0.gamma) {
      throw std::invalid_argument("coupled processes must share q, alpha and gamma");
    }
  }
  std::vector<Trajectory> out;
  out.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) out.push_back(run_coupled(specs[i], i, seed));
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "time,particles,rightmost_empty,net_current\n";
  char buf[128];
  for (const Sample& smp : trajectory.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%ld\n", smp.time, smp.particles, smp.rightmost_empty, smp.net_current);
    out += buf;
  }
  return out;
}

}  // namespace asep
