#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asep/model_params.hpp"

namespace asep {

/// single: {0,1}^N. multispecies: labels 1, 2, 3, 4 (4 = hole).
/// colored: signed permutation in one-line form, negative colors are
/// particles. halfspace: {0,1}^N-valued ASEP on the half line.
enum class SimMode { single, multispecies, colored, halfspace };

/// independent: rate-1 forward and rate-q backward clock per edge, rate-alpha
/// entry and rate-gamma exit clocks. hecke: one rate-1 clock per edge that
/// sorts an ascending pair and reverses a descending pair with probability
/// q, one rate-alpha boundary clock that always lets a particle in and lets
/// it out with probability r = gamma/alpha.
enum class ClockDescription { independent, hecke };

enum class Channel : std::uint8_t { edge_fwd, edge_bwd, enter, exit, edge_hecke, boundary_hecke };

/// A clock ring. `edge` is x for the edge {x, x+1} (ignored at the boundary);
/// `u` is the auxiliary uniform used by hecke-description channels.
struct Event {
  double time = 0.0;
  Channel channel = Channel::edge_fwd;
  int edge = 1;
  double u = 0.5;
};

struct SimState {
  SimMode mode = SimMode::single;
  std::vector<int> sites;
};

/// Applies one clock ring. Single species: forward moves a particle right iff
/// the pattern is (1,0), backward moves left iff (0,1); entry fills a vacant
/// site 1, exit empties an occupied site 1. Multispecies and colored: forward
/// sorts the edge so the higher-priority content sits on the right (smaller
/// label / smaller color is higher priority), backward sorts the other way;
/// entry turns 4 -> 1, 3 -> 2 (resp. i -> -i for i >= 1) and exit turns
/// 1 -> 4, 2 -> 3 (resp. -i -> i). Events that do not apply are no-ops.
SimState step(const SimState& state, const Event& event, const ModelParams& params);

struct Sample {
  double time = 0.0;
  int particles = 0;        // particles (single), species 1+2, negative colors
  int rightmost_empty = 0;  // -1 on the half line, where it is infinite
  long net_current = 0;     // entries minus exits since time 0
  std::vector<int> state;   // only when SimSpec::record_states
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<int> terminal;
  double t_end = 0.0;
  long entries = 0;
  long exits = 0;
  std::uint64_t events = 0;  // clock rings processed, no-ops included
  int window = 0;            // final window size (half line)
};

struct SimSpec {
  ModelParams params;
  SimMode mode = SimMode::single;
  /// Initial sites; empty means the empty configuration of length params.N
  /// (the identity permutation in colored mode).
  std::vector<int> initial;
  double t_end = 0.0;
  /// Observation times in [0, t_end], nondecreasing.
  std::vector<double> sample_times;
  bool record_states = false;
  ClockDescription description = ClockDescription::independent;
  /// For couple(): clocks of the boundary and of edges {x, x+1} with
  /// x + 1 <= shared_prefix are shared between processes.
  int shared_prefix = 0;
  /// Half line only: the window may not grow beyond this many sites.
  int window_cap = 1 << 22;
};

/// Resolved initial sites (fills in the default empty start).
std::vector<int> initial_sites(const SimSpec& spec);

/// Observables of a state in the given mode.
int particle_count(SimMode mode, const std::vector<int>& sites);

/// Exact event-driven simulation. Segment modes draw a single stream
/// (seed, stream): exponential waiting times at the total clock rate, the
/// ringing channel chosen proportionally to its rate. Half-line mode is
/// dispatched to simulate_halfspace.
Trajectory simulate(const SimSpec& spec, std::uint64_t seed, std::uint64_t stream = 0);

/// Half-line ASEP on a growing window [1, W]. Only clocks that can change the
/// state are tracked (sites right of the rightmost particle are vacant), so
/// the cost per unit time scales with the number of particle-hole
/// interfaces. W doubles whenever a particle reaches W - 1; initial W is
/// max(16, rightmost particle + 8). Throws std::length_error past
/// spec.window_cap.
Trajectory simulate_halfspace(const SimSpec& spec, std::uint64_t seed, std::uint64_t stream = 0);

/// Canonical coupling of single-species segment and half-line processes.
/// Every clock is its own counter-based stream keyed by channel id; shared
/// channels (boundary, edges inside shared_prefix) use the same stream in
/// every process, the rest are private to the process. Throws
/// std::invalid_argument if q, alpha or gamma differ.
std::vector<Trajectory> couple(const std::vector<SimSpec>& specs, std::uint64_t seed);

using StatePredicate = std::function<bool(const std::vector<int>&)>;

/// First event time at which the post-event state satisfies `predicate`
/// (0 if the initial state already does), nullopt if t_end passes first.
/// Segment modes only.
std::optional<double> hitting_time(const SimSpec& spec, const StatePredicate& predicate,
                                   std::uint64_t seed, std::uint64_t stream = 0);

/// Trajectory as CSV: "time,particles,rightmost_empty,net_current".
std::string trajectory_csv(const Trajectory& trajectory);

std::string to_string(SimMode mode);
SimMode parse_sim_mode(const std::string& text);

}  // namespace asep
