#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "asep/hecke.hpp"
#include "asep/model_params.hpp"

namespace asep {

/// One configuration type for every experiment; fields a given experiment
/// does not use are ignored (and still recorded in its report).
struct ExperimentConfig {
  ModelParams params;
  std::vector<double> c_grid;
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  long trials = 1000;
  std::uint64_t master_seed = 1;
  int m = 0;                        // 0 selects max(1, ceil((ln N)^{1/16}))
  std::string reference = "auto";   // auto | gaussian | goe | gse
  std::string data_dir;             // reference tables; empty = default lookup
  int workers = 1;
  TimeFunctionConstants constants;
  Interval interval{0, 1};          // mallows_tail
  int k = 0;                        // mallows_tail offset
  int S = 1;                        // duality padding
  double t = 0.0;                   // duality time
  double epsilon = 0.25;            // mixing_time
  double mixing_step = 0.5;         // mixing_time grid step
  bool exact = true;                // mixing_time: exact profile or MC bound
};

int effective_threshold(const ExperimentConfig& cfg);

struct StatRow {
  std::string series;
  double x = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

struct StatReport {
  std::string experiment;
  std::vector<StatRow> rows;
  std::map<std::string, double> scalars;
  std::vector<std::string> notes;

  /// First row of `series` at grid coordinate x (throws if absent).
  const StatRow& row(const std::string& series, double x) const;
};

/// Runs body(i) for i in [0, count) on `workers` threads. Callers write into
/// per-index slots, so aggregation order never depends on scheduling.
void parallel_for(long count, int workers, const std::function<void(long)>& body);

/// Kolmogorov-Smirnov distance of a sample to a CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Half-line current J at times t/(1-q) for t in cfg.t_grid, started empty,
/// standardised against the phase's limit law. Series: "mean_current",
/// "drift_target" (rho(1-rho) t, or t/4 in the KPZ phases), "ks".
StatReport current_fluctuations(const ExperimentConfig& cfg);

/// For c in cfg.c_grid at time g_rho(c): "hit_A" = P(eta in A^(m)) from
/// empty, "lower_bound" = hit_A - mu(A^(m)) (a lower bound on d_N),
/// "exit" = P(eta_s leaves A^(m) for some s <= g), and "reference" =
/// 1 - F_rho(c).
StatReport tv_profile_mc(const ExperimentConfig& cfg);

/// Tail of the rightmost hole of the projected Mallows sample: series "tail"
/// estimates P(R >= k + x) on cfg.x_grid. Scalars: slope, slope_lo, slope_hi
/// (95% interval of the weighted log-linear fit) and, for a = 0,
/// all_occupied.
StatReport mallows_tail(const ExperimentConfig& cfg);

/// Configuration eta^{[a,b],k}_pi on the interval: the L - k smallest values
/// of pi on [a, b] (L = b - a + 1) are particles; for a = 0 the b - k
/// smallest of the 2b values +-pi(x) are particles.
std::vector<int> mallows_projection(const SignedPermutation& pi, const Interval& iv, int k);

struct MixingResult {
  double time = 0.0;
  std::string bound;     // "exact-all", "exact-extremal" or "mc-upper"
  double d_at = 0.0;     // distance (or bound) at the returned time
  double d_before = 1.0; // at time - resolution
  double resolution = 0.0;
};

/// Exact: bisection of the monotone d_N(t) down to cfg.mixing_step / 64.
/// MC: (1 - epsilon)-quantile of the empty-to-full hitting time, an upper
/// bound on t_mix(epsilon).
MixingResult mixing_time(const ExperimentConfig& cfg);

/// Sampling version of duality_check: "C" and "D" event frequencies from
/// independent pipelines, "difference" with a two-proportion interval.
StatReport duality_experiment(const ExperimentConfig& cfg);

/// Hecke walk W_t T_start sampled by left multiplication at clock rings.
SignedPermutation sample_left_walk(const SignedPermutation& start, const ModelParams& params, double t,
                                   StreamRng& rng);

}  // namespace asep
