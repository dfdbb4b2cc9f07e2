#include "asep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "asep/configurations.hpp"
#include "asep/exact_engine.hpp"
#include "asep/rng.hpp"
#include "asep/simulator.hpp"

namespace asep {

namespace {

constexpr double kZ95 = 1.959963984540054;

double proportion_se(double p, long n) { return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0; }

void check_config(const ExperimentConfig& cfg) {
  validate(cfg.params);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
}

// Stream ids of different experiments never overlap for one master seed.
std::uint64_t stream_id(std::uint64_t experiment, std::uint64_t grid, std::uint64_t trial) {
  return (experiment << 56) ^ (grid << 40) ^ trial;
}

StatReport new_report(const std::string& name, const ExperimentConfig& cfg) {
  StatReport r;
  r.experiment = name;
  if (cfg.trials < 30) r.notes.push_back("insufficient sampling: fewer than 30 trials");
  return r;
}

ReferenceCdf reference_for(const ExperimentConfig& cfg, Phase phase) {
  std::string pick = cfg.reference;
  if (pick == "auto") pick = to_string(phase);
  if (pick == "gaussian" || pick == "gauss") return ReferenceCdf::gaussian();
  if (pick == "goe") return load_tracy_widom(Phase::goe, cfg.data_dir);
  if (pick == "gse") return load_tracy_widom(Phase::gse, cfg.data_dir);
  throw std::invalid_argument("unknown reference '" + cfg.reference + "'");
}

double reference_value(const ReferenceCdf& ref, double s) {
  return ref.kind() == ReferenceCdf::Kind::gaussian ? standard_normal_cdf(s) : ref.clamped(s);
}

}  // namespace

int effective_threshold(const ExperimentConfig& cfg) {
  return cfg.m > 0 ? cfg.m : default_integer_threshold(cfg.params.N);
}

const StatRow& StatReport::row(const std::string& series, double x) const {
  for (const StatRow& r : rows) {
    if (r.series == series && r.x == x) return r;
  }
  throw std::out_of_range("report has no row " + series);
}

void parallel_for(long count, int workers, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const long nw = std::clamp<long>(workers, 1, count);
  if (nw == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
  for (long w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < count; i += nw) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    // ties: the empirical CDF jumps once per distinct value
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(j) / n - f});
    i = j;
  }
  return d;
}

StatReport current_fluctuations(const ExperimentConfig& cfg) {
  check_config(cfg);
  if (cfg.t_grid.empty()) throw std::invalid_argument("t_grid is empty");
  std::vector<double> ts = cfg.t_grid;
  if (!std::is_sorted(ts.begin(), ts.end()) || ts.front() < 0.0) {
    throw std::invalid_argument("t_grid must be nonnegative and nondecreasing");
  }
  const PhaseInfo info = effective_density(cfg.params);
  const ReferenceCdf ref = reference_for(cfg, info.phase);
  const double scale = 1.0 / (1.0 - cfg.params.q);

  SimSpec spec;
  spec.params = cfg.params;
  spec.mode = SimMode::halfspace;
  spec.t_end = ts.back() * scale;
  for (double t : ts) spec.sample_times.push_back(t * scale);

  const std::size_t G = ts.size();
  std::vector<long> J(static_cast<std::size_t>(cfg.trials) * G);
  parallel_for(cfg.trials, cfg.workers, [&](long i) {
    const Trajectory tr = simulate_halfspace(spec, cfg.master_seed, stream_id(1, 0, static_cast<std::uint64_t>(i)));
    for (std::size_t g = 0; g < G; ++g) J[static_cast<std::size_t>(i) * G + g] = tr.samples[g].net_current;
  });

  StatReport rep = new_report("current_fluctuations", cfg);
  rep.scalars["rho"] = info.rho;
  rep.scalars["kappa_plus"] = info.kappa_plus;
  const bool gauss = info.phase == Phase::gauss;
  const DriftStats ds = gauss ? drift_stats(info.rho) : DriftStats{0.25, 0.0};
  const auto n = static_cast<double>(cfg.trials);
  for (std::size_t g = 0; g < G; ++g) {
    const double t = ts[g];
    double sum = 0.0;
    double sq = 0.0;
    std::vector<double> z(static_cast<std::size_t>(cfg.trials));
    for (long i = 0; i < cfg.trials; ++i) {
      const double j = static_cast<double>(J[static_cast<std::size_t>(i) * G + g]);
      sum += j;
      sq += j * j;
      if (t > 0.0) {
        z[static_cast<std::size_t>(i)] = gauss ? (ds.mu * t - j) / (std::sqrt(ds.sigma_sq) * std::sqrt(t))
                                               : (t / 4.0 - j) / (std::pow(2.0, -4.0 / 3.0) * std::cbrt(t));
      }
    }
    const double mean = sum / n;
    const double var = cfg.trials > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) : 0.0;
    rep.rows.push_back({"mean_current", t, mean, std::sqrt(var / n), cfg.trials});
    rep.rows.push_back({"drift_target", t, ds.mu * t, 0.0, 0});
    if (t > 0.0) {
      const double ks = ks_distance(z, [&](double s) { return reference_value(ref, s); });
      rep.rows.push_back({"ks", t, ks, 0.0, cfg.trials});
    }
  }
  if (!gauss) rep.notes.push_back("KPZ phase: KS values are a trend report, not a convergence test");
  rep.notes.push_back("reference: " + ref.name());
  return rep;
}

StatReport tv_profile_mc(const ExperimentConfig& cfg) {
  check_config(cfg);
  if (cfg.c_grid.empty()) throw std::invalid_argument("c_grid is empty");
  const int N = cfg.params.N;
  const int m = effective_threshold(cfg);
  const PhaseInfo info = effective_density(cfg.params);
  const ReferenceCdf ref = reference_for(cfg, info.phase);
  std::vector<double> cs = cfg.c_grid;
  std::sort(cs.begin(), cs.end());
  std::vector<double> times;
  for (double c : cs) times.push_back(std::max(0.0, phase_time(info, cfg.params, c, cfg.constants)));

  SimSpec spec;
  spec.params = cfg.params;
  spec.mode = SimMode::single;
  spec.t_end = times.back();
  spec.sample_times = times;
  const StatePredicate left_A = [m](const std::vector<int>& s) {
    for (int x = m; x <= static_cast<int>(s.size()); ++x) {
      if (s[static_cast<std::size_t>(x - 1)] == 0) return false;
    }
    return true;
  };

  const std::size_t G = cs.size();
  std::vector<std::uint8_t> in_a(static_cast<std::size_t>(cfg.trials) * G);
  std::vector<double> exit_time(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](long i) {
    const auto sid = stream_id(2, 0, static_cast<std::uint64_t>(i));
    const Trajectory tr = simulate(spec, cfg.master_seed, sid);
    for (std::size_t g = 0; g < G; ++g) in_a[static_cast<std::size_t>(i) * G + g] = tr.samples[g].rightmost_empty >= m;
    // same stream, so this follows the same path up to the exit time
    const auto hit = hitting_time(spec, left_A, cfg.master_seed, sid);
    exit_time[static_cast<std::size_t>(i)] = hit ? *hit : std::numeric_limits<double>::infinity();
  });

  StatReport rep = new_report("tv_profile_mc", cfg);
  const double mu_a = stationary_mass_of_A(cfg.params, N, m);
  rep.scalars["mu_A"] = mu_a;
  rep.scalars["m"] = m;
  rep.scalars["rho"] = info.rho;
  for (std::size_t g = 0; g < G; ++g) {
    long hits = 0;
    long exits = 0;
    for (long i = 0; i < cfg.trials; ++i) {
      hits += in_a[static_cast<std::size_t>(i) * G + g];
      exits += exit_time[static_cast<std::size_t>(i)] <= times[g];
    }
    const double p = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    const double e = static_cast<double>(exits) / static_cast<double>(cfg.trials);
    const double se = proportion_se(p, cfg.trials);
    rep.rows.push_back({"time", cs[g], times[g], 0.0, 0});
    rep.rows.push_back({"hit_A", cs[g], p, se, cfg.trials});
    rep.rows.push_back({"lower_bound", cs[g], p - mu_a, se, cfg.trials});
    rep.rows.push_back({"exit", cs[g], e, proportion_se(e, cfg.trials), cfg.trials});
    rep.rows.push_back({"reference", cs[g], 1.0 - reference_value(ref, cs[g]), 0.0, 0});
  }
  rep.notes.push_back("reference: " + ref.name());
  return rep;
}

std::vector<int> mallows_projection(const SignedPermutation& pi, const Interval& iv, int k) {
  validate(iv, pi.size());
  std::vector<int> eta;
  if (iv.a == 0) {
    const int b = iv.b;
    if (k < -b || k > b) throw std::invalid_argument("k must lie in [-b, b]");
    // values -b..-(k+1) when k >= 0, all negatives and 1..|k| when k < 0
    const int cutoff = -k;  // particle iff value <= cutoff (value != 0)
    for (int x = 1; x <= b; ++x) eta.push_back(pi(x) <= cutoff ? 1 : 0);
  } else {
    const int L = iv.b - iv.a + 1;
    if (k < 0 || k > L) throw std::invalid_argument("k must lie in [0, b - a + 1]");
    std::vector<int> vals;
    for (int x = iv.a; x <= iv.b; ++x) vals.push_back(pi(x));
    std::vector<int> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    const int particles = L - k;
    const int cutoff = particles > 0 ? sorted[static_cast<std::size_t>(particles - 1)] : std::numeric_limits<int>::min();
    for (int v : vals) eta.push_back(particles > 0 && v <= cutoff ? 1 : 0);
  }
  return eta;
}

StatReport mallows_tail(const ExperimentConfig& cfg) {
  check_config(cfg);
  if (cfg.x_grid.empty()) throw std::invalid_argument("x_grid is empty");
  const Interval iv = cfg.interval;
  const int n = iv.b;
  validate(iv, n);
  const double q = cfg.params.q;
  const double r = cfg.params.r();

  std::vector<int> R(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](long i) {
    StreamRng rng(cfg.master_seed, stream_id(3, 0, static_cast<std::uint64_t>(i)));
    const SignedPermutation pi = sample_mallows(iv, n, q, r, rng);
    const std::vector<int> eta = mallows_projection(pi, iv, cfg.k);
    int rightmost = 0;
    for (int x = static_cast<int>(eta.size()); x >= 1; --x) {
      if (eta[static_cast<std::size_t>(x - 1)] == 0) {
        rightmost = x;
        break;
      }
    }
    R[static_cast<std::size_t>(i)] = rightmost;
  });

  StatReport rep = new_report("mallows_tail", cfg);
  // weighted least squares of log p on x, weights 1 / var(log p) = n p / (1 - p)
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (double x : cfg.x_grid) {
    long count = 0;
    for (int v : R) count += static_cast<double>(v) >= static_cast<double>(cfg.k) + x;
    const double p = static_cast<double>(count) / static_cast<double>(cfg.trials);
    rep.rows.push_back({"tail", x, p, proportion_se(p, cfg.trials), cfg.trials});
    if (count >= 5 && count < cfg.trials) {
      const double w = static_cast<double>(count) / (1.0 - p);
      const double y = std::log(p);
      sw += w;
      sx += w * x;
      sy += w * y;
      sxx += w * x * x;
      sxy += w * x * y;
      ++used;
    }
  }
  if (used >= 2) {
    const double det = sw * sxx - sx * sx;
    const double slope = (sw * sxy - sx * sy) / det;
    const double se = std::sqrt(sw / det);
    rep.scalars["slope"] = slope;
    rep.scalars["slope_lo"] = slope - kZ95 * se;
    rep.scalars["slope_hi"] = slope + kZ95 * se;
    rep.scalars["fit_points"] = used;
  } else {
    rep.notes.push_back("log-linear fit skipped: fewer than two grid points with 5 or more tail events");
  }
  if (iv.a == 0) {
    long full = 0;
    for (int v : R) full += v == 0;
    const double p = static_cast<double>(full) / static_cast<double>(cfg.trials);
    rep.scalars["all_occupied"] = p;
    rep.scalars["all_occupied_se"] = proportion_se(p, cfg.trials);
  }
  return rep;
}

MixingResult mixing_time(const ExperimentConfig& cfg) {
  check_config(cfg);
  const double eps = cfg.epsilon;
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int N = cfg.params.N;
  const double h = cfg.mixing_step;
  if (!(h > 0.0)) throw std::invalid_argument("mixing step must be positive");
  MixingResult out;

  if (cfg.exact) {
    const StartSet starts = N <= kMaxAllStartsSites ? StartSet::all : StartSet::extremal;
    out.bound = starts == StartSet::all ? "exact-all" : "exact-extremal";
    auto d = [&](double t) { return exact_tv_profile(cfg.params, N, {t}, starts).distance.front(); };
    double d0 = d(0.0);
    if (d0 <= eps) {
      out.time = 0.0;
      out.d_at = d0;
      out.d_before = d0;
      return out;
    }
    // grid scan with step h, then bisection on the bracketing interval
    const auto gen_times = [&](double lo, double hi, int cnt) {
      std::vector<double> v;
      for (int i = 0; i <= cnt; ++i) v.push_back(lo + (hi - lo) * i / cnt);
      return v;
    };
    double lo = 0.0;
    double hi = 0.0;
    double d_hi = d0;
    double d_lo = d0;
    for (int block = 0; block < 4096; ++block) {
      const std::vector<double> ts = gen_times(block * 64 * h, (block + 1) * 64 * h, 64);
      const TvProfile prof = exact_tv_profile(cfg.params, N, ts, starts);
      bool found = false;
      for (std::size_t i = 1; i < ts.size(); ++i) {
        if (prof.distance[i] <= eps) {
          lo = ts[i - 1];
          d_lo = prof.distance[i - 1];
          hi = ts[i];
          d_hi = prof.distance[i];
          found = true;
          break;
        }
      }
      if (found) break;
      if (block == 4095) throw std::runtime_error("mixing time beyond the scanned horizon");
    }
    const double target = h / 64.0;
    while (hi - lo > target) {
      const double mid = 0.5 * (lo + hi);
      const double dm = d(mid);
      if (dm <= eps) {
        hi = mid;
        d_hi = dm;
      } else {
        lo = mid;
        d_lo = dm;
      }
    }
    out.time = hi;
    out.d_at = d_hi;
    out.d_before = d_lo;
    out.resolution = hi - lo;
    return out;
  }

  // Monte Carlo: d_N(t) <= P(tau > t), tau = hitting time of the full
  // configuration from empty
  out.bound = "mc-upper";
  if (eps >= 1.0) return out;
  SimSpec spec;
  spec.params = cfg.params;
  spec.mode = SimMode::single;
  spec.t_end = std::numeric_limits<double>::max();
  const StatePredicate full = [](const std::vector<int>& s) {
    return std::all_of(s.begin(), s.end(), [](int v) { return v == 1; });
  };
  std::vector<double> tau(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](long i) {
    tau[static_cast<std::size_t>(i)] = *hitting_time(spec, full, cfg.master_seed, stream_id(4, 0, static_cast<std::uint64_t>(i)));
  });
  std::sort(tau.begin(), tau.end());
  // smallest t with empirical P(tau > t) <= eps
  const auto n = static_cast<double>(cfg.trials);
  const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil((1.0 - eps) * n) - 1.0));
  out.time = tau[std::min(idx, tau.size() - 1)];
  out.d_at = static_cast<double>(tau.end() - std::upper_bound(tau.begin(), tau.end(), out.time)) / n;
  out.d_before = eps;
  return out;
}

SignedPermutation sample_left_walk(const SignedPermutation& start, const ModelParams& params, double t,
                                   StreamRng& rng) {
  const int n = start.size();
  const double total = params.alpha + (n - 1);
  const double r = params.r();
  SignedPermutation w = start;
  double s = rng.exponential(total);
  while (s <= t) {
    const double v = rng.uniform() * total;
    const int k = v < params.alpha ? 0 : std::min(n - 1, 1 + static_cast<int>(v - params.alpha));
    w = random_left_step(k, w, k == 0 ? r : params.q, rng.uniform());
    s += rng.exponential(total);
  }
  return w;
}

StatReport duality_experiment(const ExperimentConfig& cfg) {
  check_config(cfg);
  const int N = cfg.params.N;
  const int S = cfg.S;
  const int n = N + S;
  const int m = effective_threshold(cfg);
  if (S < 1) throw std::invalid_argument("S must be at least 1");
  if (m > n + 1) throw std::invalid_argument("threshold m must lie in [1, S+N+1]");
  const double q = cfg.params.q;
  const double r = cfg.params.r();

  SimSpec walk;
  walk.params = cfg.params;
  walk.params.N = n;
  walk.mode = SimMode::colored;
  walk.description = ClockDescription::hecke;
  walk.t_end = cfg.t;

  std::vector<std::uint8_t> c_event(static_cast<std::size_t>(cfg.trials));
  std::vector<std::uint8_t> d_event(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](long i) {
    const auto base = 2 * static_cast<std::uint64_t>(i);
    // C: pi ~ M_[1,n] M_[0,S], then W_t T_pi
    StreamRng rc(cfg.master_seed, stream_id(5, 0, base));
    const SignedPermutation v = sample_mallows(Interval{1, n}, n, q, r, rc);
    const SignedPermutation u = sample_mallows(Interval{0, S}, n, q, r, rc);
    const SignedPermutation pi = sample_right_product(v, u, q, r, rc);
    c_event[static_cast<std::size_t>(i)] = c_side_event(sample_left_walk(pi, cfg.params, cfg.t, rc), m);
    // D: colored dynamics from the identity, then M_[1,n] and M_[0,S] on the left
    const Trajectory tr = simulate(walk, cfg.master_seed, stream_id(5, 1, base + 1));
    StreamRng rd(cfg.master_seed, stream_id(5, 2, base + 1));
    const SignedPermutation w = SignedPermutation::from_word(tr.terminal);
    const SignedPermutation v2 = sample_mallows(Interval{1, n}, n, q, r, rd);
    const SignedPermutation x = sample_left_product(v2, w, q, r, rd);
    const SignedPermutation u2 = sample_mallows(Interval{0, S}, n, q, r, rd);
    d_event[static_cast<std::size_t>(i)] = d_side_event(sample_left_product(u2, x, q, r, rd), m);
  });

  long cs = 0;
  long ds = 0;
  for (long i = 0; i < cfg.trials; ++i) {
    cs += c_event[static_cast<std::size_t>(i)];
    ds += d_event[static_cast<std::size_t>(i)];
  }
  const double pc = static_cast<double>(cs) / static_cast<double>(cfg.trials);
  const double pd = static_cast<double>(ds) / static_cast<double>(cfg.trials);
  const double sec = proportion_se(pc, cfg.trials);
  const double sed = proportion_se(pd, cfg.trials);
  const double se = std::sqrt(sec * sec + sed * sed);
  StatReport rep = new_report("duality_experiment", cfg);
  rep.rows.push_back({"C", cfg.t, pc, sec, cfg.trials});
  rep.rows.push_back({"D", cfg.t, pd, sed, cfg.trials});
  rep.rows.push_back({"difference", cfg.t, pc - pd, se, cfg.trials});
  rep.scalars["difference_lo"] = pc - pd - kZ95 * se;
  rep.scalars["difference_hi"] = pc - pd + kZ95 * se;
  rep.scalars["m"] = m;
  rep.scalars["S"] = S;
  return rep;
}

}  // namespace asep
