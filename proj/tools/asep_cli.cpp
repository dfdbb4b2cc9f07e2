// Command-line front end: every subcommand writes its outputs to
// <out>/run-<config hash>/ with a manifest, and a short summary to stdout.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "asep/checks.hpp"
#include "asep/configurations.hpp"
#include "asep/exact_engine.hpp"
#include "asep/experiments.hpp"
#include "asep/model_params.hpp"
#include "asep/rational.hpp"
#include "asep/report.hpp"
#include "asep/simulator.hpp"

using namespace asep;

namespace {

struct Common {
  std::string q = "0.5";
  std::string alpha = "1";
  std::string gamma = "0.25";
  std::string rho_params;
  int N = 8;
  std::uint64_t seed = 1;
  long trials = 1000;
  int m = 0;
  std::string out = "runs";
  std::string format = "json";
  std::string data_dir;
  int workers = 0;
};

const char* kThresholdHelp = "threshold m for A = {R >= m}; 0 selects max(1, ceil((ln N)^(1/16)))";

void add_params(CLI::App* sub, Common& c) {
  sub->add_option("--q", c.q, "bulk rate ratio in (0,1); p/q selects exact arithmetic")->capture_default_str();
  sub->add_option("--alpha", c.alpha, "entry rate at site 1")->capture_default_str();
  sub->add_option("--gamma", c.gamma, "exit rate at site 1 (< alpha)")->capture_default_str();
  sub->add_option("--rho-params", c.rho_params, "shorthand q=..,alpha=..,gamma=.. (overrides the three flags)");
}

void add_run(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--out", c.out, "output root; files go to <out>/run-<config hash>/")->capture_default_str();
  sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--data-dir", c.data_dir, "reference table directory (default: $ASEP_DATA_DIR, then the built-in path)");
  sub->add_option("--workers", c.workers, "worker threads (0 = available parallelism)")->capture_default_str();
}

void add_trials(CLI::App* sub, Common& c) {
  sub->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

ModelParams resolve_params(Common& c, int N) {
  if (!c.rho_params.empty()) {
    std::stringstream ss(c.rho_params);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--rho-params expects key=value pairs");
      const std::string key = trim(item.substr(0, eq));
      const std::string val = trim(item.substr(eq + 1));
      if (key == "q") c.q = val;
      else if (key == "alpha") c.alpha = val;
      else if (key == "gamma") c.gamma = val;
      else throw std::invalid_argument("--rho-params: unknown key '" + key + "'");
    }
  }
  const Rational q = parse_rational(c.q);
  const Rational a = parse_rational(c.alpha);
  const Rational g = parse_rational(c.gamma);
  const bool exact = is_fraction_literal(c.q) || is_fraction_literal(c.alpha) || is_fraction_literal(c.gamma);
  ModelParams p = exact ? make_exact_params(q, a, g, N) : make_params(to_double(q), to_double(a), to_double(g), N);
  if (!exact) {
    const PhaseInfo info = effective_density(p);
    if (std::abs(info.rho - 0.5) < 1e-9 || std::abs(2.0 * (p.alpha - p.gamma) - (1.0 - p.q)) < 1e-9) {
      std::cerr << "warning: decimal parameters within 1e-9 of the rho = 1/2 boundary; "
                   "pass fractions (p/q) for an exact phase decision\n";
    }
  }
  return p;
}

int workers_of(const Common& c) {
  if (c.workers > 0) return c.workers;
  return std::max(1U, std::thread::hardware_concurrency());
}

ExperimentConfig experiment_config(Common& c) {
  ExperimentConfig cfg;
  cfg.params = resolve_params(c, c.N);
  cfg.trials = c.trials;
  cfg.master_seed = c.seed;
  cfg.m = c.m;
  cfg.data_dir = c.data_dir;
  cfg.workers = workers_of(c);
  return cfg;
}

void emit(const Common& c, nlohmann::json config, std::vector<std::pair<std::string, std::string>> files) {
  const auto dir = write_run(c.out, config, files);
  std::cout << "output: " << dir.string() << "\n";
}

void emit_report(const Common& c, const std::string& command, const ExperimentConfig& cfg, const StatReport& rep) {
  nlohmann::json config = to_json(cfg);
  config["command"] = command;
  config["format"] = c.format;
  for (const StatRow& row : rep.rows) {
    std::cout << row.series << " x=" << format_double(row.x) << " estimate=" << format_double(row.estimate)
              << " se=" << format_double(row.std_error) << "\n";
  }
  for (const auto& [k, v] : rep.scalars) std::cout << k << " = " << format_double(v) << "\n";
  for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
  if (c.format == "csv") emit(c, config, {{"report.csv", report_csv(rep, config)}});
  else emit(c, config, {{"report.json", report_json(rep, config)}});
}

std::vector<int> parse_initial(const std::string& text, SimMode mode) {
  std::vector<int> out;
  if (text.empty()) return out;
  if (mode == SimMode::single || mode == SimMode::halfspace) {
    for (char ch : text) {
      if (ch == '0' || ch == '1') out.push_back(ch - '0');
      else throw std::invalid_argument("initial state must be a 0/1 string");
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (mode == SimMode::multispecies && (item == "inf" || item == "∞")) out.push_back(4);
    else out.push_back(std::stoi(item));
  }
  return out;
}

// key = value lines; a key becomes "--key value" unless the flag already
// appears on the command line.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("config line without '=': " + line);
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    bool given = false;
    for (const auto& a : rest) given |= a == key || a.rfind(key + "=", 0) == 0;
    if (!given) {
      extra.push_back(key);
      extra.push_back(val);
    }
  }
  if (rest.empty()) throw std::runtime_error("--config needs a subcommand");
  // subcommand stays first
  std::vector<std::string> merged{rest[0]};
  merged.insert(merged.end(), extra.begin(), extra.end());
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-boundary ASEP toolkit: simulation, exact transient and stationary laws, Hecke-algebra checks"};
  app.set_version_flag("--version", std::string(ASEP_VERSION));
  app.require_subcommand(1);
  app.footer("Any subcommand accepts --config FILE with key = value lines; flags on the command line win.");

  Common c;

  // simulate
  auto* sim = app.add_subcommand("simulate", "single trajectory, sampled on an even time grid");
  std::string sim_mode = "single";
  std::string sim_initial;
  std::string sim_desc = "independent";
  double sim_t = 10.0;
  int sim_samples = 10;
  add_params(sim, c);
  sim->add_option("--N", c.N, "segment length (initial window hint on the half line)")->capture_default_str();
  sim->add_option("--mode", sim_mode, "dynamics")->check(CLI::IsMember({"single", "multispecies", "colored", "halfspace"}))->capture_default_str();
  sim->add_option("--initial", sim_initial, "0/1 string, or comma-separated labels / colors (default: empty / identity)");
  sim->add_option("--description", sim_desc, "clock description")->check(CLI::IsMember({"independent", "hecke"}))->capture_default_str();
  sim->add_option("--t", sim_t, "end time")->capture_default_str();
  sim->add_option("--samples", sim_samples, "number of equally spaced sample times in (0, t]")->capture_default_str();
  add_run(sim, c);

  // exact
  auto* ex = app.add_subcommand("exact", "exact transient law, stationary law or d_N(t) profile");
  std::string ex_what = "transient";
  std::string ex_start;
  std::vector<double> ex_t{0.0};
  std::string ex_starts = "all";
  add_params(ex, c);
  ex->add_option("--N", c.N, "segment length (<= 14)")->capture_default_str();
  ex->add_option("--what", ex_what, "quantity")->check(CLI::IsMember({"transient", "stationary", "profile"}))->capture_default_str();
  ex->add_option("--t", ex_t, "time, or comma-separated nondecreasing grid")->delimiter(',')->capture_default_str();
  ex->add_option("--start", ex_start, "initial 0/1 string for transient (default: empty)");
  ex->add_option("--starts", ex_starts, "start set for profile")->check(CLI::IsMember({"all", "extremal"}))->capture_default_str();
  add_run(ex, c);

  // current
  auto* cur = app.add_subcommand("current", "half-line current fluctuations at times t/(1-q)");
  std::vector<double> cur_t{500.0};
  std::string cur_ref = "auto";
  add_params(cur, c);
  cur->add_option("--t", cur_t, "comma-separated (1-q)-scaled times")->delimiter(',')->capture_default_str();
  cur->add_option("--reference", cur_ref, "limit law")->check(CLI::IsMember({"auto", "gaussian", "goe", "gse"}))->capture_default_str();
  add_trials(cur, c);
  add_run(cur, c);

  // profile
  auto* prof = app.add_subcommand("profile", "Monte Carlo hitting statistics at g_rho(c) against 1 - F_rho(c)");
  std::vector<double> prof_c{-2, -1, 0, 1, 2};
  add_params(prof, c);
  prof->add_option("--N", c.N, "segment length")->capture_default_str();
  prof->add_option("--c", prof_c, "comma-separated window positions")->delimiter(',')->capture_default_str();
  prof->add_option("--m", c.m, kThresholdHelp)->capture_default_str();
  add_trials(prof, c);
  add_run(prof, c);

  // duality
  auto* dual = app.add_subcommand("duality", "exact and sampled duality probabilities");
  int dual_S = 1;
  double dual_t = 1.0;
  add_params(dual, c);
  dual->add_option("--N", c.N, "segment length")->capture_default_str();
  dual->add_option("--S", dual_S, "padding sites")->capture_default_str();
  dual->add_option("--t", dual_t, "time")->capture_default_str();
  dual->add_option("--m", c.m, kThresholdHelp)->capture_default_str();
  add_trials(dual, c);
  add_run(dual, c);

  // mallows-tail
  auto* mt = app.add_subcommand("mallows-tail", "tail of the rightmost hole of a projected Mallows sample");
  int mt_a = 1, mt_b = 9, mt_k = 4;
  std::vector<double> mt_x{0, 1, 2, 3, 4};
  add_params(mt, c);
  mt->add_option("--a", mt_a, "interval start (0 = boundary interval)")->capture_default_str();
  mt->add_option("--b", mt_b, "interval end")->capture_default_str();
  mt->add_option("--k", mt_k, "hole count offset")->capture_default_str();
  mt->add_option("--x", mt_x, "comma-separated tail offsets")->delimiter(',')->capture_default_str();
  add_trials(mt, c);
  add_run(mt, c);

  // hecke-check
  auto* hc = app.add_subcommand("hecke-check", "exact Hecke algebra and Mallows identity suite");
  int hc_n = 3;
  std::string hc_q = "1/2", hc_r = "1/3";
  hc->add_option("--n", hc_n, "rank, 1..4 (Mallows identities use min(n, 3))")->capture_default_str();
  hc->add_option("--q", hc_q, "bulk parameter (rational)")->capture_default_str();
  hc->add_option("--r", hc_r, "boundary parameter (rational)")->capture_default_str();
  add_run(hc, c);

  // mixing-time
  auto* mix = app.add_subcommand("mixing-time", "t_mix(epsilon): exact bisection or Monte Carlo upper bound");
  double mix_eps = 0.25;
  double mix_step = 0.5;
  bool mix_mc = false;
  add_params(mix, c);
  mix->add_option("--N", c.N, "segment length")->capture_default_str();
  mix->add_option("--epsilon", mix_eps, "distance threshold")->capture_default_str();
  mix->add_option("--step", mix_step, "coarse time grid step")->capture_default_str();
  mix->add_flag("--mc", mix_mc, "Monte Carlo hitting-time bound instead of the exact profile");
  add_trials(mix, c);
  add_run(mix, c);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config_file(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      const SimMode mode = parse_sim_mode(sim_mode);
      SimSpec spec;
      spec.params = resolve_params(c, c.N);
      spec.mode = mode;
      spec.initial = parse_initial(sim_initial, mode);
      if (!spec.initial.empty() && mode != SimMode::halfspace) spec.params.N = static_cast<int>(spec.initial.size());
      spec.description = sim_desc == "hecke" ? ClockDescription::hecke : ClockDescription::independent;
      spec.t_end = sim_t;
      for (int i = 1; i <= sim_samples; ++i) spec.sample_times.push_back(sim_t * i / sim_samples);
      const Trajectory tr = simulate(spec, c.seed);
      nlohmann::json config;
      config["command"] = "simulate";
      config["params"] = to_json(spec.params);
      config["mode"] = sim_mode;
      config["initial"] = spec.initial;
      config["description"] = sim_desc;
      config["t"] = sim_t;
      config["samples"] = sim_samples;
      config["seed"] = c.seed;
      nlohmann::json summary;
      summary["version"] = ASEP_VERSION;
      summary["config"] = config;
      summary["terminal"] = tr.terminal;
      summary["entries"] = tr.entries;
      summary["exits"] = tr.exits;
      summary["events"] = tr.events;
      summary["window"] = tr.window;
      std::cout << "events " << tr.events << ", entries " << tr.entries << ", exits " << tr.exits << "\n";
      emit(c, config, {{"trajectory.csv", trajectory_csv(tr)}, {"summary.json", summary.dump(2) + "\n"}});
      return 0;
    }

    if (ex->parsed()) {
      const ModelParams p = resolve_params(c, c.N);
      nlohmann::json config;
      config["command"] = "exact";
      config["params"] = to_json(p);
      config["what"] = ex_what;
      config["t"] = ex_t;
      const GeneratorMatrix gen = build_generator(p, c.N);
      if (ex_what == "stationary") {
        const Distribution mu = stationary_nullspace(gen);
        std::cout << distribution_csv(mu);
        emit(c, config, {{"stationary.csv", distribution_csv(mu)}});
      } else if (ex_what == "profile") {
        config["starts"] = ex_starts;
        const TvProfile prof =
            exact_tv_profile(p, c.N, ex_t, ex_starts == "all" ? StartSet::all : StartSet::extremal);
        std::cout << profile_csv(prof);
        emit(c, config, {{"profile.csv", profile_csv(prof)}});
      } else {
        const Config start = ex_start.empty() ? Config::empty(c.N) : Config::parse(ex_start);
        if (start.size() != c.N) throw std::invalid_argument("--start must have N sites");
        config["start"] = start.to_string();
        std::vector<double> init(gen.dimension(), 0.0);
        init[start.code()] = 1.0;
        const auto path = transient_path(gen, init, ex_t);
        std::vector<std::pair<std::string, std::string>> files;
        for (std::size_t i = 0; i < path.size(); ++i) {
          const std::string csv = distribution_csv(Distribution::from_dense(c.N, path[i].distribution));
          std::cout << "# t = " << format_double(ex_t[i]) << ", truncation bound " << path[i].error_bound << "\n" << csv;
          files.emplace_back("transient_" + std::to_string(i) + ".csv", csv);
        }
        emit(c, config, files);
      }
      return 0;
    }

    if (cur->parsed()) {
      ExperimentConfig cfg = experiment_config(c);
      cfg.t_grid = cur_t;
      cfg.reference = cur_ref;
      emit_report(c, "current", cfg, current_fluctuations(cfg));
      return 0;
    }

    if (prof->parsed()) {
      ExperimentConfig cfg = experiment_config(c);
      cfg.c_grid = prof_c;
      emit_report(c, "profile", cfg, tv_profile_mc(cfg));
      return 0;
    }

    if (dual->parsed()) {
      ExperimentConfig cfg = experiment_config(c);
      cfg.S = dual_S;
      cfg.t = dual_t;
      StatReport rep = duality_experiment(cfg);
      if (c.N + dual_S <= kMaxHeckeModuleRank) {
        const DualityResult exact = duality_check(cfg.params, c.N, dual_S, effective_threshold(cfg), dual_t);
        rep.rows.push_back({"exact_left", dual_t, exact.p_left, 0.0, 0});
        rep.rows.push_back({"exact_right", dual_t, exact.p_right, 0.0, 0});
      } else {
        rep.notes.push_back("S + N above the exact cap; sampled values only");
      }
      emit_report(c, "duality", cfg, rep);
      return 0;
    }

    if (mt->parsed()) {
      ExperimentConfig cfg = experiment_config(c);
      cfg.params.N = mt_b;
      cfg.interval = Interval{mt_a, mt_b};
      cfg.k = mt_k;
      cfg.x_grid = mt_x;
      emit_report(c, "mallows-tail", cfg, mallows_tail(cfg));
      return 0;
    }

    if (hc->parsed()) {
      const Rational q = parse_rational(hc_q);
      const Rational r = parse_rational(hc_r);
      std::vector<CheckResult> results = hecke_identity_suite(hc_n, q, r, c.seed);
      const auto more = mallows_identity_suite(std::min(hc_n, 3), q, r);
      results.insert(results.end(), more.begin(), more.end());
      std::string text;
      for (const auto& res : results) {
        text += std::string(res.passed ? "PASS " : "FAIL ") + res.name;
        if (!res.detail.empty()) text += " (" + res.detail + ")";
        text += "\n";
      }
      std::cout << text;
      nlohmann::json config;
      config["command"] = "hecke-check";
      config["n"] = hc_n;
      config["q"] = to_string(q);
      config["r"] = to_string(r);
      config["seed"] = c.seed;
      emit(c, config, {{"checks.txt", text}});
      return all_passed(results) ? 0 : 1;
    }

    if (mix->parsed()) {
      ExperimentConfig cfg = experiment_config(c);
      cfg.epsilon = mix_eps;
      cfg.mixing_step = mix_step;
      cfg.exact = !mix_mc;
      const MixingResult res = mixing_time(cfg);
      nlohmann::json config = to_json(cfg);
      config["command"] = "mixing-time";
      nlohmann::json out;
      out["version"] = ASEP_VERSION;
      out["config"] = config;
      out["time"] = res.time;
      out["bound"] = res.bound;
      out["d_at"] = res.d_at;
      out["d_before"] = res.d_before;
      out["resolution"] = res.resolution;
      std::cout << "t_mix = " << format_double(res.time) << " (" << res.bound << ")\n";
      emit(c, config, {{"mixing.json", out.dump(2) + "\n"}});
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
