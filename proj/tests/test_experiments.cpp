#include <doctest.h>

#include <stdexcept>

#include <atomic>
#include <cmath>

#include "asep/configurations.hpp"
#include "asep/exact_engine.hpp"
#include "asep/experiments.hpp"
#include "asep/report.hpp"

using namespace asep;

namespace {

ExperimentConfig base(int N, long trials) {
  ExperimentConfig cfg;
  cfg.params = make_params(0.5, 1.0, 0.25, N);
  cfg.trials = trials;
  cfg.master_seed = 42;
  return cfg;
}

std::string dump(const StatReport& r) { return to_json(r).dump(); }

}  // namespace

TEST_CASE("threshold and helpers") {
  ExperimentConfig cfg = base(100, 10);
  CHECK(effective_threshold(cfg) == 2);
  cfg.m = 5;
  CHECK(effective_threshold(cfg) == 5);

  std::vector<long> slots(101, 0);
  std::atomic<long> calls{0};
  parallel_for(101, 4, [&](long i) {
    slots[static_cast<std::size_t>(i)] = i * i;
    ++calls;
  });
  CHECK(calls == 101);
  for (long i = 0; i <= 100; ++i) CHECK(slots[static_cast<std::size_t>(i)] == i * i);
  CHECK_THROWS_AS(parallel_for(5, 2, [](long i) {
                    if (i == 3) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("KS distance") {
  const auto uniform = [](double s) { return std::clamp(s, 0.0, 1.0); };
  CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5));
  CHECK(ks_distance({0.25, 0.75}, uniform) == doctest::Approx(0.25));
  // ties jump together
  CHECK(ks_distance({0.5, 0.5}, uniform) == doctest::Approx(0.5));
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  CHECK(ks_distance(grid, uniform) == doctest::Approx(0.0005));
  CHECK(ks_distance({}, uniform) == 0.0);
}

TEST_CASE("Mallows projection") {
  const auto pi = SignedPermutation::parse("(2,-1,-3)");
  CHECK(mallows_projection(pi, Interval{0, 3}, 0) == std::vector<int>{0, 1, 1});
  CHECK(mallows_projection(pi, Interval{0, 3}, 1) == std::vector<int>{0, 1, 1});
  CHECK(mallows_projection(pi, Interval{0, 3}, 2) == std::vector<int>{0, 0, 1});
  CHECK(mallows_projection(pi, Interval{0, 3}, -2) == std::vector<int>{1, 1, 1});
  CHECK(mallows_projection(pi, Interval{1, 3}, 1) == std::vector<int>{0, 1, 1});
  CHECK(mallows_projection(pi, Interval{1, 3}, 2) == std::vector<int>{0, 0, 1});
  CHECK(mallows_projection(pi, Interval{2, 3}, 0) == std::vector<int>{1, 1});
  CHECK(mallows_projection(pi, Interval{1, 3}, 3) == std::vector<int>{0, 0, 0});
  CHECK_THROWS_AS(mallows_projection(pi, Interval{1, 3}, 4), std::invalid_argument);
  CHECK_THROWS_AS(mallows_projection(pi, Interval{0, 3}, 4), std::invalid_argument);
}

TEST_CASE("Mallows tail on [0,b] matches the product stationary law") {
  ExperimentConfig cfg = base(8, 20000);
  cfg.interval = Interval{0, 8};
  cfg.k = 0;
  cfg.x_grid = {1, 2, 3, 4};
  const StatReport rep = mallows_tail(cfg);
  // R >= x iff some site in [x, 8] is empty
  for (double x : cfg.x_grid) {
    double all = 1.0;
    for (int j = static_cast<int>(x); j <= 8; ++j) all *= stationary_site_density(cfg.params, j);
    const StatRow& row = rep.row("tail", x);
    CHECK(std::abs(row.estimate - (1 - all)) < 4 * row.std_error + 1e-12);
  }
  double all = 1.0;
  for (int j = 1; j <= 8; ++j) all *= stationary_site_density(cfg.params, j);
  CHECK(std::abs(rep.scalars.at("all_occupied") - all) < 4 * rep.scalars.at("all_occupied_se"));
  CHECK(rep.scalars.count("slope") == 1);
  CHECK(rep.scalars.at("slope_lo") <= rep.scalars.at("slope"));
}

TEST_CASE("Mallows tail decays geometrically in the bulk") {
  ExperimentConfig cfg = base(40, 20000);
  cfg.interval = Interval{1, 40};
  cfg.k = 20;
  cfg.x_grid = {0, 1, 2, 3, 4, 5, 6};
  const StatReport rep = mallows_tail(cfg);
  CHECK(rep.scalars.at("slope") < 0);
  for (std::size_t i = 1; i < cfg.x_grid.size(); ++i) {
    CHECK(rep.row("tail", cfg.x_grid[i]).estimate <= rep.row("tail", cfg.x_grid[i - 1]).estimate);
  }
  CHECK(rep.scalars.count("all_occupied") == 0);
}

TEST_CASE("Monte Carlo profile: pathwise consistency, lower bound, determinism") {
  ExperimentConfig cfg = base(6, 4000);
  cfg.c_grid = {-2.0, 0.0, 2.0};
  cfg.m = 2;
  const StatReport rep = tv_profile_mc(cfg);
  const double mu_a = rep.scalars.at("mu_A");
  CHECK(mu_a == doctest::Approx(stationary_mass_of_A(cfg.params, 6, 2)));
  for (double c : cfg.c_grid) {
    const double t = rep.row("time", c).estimate;
    const StatRow& hit = rep.row("hit_A", c);
    // leaving A before t is forced whenever eta_t is outside A
    CHECK(rep.row("exit", c).estimate + hit.estimate >= 1.0 - 1e-12);
    CHECK(rep.row("lower_bound", c).estimate == doctest::Approx(hit.estimate - mu_a));
    const double d = exact_tv_profile(cfg.params, 6, {t}, StartSet::all).distance[0];
    CHECK(rep.row("lower_bound", c).estimate <= d + 4 * hit.std_error);
    // from empty, P(eta_t in A) is exact from the transient law
    const GeneratorMatrix gen = build_generator(cfg.params, 6);
    std::vector<double> init(gen.dimension(), 0.0);
    init[0] = 1.0;
    const auto law = transient_distribution(gen, init, t).distribution;
    double pa = 0.0;
    for (std::size_t s = 0; s < law.size(); ++s) pa += in_A(Config::from_code(s, 6), 2) ? law[s] : 0.0;
    CHECK(std::abs(hit.estimate - pa) < 4 * hit.std_error + 1e-9);
  }
  ExperimentConfig par = cfg;
  par.workers = 3;
  CHECK(dump(tv_profile_mc(par)) == dump(rep));
}

TEST_CASE("current in the Gaussian phase follows the drift") {
  ExperimentConfig cfg = base(1, 400);
  cfg.params = make_params(0.1, 0.25, 0.075, 1);
  cfg.t_grid = {0.0, 50.0, 200.0};
  const StatReport rep = current_fluctuations(cfg);
  CHECK(rep.scalars.at("rho") == doctest::Approx(0.25));
  CHECK(rep.row("mean_current", 0.0).estimate == 0.0);
  const StatRow& m = rep.row("mean_current", 200.0);
  const double target = rep.row("drift_target", 200.0).estimate;
  CHECK(target == doctest::Approx(0.1875 * 200));
  // boundary layer shifts the mean by O(1)
  CHECK(std::abs(m.estimate - target) < 4 * m.std_error + 3.0);
  CHECK(rep.row("ks", 200.0).estimate < 0.15);
  CHECK_THROWS_AS(rep.row("ks", 0.0), std::out_of_range);

  cfg.trials = 10;
  const StatReport few = current_fluctuations(cfg);
  CHECK(few.notes.front().find("insufficient sampling") == 0);
}

TEST_CASE("mixing time: exact bisection and Monte Carlo bound") {
  ExperimentConfig cfg = base(4, 2000);
  cfg.epsilon = 0.25;
  cfg.mixing_step = 0.5;
  const MixingResult ex = mixing_time(cfg);
  CHECK(ex.bound == "exact-all");
  CHECK(ex.d_at <= 0.25);
  CHECK(ex.d_before > 0.25);
  CHECK(ex.resolution <= 0.5 / 64 + 1e-12);
  const auto prof = exact_tv_profile(cfg.params, 4, {ex.time - ex.resolution, ex.time}, StartSet::all);
  CHECK(prof.distance[0] > 0.25);
  CHECK(prof.distance[1] <= 0.25);

  cfg.exact = false;
  const MixingResult mc = mixing_time(cfg);
  CHECK(mc.bound == "mc-upper");
  CHECK(mc.time >= ex.time * 0.8);
  CHECK(mc.d_at <= 0.25);
}

TEST_CASE("duality: sampled pipelines agree with the exact value") {
  ExperimentConfig cfg = base(2, 20000);
  cfg.S = 1;
  cfg.m = 2;
  cfg.t = 0.8;
  const StatReport rep = duality_experiment(cfg);
  const DualityResult exact = duality_check(cfg.params, 2, 1, 2, 0.8);
  const StatRow& c = rep.row("C", 0.8);
  const StatRow& d = rep.row("D", 0.8);
  CHECK(std::abs(c.estimate - exact.p_left) < 4 * c.std_error + 1e-9);
  CHECK(std::abs(d.estimate - exact.p_right) < 4 * d.std_error + 1e-9);
  CHECK(rep.scalars.at("difference_lo") <= rep.scalars.at("difference_hi"));
  CHECK(dump(duality_experiment(cfg)) == dump(rep));
}

TEST_CASE("left walk from the identity projects to the ASEP law") {
  const ModelParams p = make_params(0.5, 1.0, 0.25, 3);
  const HeckeExpectation e = hecke_expectation(p, 3, 1.2);
  const long trials = 60000;
  std::vector<double> freq(8, 0.0);
  for (long i = 0; i < trials; ++i) {
    StreamRng rng(3, static_cast<std::uint64_t>(i));
    const auto w = sample_left_walk(SignedPermutation::identity(3), p, 1.2, rng);
    std::size_t code = 0;
    for (int x = 1; x <= 3; ++x) code |= std::size_t(w(x) < 0) << (x - 1);
    freq[code] += 1.0 / trials;
  }
  CHECK(tv_distance(freq, project_particle_hole(e.value).values()) < 0.012);
}
