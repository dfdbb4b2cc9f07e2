#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "asep/model_params.hpp"

using namespace asep;

namespace {

// bisection oracle for the positive root of a k^2 - b k - g
double positive_root(double a, double b, double g) {
  auto f = [&](double k) { return a * k * k - b * k - g; };
  double lo = 0.0, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(make_params(0.5, 1.0, 0.25, 4));
  CHECK_THROWS_AS(make_params(0.0, 1.0, 0.25, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1.0, 1.0, 0.25, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_params(0.5, 0.25, 0.25, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_params(0.5, 1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_params(0.5, 1.0, 0.25, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_exact_params(Rational(1, 2), Rational(1, 5), Rational(1, 4), 3), std::invalid_argument);
}

TEST_CASE("effective density examples") {
  const PhaseInfo goe = effective_density(make_params(0.5, 0.5, 0.25, 4));
  CHECK(goe.kappa_plus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(goe.rho == 0.5);
  CHECK(goe.phase == Phase::goe);

  const PhaseInfo gse = effective_density(make_params(0.5, 1.0, 0.25, 4));
  CHECK(gse.kappa_plus == doctest::Approx(0.390388).epsilon(1e-6));
  CHECK(gse.rho == doctest::Approx(0.719223).epsilon(1e-6));
  CHECK(gse.phase == Phase::gse);
  CHECK(gse.kappa_plus == doctest::Approx(positive_root(1.0, 1.0 - 0.5 + 0.25 - 1.0, 0.25)).epsilon(1e-13));

  const PhaseInfo gauss = effective_density(make_params(0.2, 0.25, 0.15, 4));
  CHECK(gauss.kappa_plus == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(gauss.rho == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(gauss.phase == Phase::gauss);
}

TEST_CASE("kappa_plus solves the quadratic for random parameters") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double q = 0.01 + 0.98 * u(gen);
    const double gamma = 0.01 + 2.0 * u(gen);
    const double alpha = gamma + 0.001 + 3.0 * u(gen);
    const PhaseInfo info = effective_density(make_params(q, alpha, gamma, 3));
    const double k = info.kappa_plus;
    const double b = 1.0 - q + gamma - alpha;
    const double scale = alpha * k * k + std::abs(b) * k + gamma;
    worst = std::max(worst, std::abs(alpha * k * k - b * k - gamma) / scale);
    REQUIRE(k > 0.0);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("rho = 1/2 is decided exactly for rational input") {
  // 2(alpha - gamma) = 1 - q
  const ModelParams p = make_exact_params(Rational(1, 10), Rational(7, 10), Rational(1, 4), 5);
  CHECK(effective_density(p).phase == Phase::goe);
  const ModelParams above = make_exact_params(Rational(1, 10), Rational(7001, 10000), Rational(1, 4), 5);
  CHECK(effective_density(above).phase == Phase::gse);
  const ModelParams below = make_exact_params(Rational(1, 10), Rational(6999, 10000), Rational(1, 4), 5);
  CHECK(effective_density(below).phase == Phase::gauss);
}

TEST_CASE("time function") {
  // q = 0 lies outside the model range but the formula is still defined
  ModelParams p{0.0, 1.0, 0.25, 8, std::nullopt};
  const PhaseInfo kpz{0.39, 0.72, Phase::gse};
  CHECK(phase_time(kpz, p, 0.0) == doctest::Approx(32.0));
  CHECK(phase_time(kpz, p, 1.0) == doctest::Approx(32.0 + std::cbrt(2.0)).epsilon(1e-12));
  CHECK(phase_time(PhaseInfo{1.0, 0.5, Phase::goe}, p, 1.0) == doctest::Approx(33.2599).epsilon(1e-5));

  ModelParams p16{0.0, 1.0, 0.25, 16, std::nullopt};
  const PhaseInfo low{3.0, 0.25, Phase::gauss};
  CHECK(phase_time(low, p16, 0.0) == doctest::Approx(85.3333).epsilon(1e-5));
  CHECK_THROWS_AS(phase_time(PhaseInfo{1.0, 0.5, Phase::gauss}, p16, 0.0), std::invalid_argument);

  // 1/(1-q) prefactor, monotone in c, g(0) >= N/(1-q)
  const ModelParams half = make_params(0.5, 1.0, 0.25, 10);
  const PhaseInfo info = effective_density(half);
  CHECK(phase_time(info, half, 0.0) == doctest::Approx(80.0));
  double prev = -1e300;
  for (double c = -5; c <= 5; c += 0.5) {
    const double g = phase_time(info, half, c);
    CHECK(g > prev);
    prev = g;
  }
  const ModelParams slow = make_params(0.2, 0.25, 0.15, 10);
  CHECK(phase_time(effective_density(slow), slow, 0.0) >= 10.0 / 0.8);

  TimeFunctionConstants k;
  k.gse_speed = 3.0;
  CHECK(phase_time(info, half, 0.0, k) == doctest::Approx(60.0));
}

TEST_CASE("drift statistics") {
  CHECK(drift_stats(0.25).mu == doctest::Approx(0.1875));
  CHECK(drift_stats(0.25).sigma_sq == doctest::Approx(0.09375));
  CHECK(drift_stats(0.5).sigma_sq == 0.0);
  CHECK_THROWS_AS(drift_stats(0.0), std::invalid_argument);
  CHECK_THROWS_AS(drift_stats(1.0), std::invalid_argument);
}

TEST_CASE("reference CDFs") {
  const ReferenceCdf g = ReferenceCdf::gaussian();
  CHECK(g(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(g(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));

  const ReferenceCdf t = ReferenceCdf::from_table({{0.0, 0.7}, {1.0, 0.9}});
  CHECK(t(0.5) == doctest::Approx(0.8));
  CHECK(t(0.0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(t(1.5), std::out_of_range);
  CHECK_THROWS_AS(t(-0.1), std::out_of_range);
  CHECK(t.clamped(5.0) == 1.0);
  CHECK(t.clamped(-5.0) == 0.0);

  CHECK_THROWS_AS(ReferenceCdf::from_table({{0.0, 0.7}, {0.0, 0.9}}), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceCdf::from_table({{0.0, 0.7}, {1.0, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceCdf::from_table({{0.0, 0.7}, {1.0, 1.2}}), std::invalid_argument);
}

TEST_CASE("Tracy-Widom tables load and have the known means") {
  for (Phase ph : {Phase::goe, Phase::gse}) {
    const ReferenceCdf f = load_tracy_widom(ph);
    double prev = 0.0;
    double mean = f.lower();
    // E X = lower + integral of (1 - F) minus integral of F below 0 handled by
    // integrating s dF over the grid
    mean = 0.0;
    const double h = 0.01;
    for (double s = f.lower(); s + h <= f.upper() + 1e-12; s += h) {
      const double a = f(s), b = f(std::min(s + h, f.upper()));
      CHECK(b >= a);
      mean += (s + 0.5 * h) * (b - a);
      prev = b;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-6));
    if (ph == Phase::goe) CHECK(mean == doctest::Approx(-1.2065335745820).epsilon(2e-4));
    // half-line convention: the beta = 4 law stretched by sqrt(2)
    else CHECK(mean == doctest::Approx(-2.306884 * std::sqrt(2.0)).epsilon(2e-4));
  }
  CHECK(load_tracy_widom(Phase::gauss).kind() == ReferenceCdf::Kind::gaussian);
  CHECK_THROWS(ReferenceCdf::load("/nonexistent/table.txt"));
}
