#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "asep/configurations.hpp"
#include "asep/signed_perm.hpp"

using namespace asep;

TEST_CASE("rightmost empty site") {
  CHECK(rightmost_empty(Config::parse("0011")) == 2);
  CHECK(rightmost_empty(Config::parse("1111")) == 0);
  CHECK(rightmost_empty(Config::parse("1110")) == 4);
  CHECK(rightmost_empty(Config::empty(5)) == 5);
  CHECK(in_A(Config::parse("0011"), 2));
  CHECK_FALSE(in_A(Config::parse("0011"), 3));
  CHECK_FALSE(in_A(Config::parse("1111"), 1));
  CHECK_THROWS_AS(in_A(Config::parse("1111"), 0), std::invalid_argument);
}

TEST_CASE("config round trips") {
  const Config c = Config::parse("10110");
  CHECK(c.size() == 5);
  CHECK(c(1) == 1);
  CHECK(c(2) == 0);
  CHECK(c.to_string() == "10110");
  CHECK(c.code() == 0b01101);
  CHECK(Config::from_code(c.code(), 5) == c);
  CHECK_THROWS(Config::parse("10a"));
  CHECK(current_from_empty(c) == 3);
}

TEST_CASE("thresholds") {
  CHECK(default_threshold(100) == doctest::Approx(std::pow(std::log(100.0), 1.0 / 16)));
  CHECK(default_integer_threshold(1) == 1);
  CHECK(default_integer_threshold(2) == 1);
  CHECK(default_integer_threshold(100) == 2);
  CHECK(default_integer_threshold(1000000) == 2);
}

TEST_CASE("partial order examples") {
  CHECK(partial_order_geq(Config::parse("0000"), Config::parse("1111")));
  CHECK_FALSE(partial_order_geq(Config::parse("1111"), Config::parse("0000")));
  // moving a particle left moves the configuration up
  CHECK(partial_order_geq(Config::parse("1100"), Config::parse("0110")));
  CHECK_FALSE(partial_order_geq(Config::parse("0110"), Config::parse("1100")));
  // different lengths: extra empty sites on the right only help
  CHECK(partial_order_geq(Config::parse("11100"), Config::parse("111")));
  CHECK_FALSE(partial_order_geq(Config::parse("111"), Config::parse("11100")));
}

TEST_CASE("partial order is reflexive, antisymmetric and transitive on {0,1}^5") {
  const int M = 5;
  std::vector<Config> all;
  for (std::uint64_t c = 0; c < (1u << M); ++c) all.push_back(Config::from_code(c, M));
  for (const auto& a : all) {
    CHECK(partial_order_geq(a, a));
    for (const auto& b : all) {
      if (partial_order_geq(a, b) && partial_order_geq(b, a)) CHECK(a == b);
      for (const auto& c : all) {
        if (partial_order_geq(a, b) && partial_order_geq(b, c)) CHECK(partial_order_geq(a, c));
      }
    }
  }
}

TEST_CASE("R is monotone in the partial order") {
  for (int M = 1; M <= 6; ++M) {
    for (std::uint64_t x = 0; x < (1u << M); ++x) {
      for (std::uint64_t y = 0; y < (1u << M); ++y) {
        const Config a = Config::from_code(x, M), b = Config::from_code(y, M);
        if (partial_order_geq(a, b)) CHECK(rightmost_empty(a) >= rightmost_empty(b));
      }
    }
  }
}

TEST_CASE("colored configurations") {
  const ColoredConfig z = ColoredConfig::parse("1,2,3,inf");
  CHECK(z.size() == 4);
  CHECK(z.to_string() == "1,2,3,inf");
  CHECK(project_multispecies(z) == Config::parse("1100"));
  CHECK(ColoredConfig::from_labels({4, 1}) == ColoredConfig::parse("inf,1"));
  CHECK_THROWS(ColoredConfig::parse("1,5"));
  CHECK_THROWS(ColoredConfig::from_labels({0}));
}

TEST_CASE("multispecies projection agrees with the particle-hole colouring") {
  // species 1 and 2 are exactly the negative values under four_species
  for (int K = 1; K <= 4; ++K) {
    for (const auto& pi : all_signed_permutations(3)) {
      const auto labels = project(pi, ColorMap::four_species(3, K));
      const Config eta = project_multispecies(ColoredConfig::from_labels(labels));
      const auto ph = project(pi, ColorMap::particle_hole(3));
      for (int x = 1; x <= 3; ++x) CHECK(eta(x) == ph[x - 1]);
    }
  }
}

namespace {

// max over all subsets A of p(A) - p'(A), by enumeration
double subset_oracle(const std::vector<double>& p, const std::vector<double>& pp) {
  const std::size_t n = p.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) d += p[i] - pp[i];
    }
    best = std::max(best, d);
  }
  return best;
}

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = e(gen));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("total variation matches the subset maximum") {
  std::mt19937_64 gen(7);
  for (int M = 1; M <= 3; ++M) {
    const std::size_t states = std::size_t(1) << M;
    for (int rep = 0; rep < 50; ++rep) {
      const auto p = random_simplex(gen, states);
      const auto pp = random_simplex(gen, states);
      const Distribution a = Distribution::from_dense(M, p), b = Distribution::from_dense(M, pp);
      const TvResult tv = tv_distance(a, b);
      CHECK(tv.distance == doctest::Approx(subset_oracle(p, pp)).epsilon(1e-12));
      CHECK(tv_distance(p, pp) == doctest::Approx(tv.distance).epsilon(1e-12));
      double gain = 0.0;
      for (const auto& c : tv.maximizing_event) gain += a.probability(c) - b.probability(c);
      CHECK(gain == doctest::Approx(tv.distance).epsilon(1e-12));
    }
  }
  // 12 states through the vector overload
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = random_simplex(gen, 12), pp = random_simplex(gen, 12);
    CHECK(tv_distance(p, pp) == doctest::Approx(subset_oracle(p, pp)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tv_distance(Distribution(2), Distribution(3)), std::invalid_argument);
  const Config e = Config::empty(2), f = Config::full(2);
  CHECK(tv_distance(Distribution::point_mass(e), Distribution::point_mass(f)).distance == 1.0);
}

TEST_CASE("sparse distributions above the dense limit") {
  const int M = 24;
  Distribution d(M);
  CHECK_FALSE(d.dense());
  d.add(Config::empty(M), 0.25);
  d.add(Config::full(M), 0.75);
  CHECK(d.total() == 1.0);
  CHECK(d.probability(Config::full(M)) == 0.75);
  Distribution e = Distribution::point_mass(Config::full(M));
  CHECK(tv_distance(d, e).distance == doctest::Approx(0.25));
}
