#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>

#include "asep/checks.hpp"
#include "asep/hecke.hpp"

using namespace asep;

namespace {

const Rational kQ(1, 2);
const Rational kR(1, 3);

HeckeParams<Rational> params(int n) { return {n, kQ, kR}; }

SignedPermutation gen(int n, int k) { return SignedPermutation::identity(n).right_generator(k); }

}  // namespace

TEST_CASE("basis elements") {
  const auto p = params(2);
  const ExactHecke id = identity_element(p);
  CHECK(id.size() == 1);
  CHECK(id.coefficient(SignedPermutation::identity(2)) == 1);
  CHECK(basis(p, gen(2, 0)).coefficient(gen(2, 0)) == 1);
  CHECK(id.coefficient_sum() == 1);
  CHECK_THROWS_AS(basis(p, SignedPermutation::identity(3)), std::invalid_argument);
}

TEST_CASE("generator rules") {
  const auto p = params(2);
  const ExactHecke id = identity_element(p);
  const ExactHecke s1 = basis(p, gen(2, 1));
  const ExactHecke s0 = basis(p, gen(2, 0));

  CHECK(mul_generator_right(id, 1) == s1);
  CHECK(mul_generator_right(s1, 1) == kQ * id + (1 - kQ) * s1);
  CHECK(mul_generator_right(s0, 0) == kR * id + (1 - kR) * s0);
  CHECK(mul_generator_left(1, id) == s1);
  CHECK(mul_generator_left(1, s1) == kQ * id + (1 - kQ) * s1);
  for (int k = 0; k < 2; ++k) CHECK(mul_generator_left(k, id) == mul_generator_right(id, k));
  CHECK_THROWS_AS(mul_generator_right(id, 2), std::out_of_range);
  CHECK_THROWS_AS(mul_generator_left(-1, id), std::out_of_range);
}

TEST_CASE("products") {
  const auto p = params(2);
  const ExactHecke s0 = basis(p, gen(2, 0));
  const ExactHecke s1 = basis(p, gen(2, 1));
  CHECK(s0 * s1 == basis(p, gen(2, 0).compose(gen(2, 1))));
  CHECK(s1 * s1 == kQ * identity_element(p) + (1 - kQ) * s1);

  const ExactHecke other(HeckeParams<Rational>{2, kQ, Rational(1, 5)});
  CHECK_THROWS_AS(mul(s0, other), std::invalid_argument);
  CHECK_THROWS_AS(s0 + other, std::invalid_argument);
}

TEST_CASE("identity suite passes on H(B_n), n <= 4") {
  for (int n = 1; n <= 4; ++n) {
    const auto results = hecke_identity_suite(n, kQ, kR, 3, n == 4 ? 25 : 100);
    for (const auto& r : results) {
      INFO(n << ": " << r.name << " " << r.detail);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("Mallows elements") {
  const ExactHecke m1 = mallows_element(Interval{0, 1}, params(1));
  const Rational rinv = 1 / kR;
  CHECK(m1.coefficient(SignedPermutation::identity(1)) == 1 / (1 + rinv));
  CHECK(m1.coefficient(gen(1, 0)) == rinv / (1 + rinv));

  const ExactHecke m12 = mallows_element(Interval{1, 2}, params(3));
  const Rational qinv = 1 / kQ;
  CHECK(m12.size() == 2);
  CHECK(m12.coefficient(SignedPermutation::identity(3)) == 1 / (1 + qinv));
  CHECK(m12.coefficient(gen(3, 1)) == qinv / (1 + qinv));

  for (const Interval iv : {Interval{0, 2}, Interval{0, 3}, Interval{1, 3}, Interval{2, 3}}) {
    const ExactHecke m = mallows_element(iv, params(3));
    CHECK(m.coefficient_sum() == 1);
    CHECK(is_distribution(m));
  }
  for (const auto& r : mallows_identity_suite(3, kQ, kR)) {
    INFO(r.name);
    CHECK(r.passed);
  }
  CHECK(involution(mallows_element(Interval{0, 2}, params(3))) == mallows_element(Interval{0, 2}, params(3)));
  CHECK(involution(mallows_element(Interval{1, 3}, params(3))) == mallows_element(Interval{1, 3}, params(3)));
}

TEST_CASE("enumeration caps") {
  CHECK(parabolic_elements(Interval{0, 6}, 6).size() == 46080);
  CHECK_THROWS_AS(parabolic_elements(Interval{0, 7}, 7), std::length_error);
  CHECK(parabolic_elements(Interval{1, 8}, 8).size() == 40320);
  CHECK_THROWS_AS(parabolic_elements(Interval{1, 9}, 9), std::length_error);
  CHECK_THROWS_AS(parabolic_elements(Interval{2, 2}, 3), std::invalid_argument);
  CHECK_THROWS_AS(parabolic_elements(Interval{0, 4}, 3), std::invalid_argument);
}

TEST_CASE("normalisation by summation is not the closed product form") {
  // Z over B_1 is 1 + 1/r; the product (1 - q^{-1})/(1 - q) (1 + r) is
  // negative for q < 1. Recorded here, deliberately not used.
  const Rational direct = 1 + 1 / kR;
  const Rational product = (1 - 1 / kQ) / (1 - kQ) * (1 + kR);
  MESSAGE("direct Z = " << to_string(direct) << ", closed product = " << to_string(product));
  CHECK(direct != product);
}

TEST_CASE("involution") {
  const auto p = params(2);
  CHECK(involution(basis(p, gen(2, 0))) == basis(p, gen(2, 0)));
  const auto s01 = gen(2, 0).compose(gen(2, 1));
  const auto s10 = gen(2, 1).compose(gen(2, 0));
  CHECK(involution(basis(p, s01)) == basis(p, s10));
  const ExactHecke x = Rational(2, 3) * basis(p, s01) + Rational(1, 3) * basis(p, gen(2, 1));
  CHECK(involution(involution(x)) == x);
}

TEST_CASE("distribution predicate") {
  const auto p = params(2);
  CHECK(is_distribution(identity_element(p)));
  CHECK_FALSE(is_distribution(Rational(2) * identity_element(p)));
  CHECK(is_distribution(kQ * identity_element(p) + (1 - kQ) * basis(p, gen(2, 1))));
  CHECK_FALSE(is_distribution(Rational(3, 2) * identity_element(p) - Rational(1, 2) * basis(p, gen(2, 1))));
  const FloatHecke f = convert<double>(kQ * identity_element(p) + (1 - kQ) * basis(p, gen(2, 1)));
  CHECK(is_distribution(f));
}

TEST_CASE("sampling frequencies") {
  const HeckeParams<double> fp{2, 0.5, 1.0 / 3.0};
  FloatHecke half(fp);
  half.add_term(SignedPermutation::identity(2), 0.5);
  half.add_term(gen(2, 0), 0.5);
  StreamRng rng(2024, 1);
  const int draws = 100000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) hits += sample(half, rng) == gen(2, 0);
  CHECK(std::abs(hits / double(draws) - 0.5) < 0.01);

  StreamRng one(1, 1);
  CHECK(sample(identity_element(fp), one) == SignedPermutation::identity(2));
  CHECK_THROWS_AS(sample(2.0 * identity_element(fp), one), std::invalid_argument);

  const FloatHecke m = convert<double>(mallows_element(Interval{0, 2}, params(2)));
  std::map<SignedPermutation, int> freq;
  for (int i = 0; i < draws; ++i) ++freq[sample(m, rng)];
  for (const auto& [w, c] : m.terms()) {
    const double se = std::sqrt(c * (1 - c) / draws);
    INFO(w.to_string());
    CHECK(std::abs(freq[w] / double(draws) - c) < 3 * se);
  }
}

TEST_CASE("insertion sampler matches the enumerated Mallows law") {
  const int draws = 200000;
  for (const Interval iv : {Interval{0, 3}, Interval{1, 3}, Interval{2, 4}}) {
    const int n = iv.b;
    const ExactHecke exact = mallows_element(iv, params(n));
    StreamRng rng(99, static_cast<std::uint64_t>(iv.a * 10 + iv.b));
    std::map<SignedPermutation, int> freq;
    for (int i = 0; i < draws; ++i) ++freq[sample_mallows(iv, n, 0.5, 1.0 / 3.0, rng)];
    for (const auto& [w, c] : freq) CHECK(exact.coefficient(w) != 0);
    for (const auto& [w, cq] : exact.terms()) {
      const double c = to_double(cq);
      const double se = std::sqrt(c * (1 - c) / draws);
      INFO(w.to_string());
      CHECK(std::abs(freq[w] / double(draws) - c) <= 4.5 * se + 1e-12);
    }
  }
}

TEST_CASE("random steps realise the generator rules") {
  const double q = 0.5, r = 1.0 / 3.0;
  for (const auto& w : all_signed_permutations(3)) {
    for (int k = 0; k < 3; ++k) {
      const double qk = k == 0 ? r : q;
      const FloatHecke rule = mul_generator_right(basis(HeckeParams<double>{3, q, r}, w), k);
      // u below q_k moves, above stays
      const auto moved = random_right_step(w, k, qk, 0.01);
      const auto stayed = random_right_step(w, k, qk, 0.99);
      CHECK(rule.coefficient(moved) > 0);
      CHECK(rule.coefficient(stayed) > 0);
      const FloatHecke left = mul_generator_left(k, basis(HeckeParams<double>{3, q, r}, w));
      CHECK(left.coefficient(random_left_step(k, w, qk, 0.01)) > 0);
      CHECK(left.coefficient(random_left_step(k, w, qk, 0.99)) > 0);
    }
  }
}

TEST_CASE("sampled products follow the exact product") {
  const HeckeParams<double> fp{3, 0.5, 1.0 / 3.0};
  const auto u = SignedPermutation::parse("(2,-1,3)");
  const auto w = SignedPermutation::parse("(-3,1,2)");
  const FloatHecke exact = basis(fp, u) * basis(fp, w);
  StreamRng rng(5, 5);
  const int draws = 100000;
  std::map<SignedPermutation, int> right, left;
  for (int i = 0; i < draws; ++i) {
    ++right[sample_right_product(u, w, 0.5, 1.0 / 3.0, rng)];
    ++left[sample_left_product(u, w, 0.5, 1.0 / 3.0, rng)];
  }
  for (const auto& [x, c] : exact.terms()) {
    const double se = std::sqrt(c * (1 - c) / draws);
    CHECK(std::abs(right[x] / double(draws) - c) <= 4.5 * se + 1e-12);
    CHECK(std::abs(left[x] / double(draws) - c) <= 4.5 * se + 1e-12);
  }
}

TEST_CASE("debug serialisation is canonical") {
  const auto p = params(2);
  const ExactHecke x = Rational(1, 3) * basis(p, gen(2, 1)) + Rational(2, 3) * identity_element(p);
  CHECK(to_debug_string(x) == "2/3  (1,2)\n1/3  (2,1)\n");
  const FloatHecke f = convert<double>(x);
  CHECK(max_abs_difference(f, convert<double>(x)) == 0.0);
  CHECK(to_debug_string(f).find("0.66666666666666663  (1,2)") == 0);
}
