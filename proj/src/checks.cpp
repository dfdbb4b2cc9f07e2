#include "asep/checks.hpp"

#include <functional>
#include <sstream>

#include "asep/hecke.hpp"
#include "asep/rng.hpp"

namespace asep {

namespace {

using P = HeckeParams<Rational>;

// All reduced words of w, built right to left along right descents; stops
// after `cap` words.
void reduced_words(const SignedPermutation& w, std::vector<int>& suffix, std::vector<std::vector<int>>& out,
                   std::size_t cap) {
  if (out.size() >= cap) return;
  if (w.length().l == 0) {
    out.emplace_back(suffix.rbegin(), suffix.rend());
    return;
  }
  for (int k = 0; k < w.size(); ++k) {
    if (!w.has_right_descent(k)) continue;
    suffix.push_back(k);
    reduced_words(w.right_generator(k), suffix, out, cap);
    suffix.pop_back();
  }
}

ExactHecke random_element(const P& p, const std::vector<SignedPermutation>& group, StreamRng& rng) {
  ExactHecke x(p);
  const int terms = 1 + static_cast<int>(rng.below(4));
  for (int i = 0; i < terms; ++i) {
    const auto& w = group[rng.below(group.size())];
    const long num = static_cast<long>(rng.below(11)) - 5;
    const long den = 1 + static_cast<long>(rng.below(6));
    Rational c(num, den);
    c.canonicalize();
    x.add_term(w, c);
  }
  return x;
}

CheckResult make(std::string name, bool ok, std::string detail = {}) { return {std::move(name), ok, std::move(detail)}; }

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::vector<CheckResult> hecke_identity_suite(int n, const Rational& q, const Rational& r, std::uint64_t seed,
                                              int triples) {
  if (n < 1 || n > 4) throw std::invalid_argument("identity suite supports 1 <= n <= 4");
  const P p{n, q, r};
  std::vector<CheckResult> out;
  const ExactHecke one = identity_element(p);
  auto gen = [&](int k) { return basis(p, SignedPermutation::identity(n).right_generator(k)); };

  // (T_k + q_k)(T_k - 1) = 0
  for (int k = 0; k < n; ++k) {
    const ExactHecke Tk = gen(k);
    const ExactHecke lhs = (Tk + p.q_k(k) * one) * (Tk - one);
    out.push_back(make("quadratic relation T_" + std::to_string(k), lhs.empty(),
                       lhs.empty() ? "" : to_debug_string(lhs)));
  }

  // braid relations
  bool braid = true;
  std::string braid_detail;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const ExactHecke a = gen(i), b = gen(j);
      ExactHecke lhs(p), rhs(p);
      if (i == 0 && j == 1) {
        lhs = a * b * a * b;
        rhs = b * a * b * a;
      } else if (j == i + 1) {
        lhs = a * b * a;
        rhs = b * a * b;
      } else {
        lhs = a * b;
        rhs = b * a;
      }
      if (!(lhs == rhs)) {
        braid = false;
        braid_detail += "T_" + std::to_string(i) + ",T_" + std::to_string(j) + " ";
      }
    }
  }
  out.push_back(make("braid relations", braid, braid_detail));

  const std::vector<SignedPermutation> group = all_signed_permutations(n);

  // left generator rule equals multiplication by the generator basis element
  bool left_ok = true;
  for (const auto& w : group) {
    for (int k = 0; k < n; ++k) {
      const ExactHecke Tw = basis(p, w);
      if (!(mul_generator_left(k, Tw) == gen(k) * Tw)) left_ok = false;
    }
  }
  out.push_back(make("left rule equals T_k * T_w", left_ok));

  // T_u T_w = T_{uw} when lengths add
  bool additive = true;
  for (const auto& u : group) {
    for (const auto& w : group) {
      const SignedPermutation uw = u.compose(w);
      if (uw.length().l == u.length().l + w.length().l) {
        if (!(basis(p, u) * basis(p, w) == basis(p, uw))) additive = false;
      }
    }
  }
  out.push_back(make("T_u T_w = T_uw on length-additive pairs", additive));

  // reduced-word independence
  const std::size_t cap = n <= 3 ? std::size_t(-1) : 64;
  bool words_ok = true;
  std::size_t word_count = 0;
  for (const auto& w : group) {
    std::vector<std::vector<int>> words;
    std::vector<int> suffix;
    reduced_words(w, suffix, words, cap);
    for (const auto& word : words) {
      ++word_count;
      if (from_generators(n, word) != w || !(mul_word_right(one, word) == basis(p, w))) words_ok = false;
    }
  }
  out.push_back(make(std::string("reduced-word independence") + (n <= 3 ? " (exhaustive)" : " (capped)"), words_ok,
                     std::to_string(word_count) + " words"));

  // associativity, anti-homomorphism, sum preservation on random elements
  StreamRng rng(seed, 0x6865636bULL);
  bool assoc = true;
  bool anti = true;
  bool sums = true;
  for (int i = 0; i < triples; ++i) {
    const ExactHecke x = random_element(p, group, rng);
    const ExactHecke y = random_element(p, group, rng);
    const ExactHecke z = random_element(p, group, rng);
    if (!((x * y) * z == x * (y * z))) assoc = false;
    if (!(involution(x * y) == involution(y) * involution(x))) anti = false;
    if ((x * y).coefficient_sum() != x.coefficient_sum() * y.coefficient_sum()) sums = false;
  }
  out.push_back(make("associativity on " + std::to_string(triples) + " random triples", assoc));
  out.push_back(make("anti-homomorphism of the involution", anti));
  out.push_back(make("coefficient sums multiply", sums));
  return out;
}

std::vector<CheckResult> mallows_identity_suite(int n, const Rational& q, const Rational& r) {
  if (n < 1 || n > 3) throw std::invalid_argument("Mallows suite supports 1 <= n <= 3");
  const P p{n, q, r};
  std::vector<CheckResult> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      if (a > 0 && b == a) continue;
      const Interval iv{a, b};
      const std::string tag = "[" + std::to_string(a) + "," + std::to_string(b) + "]";
      const ExactHecke M = mallows_element(iv, p);
      bool absorb = true;
      for (const auto& w : parabolic_elements(iv, n)) {
        const ExactHecke Tw = basis(p, w);
        if (!(Tw * M == M) || !(M * Tw == M)) absorb = false;
      }
      out.push_back(make("absorption " + tag, absorb));
      out.push_back(make("idempotence " + tag, M * M == M));
      out.push_back(make("involution invariance " + tag, involution(M) == M));
      out.push_back(make("distribution " + tag, is_distribution(M)));
    }
  }
  return out;
}

}  // namespace asep
