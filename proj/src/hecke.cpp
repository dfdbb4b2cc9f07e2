#include "asep/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asep {

namespace {

constexpr std::size_t kTypeBCap = 46080;  // |B_6|
constexpr std::size_t kTypeACap = 40320;  // 8!

std::size_t factorial(int m) {
  std::size_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

// Index in [0, i-1] drawn with P(m) proportional to q^m.
int truncated_geometric(int i, double q, double u) {
  const double tail = 1.0 - std::pow(q, i);
  const double m = std::floor(std::log1p(-u * tail) / std::log(q));
  return std::clamp(static_cast<int>(m), 0, i - 1);
}

}  // namespace

void validate(const Interval& iv, int n) {
  if (!(iv.a >= 0 && iv.a < iv.b && iv.b <= n)) {
    throw std::invalid_argument("interval [a,b] must satisfy 0 <= a < b <= n");
  }
}

std::vector<SignedPermutation> parabolic_elements(const Interval& iv, int n) {
  validate(iv, n);
  std::vector<SignedPermutation> out;
  if (iv.a == 0) {
    const std::size_t count = (std::size_t{1} << iv.b) * factorial(iv.b);
    if (count > kTypeBCap) {
      throw std::length_error("B_[0," + std::to_string(iv.b) + "] has " + std::to_string(count) +
                              " elements, above the enumeration cap 46080");
    }
    for (const auto& small : all_signed_permutations(iv.b)) {
      std::vector<int> w(static_cast<std::size_t>(n));
      std::iota(w.begin(), w.end(), 1);
      std::copy(small.word().begin(), small.word().end(), w.begin());
      out.push_back(SignedPermutation::from_word(std::move(w)));
    }
  } else {
    const int len = iv.b - iv.a + 1;
    if (factorial(len) > kTypeACap) {
      throw std::length_error("parabolic subgroup on " + std::to_string(len) +
                              " positions exceeds the enumeration cap 40320");
    }
    std::vector<int> block(static_cast<std::size_t>(len));
    std::iota(block.begin(), block.end(), iv.a);
    do {
      std::vector<int> w(static_cast<std::size_t>(n));
      std::iota(w.begin(), w.end(), 1);
      std::copy(block.begin(), block.end(), w.begin() + (iv.a - 1));
      out.push_back(SignedPermutation::from_word(std::move(w)));
    } while (std::next_permutation(block.begin(), block.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SignedPermutation random_right_step(const SignedPermutation& w, int k, double q_k, double u) {
  if (!w.has_right_descent(k)) return w.right_generator(k);
  return u < q_k ? w.right_generator(k) : w;
}

SignedPermutation random_left_step(int k, const SignedPermutation& w, double q_k, double u) {
  if (!w.has_left_descent(k)) return w.left_generator(k);
  return u < q_k ? w.left_generator(k) : w;
}

SignedPermutation sample_mallows(const Interval& iv, int n, double q, double r, StreamRng& rng) {
  validate(iv, n);
  // Insert +-i for i = 1..L. A positive i with j smaller-position entries to its
  // right adds j inversions; a negative -i with j entries to its left adds j
  // inversions plus i to the negative mass. Weights factor as
  //   prod_i [i]_{1/q} (1 + r^{-1} q^{-(i-1)}),
  // so sign and slot can be drawn independently at every step.
  const int len = iv.a == 0 ? iv.b : iv.b - iv.a + 1;
  std::vector<int> arrangement;
  arrangement.reserve(static_cast<std::size_t>(len));
  for (int i = 1; i <= len; ++i) {
    bool negative = false;
    if (iv.a == 0) negative = rng.uniform() < 1.0 / (1.0 + r * std::pow(q, i - 1));
    // m = i - 1 - j has probability proportional to q^m
    const int m = truncated_geometric(i, q, rng.uniform());
    const int j = i - 1 - m;
    if (negative) {
      arrangement.insert(arrangement.begin() + j, -i);
    } else {
      arrangement.insert(arrangement.begin() + m, i);
    }
  }
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  const int offset = iv.a == 0 ? 0 : iv.a - 1;
  for (int p = 0; p < len; ++p) {
    const int v = arrangement[static_cast<std::size_t>(p)];
    w[static_cast<std::size_t>(offset + p)] = v > 0 ? v + offset : v - offset;
  }
  return SignedPermutation::from_word(std::move(w));
}

SignedPermutation sample_right_product(const SignedPermutation& left_factor,
                                       const SignedPermutation& right_factor, double q, double r,
                                       StreamRng& rng) {
  SignedPermutation cur = left_factor;
  for (int k : right_factor.reduced_word()) cur = random_right_step(cur, k, k == 0 ? r : q, rng.uniform());
  return cur;
}

SignedPermutation sample_left_product(const SignedPermutation& left_factor,
                                      const SignedPermutation& right_factor, double q, double r,
                                      StreamRng& rng) {
  SignedPermutation cur = right_factor;
  const std::vector<int> word = left_factor.reduced_word();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    cur = random_left_step(*it, cur, *it == 0 ? r : q, rng.uniform());
  }
  return cur;
}

}  // namespace asep
