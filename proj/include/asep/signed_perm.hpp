#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace asep {

/// Coxeter length data: l = l0 + l1, with l0 counting s0 and l1 counting the
/// s_k, k > 0, in any reduced word.
struct LengthTriple {
  int l = 0;
  int l0 = 0;
  int l1 = 0;
  friend bool operator==(const LengthTriple&, const LengthTriple&) = default;
};

/// Element of the hyperoctahedral group B_n in one-line notation
/// (pi(1), ..., pi(n)); pi(-i) = -pi(i) is implied and never stored.
///
/// Multiplication convention: (pi * sigma)(i) = pi(sigma(i)). Right
/// multiplication by a generator acts on positions (s_k swaps positions k and
/// k+1, s_0 negates position 1); left multiplication acts on values (s_k
/// swaps the values +-k and +-(k+1), s_0 swaps 1 and -1).
class SignedPermutation {
 public:
  SignedPermutation() = default;

  static SignedPermutation identity(int n);
  /// Throws std::invalid_argument unless |word| is a permutation of [n].
  static SignedPermutation from_word(std::vector<int> word);
  /// Parses "(-2,1,3)".
  static SignedPermutation parse(std::string_view text);

  int size() const { return static_cast<int>(word_.size()); }
  /// pi(i) for i in +-[1, n].
  int operator()(int i) const { return i > 0 ? word_[i - 1] : -word_[-i - 1]; }
  const std::vector<int>& word() const { return word_; }
  bool is_identity() const;

  /// pi * s_k.
  SignedPermutation right_generator(int k) const;
  /// s_k * pi.
  SignedPermutation left_generator(int k) const;

  /// l(pi s_k) < l(pi).
  bool has_right_descent(int k) const;
  /// l(s_k pi) < l(pi).
  bool has_left_descent(int k) const;

  SignedPermutation inverse() const;
  /// (*this) * other.
  SignedPermutation compose(const SignedPermutation& other) const;

  LengthTriple length() const;

  /// Word k_1 ... k_l with pi = s_{k_1} s_{k_2} ... s_{k_l}, of length l(pi).
  std::vector<int> reduced_word() const;

  std::string to_string() const;

  friend auto operator<=>(const SignedPermutation&, const SignedPermutation&) = default;
  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  explicit SignedPermutation(std::vector<int> word) : word_(std::move(word)) {}
  void check_generator(int k) const;

  std::vector<int> word_;
};

SignedPermutation identity(int n);
SignedPermutation apply_generator_right(const SignedPermutation& pi, int k);
SignedPermutation apply_generator_left(int k, const SignedPermutation& pi);
LengthTriple length(const SignedPermutation& pi);
std::vector<int> reduced_word(const SignedPermutation& pi);
SignedPermutation inverse(const SignedPermutation& pi);

/// Product of generators s_{k_1} ... s_{k_m} in B_n (need not be reduced).
SignedPermutation from_generators(int n, const std::vector<int>& word);

/// Every element of B_n, in lexicographic order of the one-line word.
std::vector<SignedPermutation> all_signed_permutations(int n);

/// Assignment of labels to the values +-[1, n]. Bands are closed value
/// intervals [lo, hi] (never containing 0).
class ColorMap {
 public:
  struct Band {
    int lo;
    int hi;
    int label;
  };

  /// Throws std::invalid_argument unless the bands partition +-[1, n].
  ColorMap(int n, std::vector<Band> bands);

  /// Negative values are particles (1), positive values holes (0).
  static ColorMap particle_hole(int n);

  /// Four species with threshold K in [1, n+1]:
  ///   [-n, -K] -> 1, [-K+1, -1] -> 2, [1, K-1] -> 3, [K, n] -> infinity (4).
  /// Empty bands are dropped.
  static ColorMap four_species(int n, int K);

  int n() const { return n_; }
  int label(int value) const;
  const std::vector<Band>& bands() const { return bands_; }

 private:
  int n_;
  std::vector<Band> bands_;
  std::vector<int> lookup_;  // index value + n
};

/// Label of pi(i) at each position i in [1, n]; negative positions dropped.
std::vector<int> project(const SignedPermutation& pi, const ColorMap& cmap);

}  // namespace asep
