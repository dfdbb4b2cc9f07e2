#include "asep/signed_perm.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace asep {

SignedPermutation SignedPermutation::identity(int n) {
  if (n < 1) throw std::invalid_argument("B_n needs n >= 1");
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  return SignedPermutation(std::move(w));
}

SignedPermutation SignedPermutation::from_word(std::vector<int> word) {
  const int n = static_cast<int>(word.size());
  if (n < 1) throw std::invalid_argument("empty signed permutation");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : word) {
    const int a = std::abs(v);
    if (a < 1 || a > n || seen[static_cast<std::size_t>(a)]) {
      throw std::invalid_argument("not a signed permutation: absolute values must form a permutation of [n]");
    }
    seen[static_cast<std::size_t>(a)] = true;
  }
  return SignedPermutation(std::move(word));
}

SignedPermutation SignedPermutation::parse(std::string_view text) {
  std::string s(text);
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos || s[first] != '(' || s[last] != ')') {
    throw std::invalid_argument("signed permutation must be written as (w1,...,wn), got '" + s + "'");
  }
  std::replace(s.begin(), s.end(), '(', ' ');
  std::replace(s.begin(), s.end(), ')', ' ');
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<int> w;
  int v = 0;
  while (in >> v) w.push_back(v);
  if (!in.eof()) throw std::invalid_argument("cannot parse signed permutation '" + std::string(text) + "'");
  return from_word(std::move(w));
}

bool SignedPermutation::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (word_[static_cast<std::size_t>(i)] != i + 1) return false;
  }
  return true;
}

void SignedPermutation::check_generator(int k) const {
  if (k < 0 || k >= size()) {
    throw std::out_of_range("generator index " + std::to_string(k) + " outside [0, " +
                            std::to_string(size() - 1) + "]");
  }
}

SignedPermutation SignedPermutation::right_generator(int k) const {
  check_generator(k);
  std::vector<int> w = word_;
  if (k == 0) {
    w[0] = -w[0];
  } else {
    std::swap(w[static_cast<std::size_t>(k - 1)], w[static_cast<std::size_t>(k)]);
  }
  return SignedPermutation(std::move(w));
}

SignedPermutation SignedPermutation::left_generator(int k) const {
  check_generator(k);
  std::vector<int> w = word_;
  for (int& v : w) {
    if (k == 0) {
      if (v == 1 || v == -1) v = -v;
    } else if (std::abs(v) == k) {
      v = v > 0 ? k + 1 : -(k + 1);
    } else if (std::abs(v) == k + 1) {
      v = v > 0 ? k : -k;
    }
  }
  return SignedPermutation(std::move(w));
}

bool SignedPermutation::has_right_descent(int k) const {
  check_generator(k);
  if (k == 0) return word_[0] < 0;
  return word_[static_cast<std::size_t>(k - 1)] > word_[static_cast<std::size_t>(k)];
}

bool SignedPermutation::has_left_descent(int k) const {
  check_generator(k);
  // right descent of the inverse: compare pi^{-1}(k) and pi^{-1}(k+1)
  auto inv_at = [this](int value) {
    for (int p = 0; p < size(); ++p) {
      const int v = word_[static_cast<std::size_t>(p)];
      if (v == value) return p + 1;
      if (v == -value) return -(p + 1);
    }
    return 0;
  };
  if (k == 0) return inv_at(1) < 0;
  return inv_at(k) > inv_at(k + 1);
}

SignedPermutation SignedPermutation::inverse() const {
  std::vector<int> w(word_.size());
  for (int p = 1; p <= size(); ++p) {
    const int v = word_[static_cast<std::size_t>(p - 1)];
    // pi(p) = v  =>  pi^{-1}(|v|) = sign(v) p
    w[static_cast<std::size_t>(std::abs(v) - 1)] = v > 0 ? p : -p;
  }
  return SignedPermutation(std::move(w));
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& other) const {
  if (other.size() != size()) throw std::invalid_argument("composing signed permutations of different size");
  std::vector<int> w(word_.size());
  for (int i = 1; i <= size(); ++i) w[static_cast<std::size_t>(i - 1)] = (*this)(other(i));
  return SignedPermutation(std::move(w));
}

LengthTriple SignedPermutation::length() const {
  // l = inv(w(1..n)) + sum over negative entries of |w(j)|, l0 = #negatives
  int inversions = 0;
  int negative_mass = 0;
  int negatives = 0;
  for (std::size_t i = 0; i < word_.size(); ++i) {
    if (word_[i] < 0) {
      ++negatives;
      negative_mass -= word_[i];
    }
    for (std::size_t j = i + 1; j < word_.size(); ++j) {
      if (word_[i] > word_[j]) ++inversions;
    }
  }
  LengthTriple t;
  t.l = inversions + negative_mass;
  t.l0 = negatives;
  t.l1 = t.l - t.l0;
  return t;
}

std::vector<int> SignedPermutation::reduced_word() const {
  // strip right descents; each step lowers the length by one
  std::vector<int> reversed;
  SignedPermutation cur = *this;
  while (!cur.is_identity()) {
    int k = 0;
    while (!cur.has_right_descent(k)) ++k;
    reversed.push_back(k);
    cur = cur.right_generator(k);
  }
  return {reversed.rbegin(), reversed.rend()};
}

std::string SignedPermutation::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < word_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(word_[i]);
  }
  out += ')';
  return out;
}

SignedPermutation identity(int n) { return SignedPermutation::identity(n); }
SignedPermutation apply_generator_right(const SignedPermutation& pi, int k) { return pi.right_generator(k); }
SignedPermutation apply_generator_left(int k, const SignedPermutation& pi) { return pi.left_generator(k); }
LengthTriple length(const SignedPermutation& pi) { return pi.length(); }
std::vector<int> reduced_word(const SignedPermutation& pi) { return pi.reduced_word(); }
SignedPermutation inverse(const SignedPermutation& pi) { return pi.inverse(); }

SignedPermutation from_generators(int n, const std::vector<int>& word) {
  SignedPermutation p = SignedPermutation::identity(n);
  for (int k : word) p = p.right_generator(k);
  return p;
}

std::vector<SignedPermutation> all_signed_permutations(int n) {
  std::vector<int> base(static_cast<std::size_t>(n));
  std::iota(base.begin(), base.end(), 1);
  std::vector<SignedPermutation> out;
  do {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> w = base;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) w[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(i)];
      }
      out.push_back(SignedPermutation::from_word(std::move(w)));
    }
  } while (std::next_permutation(base.begin(), base.end()));
  std::sort(out.begin(), out.end());
  return out;
}

ColorMap::ColorMap(int n, std::vector<Band> bands) : n_(n), bands_(std::move(bands)) {
  if (n < 1) throw std::invalid_argument("color map needs n >= 1");
  lookup_.assign(static_cast<std::size_t>(2 * n + 1), -1);
  for (const Band& b : bands_) {
    if (b.lo > b.hi || b.lo < -n || b.hi > n || (b.lo <= 0 && b.hi >= 0)) {
      throw std::invalid_argument("color band must be a nonempty interval inside +-[1,n]");
    }
    for (int v = b.lo; v <= b.hi; ++v) {
      int& slot = lookup_[static_cast<std::size_t>(v + n)];
      if (slot != -1) throw std::invalid_argument("color bands overlap");
      slot = b.label;
    }
  }
  for (int v = -n; v <= n; ++v) {
    if (v != 0 && lookup_[static_cast<std::size_t>(v + n)] == -1) {
      throw std::invalid_argument("color bands do not cover value " + std::to_string(v));
    }
  }
}

ColorMap ColorMap::particle_hole(int n) { return ColorMap(n, {{-n, -1, 1}, {1, n, 0}}); }

ColorMap ColorMap::four_species(int n, int K) {
  if (K < 1 || K > n + 1) throw std::invalid_argument("four-species threshold K must lie in [1, n+1]");
  std::vector<Band> bands;
  if (-K >= -n) bands.push_back({-n, -K, 1});
  if (K >= 2) bands.push_back({-K + 1, -1, 2});
  if (K >= 2) bands.push_back({1, K - 1, 3});
  if (K <= n) bands.push_back({K, n, 4});
  return ColorMap(n, std::move(bands));
}

int ColorMap::label(int value) const {
  if (value == 0 || value < -n_ || value > n_) throw std::out_of_range("value outside +-[1,n]");
  return lookup_[static_cast<std::size_t>(value + n_)];
}

std::vector<int> project(const SignedPermutation& pi, const ColorMap& cmap) {
  if (cmap.n() != pi.size()) throw std::invalid_argument("color map size differs from permutation size");
  std::vector<int> out(static_cast<std::size_t>(pi.size()));
  for (int i = 1; i <= pi.size(); ++i) out[static_cast<std::size_t>(i - 1)] = cmap.label(pi(i));
  return out;
}

}  // namespace asep
