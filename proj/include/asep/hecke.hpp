#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "asep/rational.hpp"
#include "asep/rng.hpp"
#include "asep/signed_perm.hpp"

namespace asep {

/// Parameters of H_{q,r}(B_n). The quadratic relation of T_k uses q_k = q for
/// k > 0 and q_0 = r.
template <class Scalar>
struct HeckeParams {
  int n = 1;
  Scalar q{};
  Scalar r{};

  const Scalar& q_k(int k) const { return k == 0 ? r : q; }
  friend bool operator==(const HeckeParams&, const HeckeParams&) = default;
};

/// Parabolic index set [a, b]: B_{[a,b]} is generated by s_i, a <= i < b.
/// For a = 0 it is B_b acting on positions 1..b; for a > 0 it is the
/// symmetric group on positions a..b.
struct Interval {
  int a = 0;
  int b = 1;
};

void validate(const Interval& iv, int n);

/// Elements of the parabolic subgroup B_{[a,b]} inside B_n, sorted.
std::vector<SignedPermutation> parabolic_elements(const Interval& iv, int n);

/// Sparse combination sum c_w T_w over B_n with scalars in a single mode
/// (Rational for exact arithmetic, double for floating point). Zero
/// coefficients are never stored; iteration follows the ordering of
/// SignedPermutation, so output is canonical.
template <class Scalar>
class HeckeElement {
 public:
  using Terms = std::map<SignedPermutation, Scalar>;

  explicit HeckeElement(HeckeParams<Scalar> params) : params_(std::move(params)) {
    if (params_.n < 1) throw std::invalid_argument("Hecke algebra needs n >= 1");
  }

  const HeckeParams<Scalar>& params() const { return params_; }
  int n() const { return params_.n; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Scalar coefficient(const SignedPermutation& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const SignedPermutation& w, const Scalar& c) {
    if (w.size() != n()) throw std::invalid_argument("basis element of wrong size");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Scalar coefficient_sum() const {
    Scalar s(0);
    for (const auto& [w, c] : terms_) s += c;
    return s;
  }

  HeckeElement& operator+=(const HeckeElement& other) {
    check_compatible(other);
    for (const auto& [w, c] : other.terms_) add_term(w, c);
    return *this;
  }
  HeckeElement& operator-=(const HeckeElement& other) {
    check_compatible(other);
    for (const auto& [w, c] : other.terms_) add_term(w, Scalar(-c));
    return *this;
  }
  HeckeElement& operator*=(const Scalar& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }
  friend HeckeElement operator*(const Scalar& s, HeckeElement a) { return a *= s; }

  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.params_ == b.params_ && a.terms_ == b.terms_;
  }

  void check_compatible(const HeckeElement& other) const {
    if (!(params_ == other.params_)) {
      throw std::invalid_argument("Hecke elements from different algebras (n, q or r differ)");
    }
  }

 private:
  HeckeParams<Scalar> params_;
  Terms terms_;
};

using ExactHecke = HeckeElement<Rational>;
using FloatHecke = HeckeElement<double>;

template <class Scalar>
HeckeElement<Scalar> basis(const HeckeParams<Scalar>& params, const SignedPermutation& w) {
  HeckeElement<Scalar> x(params);
  x.add_term(w, Scalar(1));
  return x;
}

template <class Scalar>
HeckeElement<Scalar> identity_element(const HeckeParams<Scalar>& params) {
  return basis(params, SignedPermutation::identity(params.n));
}

/// X * T_k:  T_w T_k = T_{w s_k} if l(w s_k) > l(w),
///           q_k T_{w s_k} + (1 - q_k) T_w otherwise.
template <class Scalar>
HeckeElement<Scalar> mul_generator_right(const HeckeElement<Scalar>& x, int k) {
  if (k < 0 || k >= x.n()) throw std::out_of_range("generator index out of range");
  const Scalar& qk = x.params().q_k(k);
  const Scalar stay = Scalar(1) - qk;
  HeckeElement<Scalar> out(x.params());
  for (const auto& [w, c] : x.terms()) {
    if (!w.has_right_descent(k)) {
      out.add_term(w.right_generator(k), c);
    } else {
      out.add_term(w.right_generator(k), Scalar(qk * c));
      out.add_term(w, Scalar(stay * c));
    }
  }
  return out;
}

/// T_k * X, mirror image of mul_generator_right using s_k w.
template <class Scalar>
HeckeElement<Scalar> mul_generator_left(int k, const HeckeElement<Scalar>& x) {
  if (k < 0 || k >= x.n()) throw std::out_of_range("generator index out of range");
  const Scalar& qk = x.params().q_k(k);
  const Scalar stay = Scalar(1) - qk;
  HeckeElement<Scalar> out(x.params());
  for (const auto& [w, c] : x.terms()) {
    if (!w.has_left_descent(k)) {
      out.add_term(w.left_generator(k), c);
    } else {
      out.add_term(w.left_generator(k), Scalar(qk * c));
      out.add_term(w, Scalar(stay * c));
    }
  }
  return out;
}

/// X * T_{k_1} * ... * T_{k_m} for an arbitrary generator word.
template <class Scalar>
HeckeElement<Scalar> mul_word_right(HeckeElement<Scalar> x, const std::vector<int>& word) {
  for (int k : word) x = mul_generator_right(x, k);
  return x;
}

/// Bilinear product: each T_w of `y` is expanded along a reduced word of w
/// and folded onto `x` one generator at a time.
template <class Scalar>
HeckeElement<Scalar> mul(const HeckeElement<Scalar>& x, const HeckeElement<Scalar>& y) {
  x.check_compatible(y);
  HeckeElement<Scalar> out(x.params());
  for (const auto& [w, c] : y.terms()) {
    HeckeElement<Scalar> part = mul_word_right(x, w.reduced_word());
    part *= c;
    out += part;
  }
  return out;
}

template <class Scalar>
HeckeElement<Scalar> operator*(const HeckeElement<Scalar>& x, const HeckeElement<Scalar>& y) {
  return mul(x, y);
}

/// Anti-involution T_w -> T_{w^{-1}}.
template <class Scalar>
HeckeElement<Scalar> involution(const HeckeElement<Scalar>& x) {
  HeckeElement<Scalar> out(x.params());
  for (const auto& [w, c] : x.terms()) out.add_term(w.inverse(), c);
  return out;
}

inline constexpr double kDistributionTolerance = 1e-12;

/// Coefficients nonnegative and summing to one (exactly for Rational, within
/// kDistributionTolerance for double).
template <class Scalar>
bool is_distribution(const HeckeElement<Scalar>& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    double sum = 0.0;
    for (const auto& [w, c] : x.terms()) {
      if (c < -kDistributionTolerance) return false;
      sum += c;
    }
    return std::abs(sum - 1.0) <= kDistributionTolerance;
  } else {
    for (const auto& [w, c] : x.terms()) {
      if (c < 0) return false;
    }
    return x.coefficient_sum() == 1;
  }
}

/// Draws w with probability equal to its coefficient.
template <class Scalar>
SignedPermutation sample(const HeckeElement<Scalar>& x, StreamRng& rng) {
  if (!is_distribution(x)) throw std::invalid_argument("sample: element is not a probability distribution");
  const double u = rng.uniform();
  double acc = 0.0;
  const SignedPermutation* last = nullptr;
  for (const auto& [w, c] : x.terms()) {
    acc += to_double(c);
    last = &w;
    if (u < acc) return w;
  }
  return *last;  // rounding slack in the final partial sum
}

/// M_{[a,b]} with weights r^{-l0} q^{-l1} (a = 0) or q^{-l} (a > 0),
/// normalised by summing the weights over the parabolic subgroup.
/// Enumeration caps: |B_{[0,b]}| <= 46080, (b - a + 1)! <= 40320.
template <class Scalar>
HeckeElement<Scalar> mallows_element(const Interval& iv, const HeckeParams<Scalar>& params) {
  const std::vector<SignedPermutation> elems = parabolic_elements(iv, params.n);
  const Scalar inv_q = Scalar(1) / params.q;
  const Scalar inv_r = Scalar(1) / params.r;
  std::vector<Scalar> weights;
  weights.reserve(elems.size());
  Scalar total(0);
  for (const auto& w : elems) {
    const LengthTriple len = w.length();
    Scalar wt(1);
    if (iv.a == 0) {
      for (int i = 0; i < len.l0; ++i) wt *= inv_r;
      for (int i = 0; i < len.l1; ++i) wt *= inv_q;
    } else {
      for (int i = 0; i < len.l; ++i) wt *= inv_q;
    }
    total += wt;
    weights.push_back(wt);
  }
  HeckeElement<Scalar> out(params);
  for (std::size_t i = 0; i < elems.size(); ++i) out.add_term(elems[i], Scalar(weights[i] / total));
  return out;
}

template <class To, class From>
HeckeElement<To> convert(const HeckeElement<From>& x) {
  HeckeParams<To> p{x.n(), To(to_double(x.params().q)), To(to_double(x.params().r))};
  HeckeElement<To> out(p);
  for (const auto& [w, c] : x.terms()) out.add_term(w, To(to_double(c)));
  return out;
}

/// max_w |x_w - y_w| over the union of supports.
template <class Scalar>
double max_abs_difference(const HeckeElement<Scalar>& x, const HeckeElement<Scalar>& y) {
  double worst = 0.0;
  for (const auto& [w, c] : x.terms()) worst = std::max(worst, std::abs(to_double(c) - to_double(y.coefficient(w))));
  for (const auto& [w, c] : y.terms()) worst = std::max(worst, std::abs(to_double(c) - to_double(x.coefficient(w))));
  return worst;
}

/// One term per line: "coefficient  (one-line word)", canonical order.
template <class Scalar>
std::string to_debug_string(const HeckeElement<Scalar>& x) {
  std::string out;
  for (const auto& [w, c] : x.terms()) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(c));
      out += buf;
    } else {
      out += to_string(c);
    }
    out += "  ";
    out += w.to_string();
    out += '\n';
  }
  return out;
}

// Sampling-level counterparts of the multiplication rules, used by the Monte
// Carlo pipelines. A draw from T_w T_k (resp. T_k T_w) given u ~ U(0,1).

/// Sample of T_w T_k: ascent moves, descent moves with probability q_k.
SignedPermutation random_right_step(const SignedPermutation& w, int k, double q_k, double u);
/// Sample of T_k T_w.
SignedPermutation random_left_step(int k, const SignedPermutation& w, double q_k, double u);

/// Exact draw from M_{[a,b]} in B_n (q, r as doubles) by sequential
/// insertion; no enumeration, so any interval size works.
SignedPermutation sample_mallows(const Interval& iv, int n, double q, double r, StreamRng& rng);

/// Draw from T_u T_w where u ~ `left` has been sampled already: walks the
/// reduced word of `right_factor` applying random_right_step.
SignedPermutation sample_right_product(const SignedPermutation& left_factor,
                                       const SignedPermutation& right_factor,
                                       double q, double r, StreamRng& rng);

/// Draw from T_u T_w applying the reduced word of u from the left onto w.
SignedPermutation sample_left_product(const SignedPermutation& left_factor,
                                      const SignedPermutation& right_factor,
                                      double q, double r, StreamRng& rng);

}  // namespace asep
