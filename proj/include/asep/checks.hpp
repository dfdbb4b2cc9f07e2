#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asep/rational.hpp"

namespace asep {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Exact identities of H_{q,r}(B_n), n <= 4: quadratic relations, braid
/// relations, associativity and anti-homomorphism on `triples` random
/// elements, reduced-word independence (exhaustive for n <= 3, every element
/// but a capped number of words per element for n = 4), left/right
/// generator consistency and sum preservation.
std::vector<CheckResult> hecke_identity_suite(int n, const Rational& q, const Rational& r,
                                              std::uint64_t seed = 1, int triples = 100);

/// Exact Mallows identities on every parabolic interval of B_n, n <= 3:
/// absorption, idempotence, involution invariance, distribution property.
std::vector<CheckResult> mallows_identity_suite(int n, const Rational& q, const Rational& r);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace asep
