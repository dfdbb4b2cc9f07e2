#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "asep/signed_perm.hpp"

using namespace asep;

namespace {

// Plain one-line generator actions, written without the library.
std::vector<int> act_right(std::vector<int> w, int k) {
  if (k == 0) w[0] = -w[0];
  else std::swap(w[static_cast<std::size_t>(k - 1)], w[static_cast<std::size_t>(k)]);
  return w;
}

struct Geodesic {
  int dist;
  int min_s0;
  int max_s0;
};

// BFS over the right Cayley graph of B_n; tracks the range of s0-counts over
// all geodesics from the identity.
std::map<std::vector<int>, Geodesic> cayley_bfs(int n) {
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i + 1;
  std::map<std::vector<int>, Geodesic> seen{{id, {0, 0, 0}}};
  std::queue<std::vector<int>> frontier;
  frontier.push(id);
  while (!frontier.empty()) {
    const auto w = frontier.front();
    frontier.pop();
    const Geodesic g = seen.at(w);
    for (int k = 0; k < n; ++k) {
      const auto v = act_right(w, k);
      const int add = k == 0 ? 1 : 0;
      auto it = seen.find(v);
      if (it == seen.end()) {
        seen.emplace(v, Geodesic{g.dist + 1, g.min_s0 + add, g.max_s0 + add});
        frontier.push(v);
      } else if (it->second.dist == g.dist + 1) {
        it->second.min_s0 = std::min(it->second.min_s0, g.min_s0 + add);
        it->second.max_s0 = std::max(it->second.max_s0, g.max_s0 + add);
      }
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("lengths match Cayley graph distances on B_2 and B_3") {
  for (int n : {1, 2, 3, 4}) {
    const auto bfs = cayley_bfs(n);
    const auto all = all_signed_permutations(n);
    CHECK(all.size() == bfs.size());
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (const auto& w : all) {
      const Geodesic& g = bfs.at(w.word());
      const LengthTriple len = w.length();
      CHECK(len.l == g.dist);
      // l0 well defined: every geodesic uses s0 the same number of times
      CHECK(g.min_s0 == g.max_s0);
      CHECK(len.l0 == g.min_s0);
      CHECK(len.l1 == len.l - len.l0);
    }
  }
}

TEST_CASE("descents agree with length changes") {
  for (int n : {2, 3}) {
    for (const auto& w : all_signed_permutations(n)) {
      for (int k = 0; k < n; ++k) {
        CHECK(w.has_right_descent(k) == (w.right_generator(k).length().l < w.length().l));
        CHECK(w.has_left_descent(k) == (w.left_generator(k).length().l < w.length().l));
        CHECK(w.has_left_descent(k) == w.inverse().has_right_descent(k));
        CHECK(w.right_generator(k).word() == act_right(w.word(), k));
      }
    }
  }
}

TEST_CASE("reduced words rebuild the element") {
  for (int n : {1, 2, 3, 4}) {
    for (const auto& w : all_signed_permutations(n)) {
      const auto word = w.reduced_word();
      CHECK(static_cast<int>(word.size()) == w.length().l);
      CHECK(from_generators(n, word) == w);
      CHECK(reduced_word(w) == word);
    }
  }
}

TEST_CASE("group operations") {
  const auto all = all_signed_permutations(3);
  const auto id = SignedPermutation::identity(3);
  for (const auto& u : all) {
    CHECK(u.compose(u.inverse()) == id);
    CHECK(u.inverse().inverse() == u);
    CHECK(u.inverse().length() == u.length());
    for (int i = 1; i <= 3; ++i) {
      CHECK(u(-i) == -u(i));
      CHECK(u.inverse()(u(i)) == i);
    }
    for (int k = 0; k < 3; ++k) {
      const auto sk = id.right_generator(k);
      CHECK(u.right_generator(k) == u.compose(sk));
      CHECK(u.left_generator(k) == sk.compose(u));
      CHECK(apply_generator_right(u, k) == u.right_generator(k));
      CHECK(apply_generator_left(k, u) == u.left_generator(k));
    }
  }
  CHECK(identity(3) == id);
  CHECK(id.is_identity());
  CHECK(inverse(SignedPermutation::parse("(2,-3,1)")) == SignedPermutation::parse("(3,1,-2)"));
  CHECK(length(SignedPermutation::parse("(-1)")).l0 == 1);
}

TEST_CASE("text form and validation") {
  const auto w = SignedPermutation::parse("(-2,1,3)");
  CHECK(w.to_string() == "(-2,1,3)");
  CHECK(w(1) == -2);
  CHECK(SignedPermutation::parse(w.to_string()) == w);
  CHECK_THROWS_AS(SignedPermutation::from_word({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SignedPermutation::from_word({1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(SignedPermutation::from_word({0, 1}), std::invalid_argument);
  CHECK_THROWS(SignedPermutation::parse("(1,2"));
  CHECK_THROWS(w.right_generator(3));
  CHECK(all_signed_permutations(4).size() == 384);
}

TEST_CASE("colour maps") {
  const ColorMap ph = ColorMap::particle_hole(3);
  CHECK(project(SignedPermutation::parse("(-2,1,-3)"), ph) == std::vector<int>{1, 0, 1});

  const ColorMap four = ColorMap::four_species(4, 2);
  // [-4,-2] -> 1, [-1,-1] -> 2, [1,1] -> 3, [2,4] -> 4
  CHECK(four.label(-4) == 1);
  CHECK(four.label(-2) == 1);
  CHECK(four.label(-1) == 2);
  CHECK(four.label(1) == 3);
  CHECK(four.label(2) == 4);
  CHECK(four.label(4) == 4);
  CHECK(project(SignedPermutation::parse("(1,-4,-3,2)"), four) == std::vector<int>{3, 1, 1, 4});
  CHECK(project(SignedPermutation::parse("(-1,3,-2,4)"), four) == std::vector<int>{2, 4, 1, 4});

  // K = 1 has no second / third class band, K = n + 1 no holes
  CHECK_NOTHROW(ColorMap::four_species(3, 1));
  CHECK_NOTHROW(ColorMap::four_species(3, 4));
  CHECK_THROWS_AS(ColorMap(2, {{-2, -1, 1}, {1, 1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ColorMap(2, {{-2, 0, 1}, {1, 2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ColorMap(2, {{-2, -1, 1}, {-1, 2, 0}}), std::invalid_argument);
}
