#include <gtest/gtest.h>

#include <functional>

#include "ucvrp/assignment.hpp"
#include "ucvrp/generators.hpp"

using namespace ucvrp;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

bool within_bound(const BipartiteWeights& g, const std::vector<int>& f) {
  Rational wmax;
  for (const Rational& w : g.b_weight) wmax = max(wmax, w);
  std::vector<Rational> load(g.a_count);
  for (int b = 0; b < g.b_count; ++b) load[f[b]] += g.b_weight[b];
  for (const auto& e : g.edges) load[e.a] -= e.w;
  for (const Rational& l : load)
    if (l > wmax) return false;
  return true;
}

}  // namespace

TEST(Assign, Examples) {
  BipartiteWeights one{1, 1, {{0, 0, R("0.5")}}, {R("0.5")}};
  EXPECT_EQ(assign(one), std::vector<int>{0});
  BipartiteWeights two{2, 1, {{0, 0, R("0.3")}, {1, 0, R("0.2")}}, {R("0.5")}};
  EXPECT_TRUE(within_bound(two, assign(two)));
  BipartiteWeights four{2, 2, {{0, 0, R("0.6")}, {1, 0, R("0.4")}, {0, 1, R("0.5")}, {1, 1, R("0.5")}}, {1, 1}};
  // exhaustive: at least one of the four maps satisfies the bound
  int valid = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) valid += within_bound(four, {a, b});
  EXPECT_GE(valid, 1);
  auto f = assign(four);
  EXPECT_TRUE(within_bound(four, f));
  auto ex = assignment_excess(four, f);
  for (const Rational& e : ex) EXPECT_LE(e, Rational(1));
}

TEST(Assign, Errors) {
  EXPECT_THROW(assign(BipartiteWeights{1, 1, {}, {R("0.5")}}), std::invalid_argument);
  EXPECT_THROW(assign(BipartiteWeights{1, 1, {{0, 0, R("0.2")}}, {R("0.5")}}), std::invalid_argument);
}

TEST(Assign, NeighboursOnlyAndDeterministic) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    BipartiteWeights g;
    g.a_count = static_cast<int>(rng.range(1, 8));
    g.b_count = static_cast<int>(rng.range(1, 8));
    for (int b = 0; b < g.b_count; ++b) {
      Rational sum;
      for (int a = 0; a < g.a_count; ++a)
        if (rng.coin(1, 2) || a == g.a_count - 1) {
          Rational w(rng.range(0, 10), 10);
          g.edges.push_back({a, b, w});
          sum += w;
        }
      g.b_weight.push_back(sum * Rational(rng.range(0, 4), 4));
    }
    auto f = assign(g);
    ASSERT_EQ(static_cast<int>(f.size()), g.b_count);
    for (int b = 0; b < g.b_count; ++b) {
      bool neighbour = false;
      for (const auto& e : g.edges) neighbour |= e.a == f[b] && e.b == b;
      EXPECT_TRUE(neighbour);
    }
    EXPECT_TRUE(within_bound(g, f)) << seed;
    EXPECT_EQ(assign(g), f);
  }
}
