#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "ucvrp/baselines.hpp"
#include "ucvrp/generators.hpp"
#include "ucvrp/instance.hpp"

using namespace ucvrp;

namespace {
Rational R(const char* s) { return Rational::parse(s); }
}  // namespace

TEST(Parse, SmallInstance) {
  Instance inst = parse_instance_text("ucvrp 1\nv 0 -1 0\nv 1 0 1.0\nt 1 0.5\n");
  EXPECT_EQ(inst.size(), 2);
  EXPECT_EQ(inst.root(), 0);
  EXPECT_EQ(inst.demand(1), Rational(1, 2));
  EXPECT_EQ(inst.weight(1), Rational(1));
}

TEST(Parse, Errors) {
  auto msg = [](const char* text) {
    try {
      parse_instance_text(text);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(msg("ucvrp 1\nv 0 -1 0\nv 1 0 1\nt 1 1.5\n").find("demand outside (0,1]"), std::string::npos);
  EXPECT_NE(msg("ucvrp 1\nv 0 -1 0\nv 1 0 -1\nt 1 0.5\n").find("negative weight"), std::string::npos);
  EXPECT_NE(msg("ucvrp 1\nv 0 -1 0\nv 1 2 1\nv 2 1 1\n").find("line"), std::string::npos);
  EXPECT_NE(msg("ucvrp 1\nv 0 -1 0\nv 1 0 x\n").find("line 3"), std::string::npos);
  EXPECT_THROW(parse_instance_text("ucvrp 2\n"), ParseError);
}

TEST(Parse, RoundTrip) {
  Instance a = gen_random_general(12, 6, 4);
  std::ostringstream os;
  write_instance(os, a);
  Instance b = parse_instance_text(os.str());
  EXPECT_EQ(a.parents(), b.parents());
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.demand_map(), b.demand_map());
}

TEST(TourCost, Examples) {
  Instance inst({-1, 0, 1, 1}, {0, 2, 3, 5}, {{2, Rational(1, 10)}, {3, Rational(1, 10)}});
  EXPECT_EQ(tour_cost(inst, std::vector<VertexId>{}), Rational(0));
  EXPECT_EQ(tour_cost(inst, std::vector<VertexId>{2, 3}), Rational(20));
  EXPECT_THROW(tour_cost(inst, std::vector<VertexId>{9}), std::out_of_range);
}

TEST(TourCost, MatchesWalkOracleMonotoneSubadditive) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = gen_random_general(15, 8, seed);
    Rng rng(seed);
    std::vector<VertexId> a, b;
    for (VertexId v = 0; v < inst.size(); ++v) {
      if (rng.coin(1, 3)) a.push_back(v);
      if (rng.coin(1, 3)) b.push_back(v);
    }
    std::vector<VertexId> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    EXPECT_EQ(tour_cost(inst, a), oracle::walk_cost(inst, {a.begin(), a.end()}));
    EXPECT_LE(tour_cost(inst, a), tour_cost(inst, ab));
    EXPECT_LE(tour_cost(inst, ab), tour_cost(inst, a) + tour_cost(inst, b));
  }
}

TEST(Feasibility, Reports) {
  Instance inst({-1, 0, 0}, {0, 1, 1}, {{1, R("0.6")}, {2, R("0.41")}});
  EXPECT_TRUE(check_feasible(inst, Solution{{Tour{{1}, 0}, Tour{{2}, 0}}}).feasible());
  auto over = check_feasible(inst, Solution{{Tour{{1, 2}, 0}}});
  ASSERT_EQ(over.violations.size(), 1u);
  EXPECT_EQ(over.violations[0].kind, Violation::Kind::capacity);
  EXPECT_EQ(over.violations[0].excess, Rational(1, 100));
  EXPECT_NE(over.violations[0].message.find("capacity of 1"), std::string::npos);
  auto twice = check_feasible(inst, Solution{{Tour{{1, 2}, 0}, Tour{{2}, 0}}});
  bool multiply = false;
  for (const auto& v : twice.violations) multiply |= v.kind == Violation::Kind::multiply_covered;
  EXPECT_TRUE(multiply);
  auto missing = check_feasible(inst, Solution{{Tour{{1}, 0}}});
  EXPECT_EQ(missing.violations.at(0).kind, Violation::Kind::uncovered);
  Instance one({-1, 0}, {0, 1}, {{1, R("0.9")}});
  EXPECT_TRUE(check_feasible(one, Solution{{Tour{{1}, R("0.1")}}}).feasible());
  EXPECT_FALSE(check_feasible(one, Solution{{Tour{{1}, R("0.2")}}}).feasible());
}

TEST(BoundedDistance, Examples) {
  Instance a({-1, 0, 0}, {0, 1, R("1.9")}, {{1, R("0.5")}, {2, R("0.5")}});
  Instance b({-1, 0, 0}, {0, 1, 2}, {{1, R("0.5")}, {2, R("0.5")}});
  Instance one({-1, 0}, {0, 7}, {{1, R("0.5")}});
  EXPECT_TRUE(check_bounded_distance(a, Rational(1, 2)));
  EXPECT_FALSE(check_bounded_distance(b, Rational(1, 2)));
  EXPECT_TRUE(check_bounded_distance(one, Rational(1, 2)));
  EXPECT_THROW(check_bounded_distance(Instance({-1, 0}, {0, 1}, {}), Rational(1, 2)), std::invalid_argument);
}

TEST(Preprocess, NormalFormAndSameOptimum) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = gen_random_general(9 + static_cast<int>(seed % 5), 6, seed);
    Normalized n = preprocess(inst);
    ASSERT_TRUE(is_normalized(n.tree)) << seed;
    // every terminal keeps its demand under the origin map
    for (VertexId t : n.tree.terminals()) {
      ASSERT_NE(n.origin[t], kNoVertex);
      EXPECT_EQ(n.tree.demand(t), inst.demand(n.origin[t]));
    }
    EXPECT_EQ(n.tree.terminals().size(), inst.terminals().size());
    EXPECT_EQ(oracle::partition_opt(n.tree), oracle::partition_opt(inst)) << seed;
  }
}

TEST(Preprocess, Gadgets) {
  // internal terminal
  Instance a({-1, 0, 1}, {0, 1, 2}, {{1, R("0.3")}, {2, R("0.2")}});
  Normalized na = preprocess(a);
  EXPECT_TRUE(is_normalized(na.tree));
  EXPECT_EQ(na.tree.terminals().size(), 2u);
  // three children
  Instance b({-1, 0, 1, 1, 1}, {0, 1, 1, 1, 1}, {{2, R("0.1")}, {3, R("0.1")}, {4, R("0.1")}});
  Normalized nb = preprocess(b);
  EXPECT_TRUE(is_normalized(nb.tree));
  EXPECT_EQ(exact_opt(nb.tree).cost, exact_opt(b).cost);
  // already normal
  Instance c({-1, 0}, {0, 1}, {{1, R("0.5")}});
  EXPECT_EQ(preprocess(c).tree.parents(), c.parents());
}

TEST(Generators, BinPackingShapes) {
  std::vector<Rational> sizes{R("0.6"), R("0.6"), R("0.4"), R("0.4")};
  Instance path = gen_binpacking_path(sizes);
  EXPECT_EQ(path.size(), 5);
  EXPECT_EQ(path.weight(1), Rational(1));
  EXPECT_EQ(oracle::partition_opt(path), Rational(4));
  Instance star = gen_binpacking_star(sizes);
  EXPECT_EQ(oracle::partition_opt(star), Rational(4));
  EXPECT_EQ(oracle::partition_opt(gen_binpacking_path(std::vector<Rational>{1})), Rational(2));
  EXPECT_EQ(oracle::partition_opt(gen_binpacking_path(std::vector<Rational>{R("0.5"), R("0.5"), R("0.5")})), Rational(4));
  EXPECT_EQ(oracle::partition_opt(gen_binpacking_star(std::vector<Rational>{R("0.3")})), Rational(2));
  EXPECT_EQ(oracle::partition_opt(gen_binpacking_star(std::vector<Rational>{1, 1, 1})), Rational(6));
  EXPECT_THROW(gen_binpacking_path(std::vector<Rational>{}), std::invalid_argument);
}

TEST(Generators, Deterministic) {
  RandomSpec spec;
  Instance a = gen_random(spec, 11), b = gen_random(spec, 11);
  EXPECT_EQ(a.parents(), b.parents());
  EXPECT_EQ(a.demand_map(), b.demand_map());
  EXPECT_TRUE(is_normalized(a));
  EXPECT_EQ(static_cast<int>(a.terminals().size()), spec.terminals);
}
