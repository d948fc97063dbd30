#include <gtest/gtest.h>

#include "ucvrp/baselines.hpp"
#include "ucvrp/dp.hpp"
#include "ucvrp/generators.hpp"

using namespace ucvrp;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

struct Pipeline {
  Instance inst;
  Params p;
  Hierarchy h;
  ValueSets vs;
  Pipeline(Instance i, Params pp) : inst(preprocess(i).tree), p(pp), h(decompose(inst, p)), vs(build_value_sets(inst, h, p)) {}
};

ValueSets values(std::vector<Rational> y) {
  ValueSets vs;
  vs.y = std::move(y);
  return vs;
}

LocalTable one_layer(std::vector<LocalTable::Node> nodes) {
  LocalTable t;
  t.layers.push_back(std::move(nodes));
  return t;
}

SubtreeTable table_of(std::vector<std::pair<SubtreeKey, Rational>> rows) {
  SubtreeTable t;
  for (auto& [k, c] : rows) t.offer({k, c, {}, {}});
  return t;
}

}  // namespace

TEST(LocalValues, SingleEdge) {
  ParamOverrides o;
  o.alpha = Rational(1, 8);
  Pipeline s(Instance({-1, 0}, {0, 1}, {{1, R("0.3")}}), Params::relaxed(Rational(1, 2), o));
  ASSERT_EQ(s.h.components.size(), 1u);
  LocalTable t = local_config_values(s.inst, s.h, 0, s.vs, s.p, false);
  int id = s.vs.index_of(R("0.3"));
  ASSERT_GE(id, 0);
  EXPECT_EQ(t.value({local_code(id, SubtourKind::ending)}), std::optional<Rational>(2));
  EXPECT_EQ(evaluate_local_config(s.inst, s.h, 0, s.vs, s.p, {{R("0.3"), SubtourKind::ending}}), Rational(2));
  EXPECT_EQ(evaluate_local_config(s.inst, s.h, 0, s.vs, s.p, {{Rational(1, 8), SubtourKind::ending}}), std::nullopt);
}

TEST(LocalValues, EmptyComponent) {
  Pipeline s(Instance({-1, 0}, {0, 1}, {}), Params::relaxed(Rational(1, 2)));
  LocalTable t = local_config_values(s.inst, s.h, 0, s.vs, s.p, false);
  EXPECT_EQ(t.value({}), std::optional<Rational>(0));
  EXPECT_EQ(evaluate_local_config(s.inst, s.h, 0, s.vs, s.p, {}), Rational(0));
}

TEST(LocalValues, AgreeWithDirectEvaluation) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomSpec spec;
    spec.terminals = 3 + static_cast<int>(seed % 6);
    Pipeline s(gen_random(spec, seed), Params::relaxed(Rational(1, 2)));
    for (int c = 0; c < static_cast<int>(s.h.components.size()); ++c) {
      if (s.vs.q_c[c].size() > 6) continue;
      const bool passing = s.h.components[c].passing();
      LocalTable t = local_config_values(s.inst, s.h, c, s.vs, s.p, passing);
      for (int i = 0; i < static_cast<int>(t.entries().size()); ++i) {
        const auto& node = t.entries()[i];
        std::vector<std::pair<Rational, SubtourKind>> list;
        for (int code : node.key) list.push_back({s.vs.y[code >> 1], static_cast<SubtourKind>(code & 1)});
        auto direct = evaluate_local_config(s.inst, s.h, c, s.vs, s.p, list);
        ASSERT_TRUE(direct.has_value());
        EXPECT_LE(*direct, node.cost);
        // merging two ending subtours never costs more
        for (std::size_t a = 0; a < list.size(); ++a)
          for (std::size_t b = a + 1; b < list.size(); ++b) {
            if (list[a].second != SubtourKind::ending || list[b].second != SubtourKind::ending) continue;
            Rational sum = list[a].first + list[b].first;
            if (sum > Rational(1)) continue;
            auto merged = list;
            merged[a].first = sum;
            merged.erase(merged.begin() + static_cast<long>(b));
            auto m = evaluate_local_config(s.inst, s.h, c, s.vs, s.p, merged);
            ASSERT_TRUE(m.has_value());
            EXPECT_LE(*m, *direct);
          }
        // the witness partition re-costs to the stored value
        Rational recost;
        for (const auto& [mask, code] : t.witness(i)) {
          std::vector<VertexId> reach;
          for (std::size_t q = 0; q < t.parts.size(); ++q)
            if (mask >> q & 1) reach.insert(reach.end(), t.parts[q].terminals.begin(), t.parts[q].terminals.end());
          if (code & 1) reach.push_back(*s.h.components[c].exit);
          Rational span;
          std::set<VertexId> seen;
          for (VertexId v : reach)
            for (; v != s.h.components[c].root && seen.insert(v).second; v = s.inst.parent(v)) span += s.inst.weight(v);
          recost += Rational(2) * span;
        }
        EXPECT_EQ(recost, node.cost);
      }
    }
  }
}

TEST(ComponentRoot, LeafLift) {
  ValueSets vs = values({R("0.3"), R("0.5"), R("0.8")});
  ValueAdder add(vs);
  LocalTable f = one_layer({{{local_code(0, SubtourKind::ending), local_code(1, SubtourKind::ending)}, 7, 0, 0, -1}});
  SubtreeTable g = subtree_values_component_root(f, nullptr, 0, add);
  EXPECT_EQ(g.value({0, 1, 1, 1}), std::optional<Rational>(7));
}

TEST(ComponentRoot, PassingJoinsExit) {
  ValueSets vs = values({R("0.3"), R("0.5"), R("0.8")});
  ValueAdder add(vs);
  SubtreeTable ge = table_of({{{1, 1}, 5}});
  LocalTable f = one_layer({{{local_code(0, SubtourKind::passing)}, 3, 0, 0, -1}, {{}, 0, 0, 0, -1}});
  SubtreeTable g = subtree_values_component_root(f, &ge, R("1.5"), add);
  EXPECT_EQ(g.value({2, 1}), std::optional<Rational>(8));           // f + g_e, multiplier 1 - 1
  EXPECT_EQ(g.value({1, 1}), std::optional<Rational>(5 + 3));       // g_e + 2 * 1.5 * 1
}

TEST(Critical, NoChildrenAndOneChild) {
  ValueSets vs = values({R("0.5"), 1});
  ValueAdder add(vs);
  Params p = Params::relaxed(Rational(1, 2));
  SubtreeTable empty = subtree_values_critical({}, vs, p, add);
  EXPECT_EQ(empty.value({}), std::optional<Rational>(0));
  SubtreeTable child = table_of({{{0, 2}, 4}});
  SubtreeTable one = subtree_values_critical({{&child, R("0.5")}}, vs, p, add);
  EXPECT_EQ(one.value({0, 2}), std::optional<Rational>(4 + 2 * 2 * R("0.5")));
}

TEST(Critical, TwoChildrenMergeOrNot) {
  ValueSets vs = values({R("0.5"), 1});
  ValueAdder add(vs);
  Params p = Params::relaxed(Rational(1, 2));
  SubtreeTable a = table_of({{{0, 1}, 2}});
  SubtreeTable b = table_of({{{0, 1}, 3}});
  SubtreeTable g = subtree_values_critical({{&a, 0}, {&b, 0}}, vs, p, add);
  EXPECT_EQ(g.value({1, 1}), std::optional<Rational>(5));
  EXPECT_EQ(g.value({0, 2}), std::optional<Rational>(5));
}

TEST(Critical, RoundingIntoSmallCandidateSets) {
  ValueSets vs = values({R("0.25"), R("0.5"), R("0.75"), 1});
  ValueAdder add(vs);
  ParamOverrides o;
  o.beta = Rational(1, 1);
  Params p = Params::relaxed(Rational(1, 2), o);
  SubtreeTable a = table_of({{{0, 1, 1, 1}, 1}});
  SubtreeTable g = subtree_values_critical({{&a, 0}}, vs, p, add);
  EXPECT_EQ(g.x_sets.size(), 2u);
  // X = {0.25} drops the list, X = {0.5} rounds 0.25 up
  EXPECT_EQ(g.value({1, 2}), std::optional<Rational>(1));
  EXPECT_EQ(g.value({0, 1, 1, 1}), std::nullopt);
}

TEST(Solve, Anchors) {
  Instance one({-1, 0}, {0, R("2.5")}, {{1, R("0.5")}});
  SolveResult r = solve(one, Params::relaxed(Rational(1, 2)));
  EXPECT_EQ(r.stats.cost, Rational(5));
  ASSERT_EQ(r.solution.tours.size(), 1u);
  Instance bp = gen_binpacking_path(std::vector<Rational>{R("0.6"), R("0.6"), R("0.4"), R("0.4")});
  EXPECT_EQ(solve(bp, Params::relaxed(Rational(1, 2))).stats.cost, Rational(4));
}

TEST(Solve, RandomAgainstOracle) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RandomSpec spec;
    spec.terminals = 2 + static_cast<int>(seed % 9);
    Instance inst = gen_random(spec, seed);
    Params p = Params::relaxed(Rational(1, 2 + static_cast<long>(seed % 2)));
    SolveTrace tr;
    SolveResult r = solve_traced(inst, p, {}, &tr);
    EXPECT_TRUE(check_feasible(inst, r.solution).feasible());
    EXPECT_EQ(solution_cost(tr.reduced.tree, tr.reduced_solution), tr.table_value);
    EXPECT_LE(r.stats.cost, tr.table_value);
    EXPECT_GE(r.stats.cost, exact_opt(inst).cost);
    // the chosen list accounts for all real and dummy demand
    Rational listed, carried;
    for (std::size_t i = 0; i < tr.best_key.size(); i += 2)
      listed += Rational(tr.best_key[i + 1]) * tr.values.y[tr.best_key[i]];
    for (const Tour& t : r.solution.tours) carried += tour_demand(inst, t);
    EXPECT_EQ(listed, carried);
    SolveResult again = solve(inst, p);
    EXPECT_EQ(again.stats.cost, r.stats.cost);
    ASSERT_EQ(again.solution.tours.size(), r.solution.tours.size());
    for (std::size_t i = 0; i < r.solution.tours.size(); ++i)
      EXPECT_EQ(again.solution.tours[i].terminals, r.solution.tours[i].terminals);
  }
}

TEST(Solve, CoarseRoundingStaysFeasible) {
  ParamOverrides o;
  o.beta = Rational(1, 2);
  Params p = Params::relaxed(Rational(1, 2), o);
  std::size_t widest = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    RandomSpec spec;
    spec.terminals = 3 + static_cast<int>(seed % 5);
    Instance inst = gen_random(spec, seed);
    SolveResult r = solve(inst, p);
    widest = std::max(widest, r.stats.max_x_sets);
    EXPECT_TRUE(check_feasible(inst, r.solution).feasible());
    EXPECT_GE(r.stats.cost, exact_opt(inst).cost);
    if (seed <= 4) {
      SolveOptions ex;
      ex.strategy = XStrategy::exhaustive;
      EXPECT_LE(solve(inst, p, ex).stats.cost, r.stats.cost);
    }
  }
  EXPECT_GT(widest, 1u);
}

TEST(Solve, CapsFailLoudly) {
  Instance inst = gen_random(RandomSpec{}, 3);
  SolveOptions opt;
  opt.caps.cfg = 1;
  EXPECT_THROW(solve(inst, Params::relaxed(Rational(1, 2)), opt), CapExceeded);
  SolveOptions small_y;
  small_y.caps.y = 2;
  EXPECT_THROW(solve(inst, Params::relaxed(Rational(1, 2)), small_y), CapExceeded);
}

TEST(Solve, GeneralShapes) {
  int solved = 0;
  for (std::uint64_t seed = 1; solved < 12 && seed <= 300; ++seed) {
    Instance inst = gen_random_general(10, 6, seed);
    bool at_depot = false;
    for (VertexId t : inst.terminals()) at_depot |= inst.dist(t).is_zero();
    if (at_depot) {
      EXPECT_THROW(solve(inst, Params::relaxed(Rational(1, 2))), std::invalid_argument);
      continue;
    }
    ++solved;
    SolveResult r = solve(inst, Params::relaxed(Rational(1, 2)));
    EXPECT_TRUE(check_feasible(inst, r.solution).feasible());
    EXPECT_GE(r.stats.cost, exact_opt(inst).cost);
  }
  EXPECT_EQ(solved, 12);
}
