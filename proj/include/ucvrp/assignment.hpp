#pragma once

#include <vector>

#include "ucvrp/rational.hpp"

namespace ucvrp {

struct WeightedEdge {
  int a;
  int b;
  Rational w;
};

// Bipartite graph with A = {0..a_count-1}, B = {0..b_count-1}.
struct BipartiteWeights {
  int a_count = 0;
  int b_count = 0;
  std::vector<WeightedEdge> edges;
  std::vector<Rational> b_weight;
};

// f(b) in N(b) with  sum_{f(b)=a} w(b) - sum_{(a,b)} w(a,b) <= max_b w(b)  for every a.
// Throws std::invalid_argument when some b is isolated or outweighs its edges.
std::vector<int> assign(const BipartiteWeights& g);

// Per-a value of the left-hand side of the bound for a given f.
std::vector<Rational> assignment_excess(const BipartiteWeights& g, const std::vector<int>& f);

}  // namespace ucvrp
