#pragma once

#include <cstddef>
#include <vector>

#include "ucvrp/instance.hpp"
#include "ucvrp/params.hpp"

namespace ucvrp {

struct OracleResult {
  Rational cost;
  Solution solution;
  std::size_t explored = 0;  // subsets examined by the partition DP
};

// Minimum-cost partition of the terminals into capacity-feasible tours.
// Throws std::invalid_argument above `limit` terminals.
OracleResult exact_opt(const Instance& inst, int limit = 14);

// Minimum number of unit bins; at most 12 sizes.
int binpacking_opt(const std::vector<Rational>& sizes);

enum class ItpMode { nextfit, early_close };

// Terminals in DFS order (children by increasing id) cut into consecutive segments.
Solution itp_heuristic(const Instance& inst, const Params& p, ItpMode mode);

}  // namespace ucvrp
