#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ucvrp/decompose.hpp"

namespace ucvrp {

// Height-reduced tree. Original vertices keep their ids; each component whose root is
// not its critical vertex gets a copy of its root appended after them.
struct ReducedTree {
  Instance tree;
  std::vector<VertexId> origin;             // reduced vertex -> original vertex
  std::vector<VertexId> critical_vertices;  // sorted
  std::vector<int> band_of;                 // per component, 1-based
  std::vector<VertexId> critical_of;        // per component
  std::vector<VertexId> root_copy;          // per component: its root in the reduced tree
  std::vector<Rational> attach_weight;      // per component: dist(critical, root)
  Rational band_width;
  int max_band = 0;
  bool within_band_limit = true;  // every band <= h_eps

  // components hanging from critical vertex z, in component order
  std::vector<int> children_of_critical(VertexId z) const;
};

ReducedTree height_reduce(const Instance& inst, const Hierarchy& h, const Params& p);

// Tours keep their terminals and dummy demand; costs are re-read on the original tree.
Solution map_back(const ReducedTree& rt, const Solution& sol);

struct QPart {
  std::vector<VertexId> terminals;
  Rational demand;
  int cell = -1;  // -1 for a singleton (big terminal or a terminal on a cell boundary)
};

struct ValueSets {
  std::vector<std::vector<QPart>> q_c;
  std::vector<std::vector<Rational>> y_c;  // sorted
  std::vector<Rational> y;                 // sorted
  int index_of(const Rational& v) const;   // -1 when absent
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<QPart> component_parts(const Instance& inst, const Hierarchy& h, int c, const Params& p);
ValueSets build_value_sets(const Instance& inst, const Hierarchy& h, const Params& p, std::size_t cap = 200000);

struct RoundingResult {
  std::vector<std::vector<Rational>> groups;  // ascending, zero padding first
  std::vector<Rational> rounded;    // rounded values of groups 1..k-1, in slot order
  std::vector<Rational> replaced;   // originals of groups 2..k they displace, same order
  std::vector<Rational> discarded;  // last group
};

RoundingResult adaptive_round(std::vector<Rational> demands, const Rational& beta);

}  // namespace ucvrp
