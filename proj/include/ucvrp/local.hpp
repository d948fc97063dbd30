#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ucvrp/decompose.hpp"

namespace ucvrp {

// Closed walk from a component root, as edge multiplicities (edge v = (parent(v), v),
// each traversal direction counted) plus the terminals it serves.
struct Subtour {
  std::map<VertexId, int> edges;
  std::set<VertexId> terminals;

  bool empty() const { return edges.empty() && terminals.empty(); }
  int mult(VertexId e) const {
    auto it = edges.find(e);
    return it == edges.end() ? 0 : it->second;
  }
  bool operator==(const Subtour&) const = default;
};

Rational subtour_cost(const Instance& inst, const Subtour& t);
Rational subtour_demand(const Instance& inst, const Subtour& t);
// exit vertex on the walk (a region without exit never has passing subtours)
bool is_passing(const Region& r, const Subtour& t);
// Doubled minimal subtree joining `root` to `reach`, serving `terminals`.
Subtour spanning_subtour(const Instance& inst, VertexId root, const std::vector<VertexId>& reach,
                         const std::set<VertexId>& terminals);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A removed piece cannot reach the component root through nice edges.
class ReconnectError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LocalDiagnostics {
  std::map<int, int> threshold_cells;  // cluster index -> cell index
  std::vector<Subtour> removed_pieces;
  std::set<VertexId> nice_edges;
  Rational extra_cost_step2;
  Rational extra_cost_step5;
  Rational threshold_spines;  // one-way spine weight summed over threshold cells
  std::array<std::vector<Subtour>, 5> stages;  // subtour sets after steps 0..4
};

struct LocalResult {
  std::vector<Subtour> s_star;
  Subtour bar_t;
  LocalDiagnostics diag;
};

// Default limit on |s_c| is 2*gamma/alpha + 1.
LocalResult local_simplify(const Instance& inst, const Hierarchy& h, int component,
                           const std::vector<Subtour>& s_c, const Params& p,
                           std::optional<std::size_t> max_subtours = std::nullopt);

int threshold_cell(const Instance& inst, const Hierarchy& h, int cluster, const Subtour& t_e);
std::set<VertexId> nice_edges(const std::vector<Subtour>& a2);
Subtour reconnect_removed(const Instance& inst, const Region& c, const std::vector<Subtour>& pieces,
                          const std::set<VertexId>& nice, Rational* used_nice_cost = nullptr);

}  // namespace ucvrp
