#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ucvrp/rational.hpp"

namespace ucvrp {

using VertexId = int;
inline constexpr VertexId kNoVertex = -1;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Rooted edge-weighted tree with terminal demands. Vertex ids are 0..size()-1.
// weight(v) is the weight of the edge from v to its parent (0 at the root).
class Instance {
 public:
  Instance() = default;
  // Validates: single root, acyclic, weights >= 0, demands in (0,1].
  Instance(std::vector<VertexId> parent, std::vector<Rational> weight,
           const std::map<VertexId, Rational>& demands);

  int size() const { return static_cast<int>(parent_.size()); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  const Rational& weight(VertexId v) const { return weight_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  bool is_terminal(VertexId v) const { return terminal_[v]; }
  const Rational& demand(VertexId v) const { return demand_[v]; }
  const std::vector<VertexId>& terminals() const { return terminals_; }

  // weighted distance from the root, and hop depth
  const Rational& dist(VertexId v) const { return dist_[v]; }
  int depth(VertexId v) const { return depth_[v]; }
  // vertices in preorder (children in stored order)
  const std::vector<VertexId>& preorder() const { return preorder_; }
  bool is_ancestor(VertexId a, VertexId v) const;  // a == v counts
  Rational total_demand() const;
  bool contains(VertexId v) const { return v >= 0 && v < size(); }

  const std::vector<VertexId>& parents() const { return parent_; }
  const std::vector<Rational>& weights() const { return weight_; }
  std::map<VertexId, Rational> demand_map() const;

 private:
  std::vector<VertexId> parent_;
  std::vector<Rational> weight_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<bool> terminal_;
  std::vector<Rational> demand_;
  std::vector<VertexId> terminals_;
  std::vector<Rational> dist_;
  std::vector<int> depth_;
  std::vector<VertexId> preorder_;
  std::vector<int> pre_index_, post_index_;
  VertexId root_ = kNoVertex;
};

struct Tour {
  std::vector<VertexId> terminals;  // sorted
  Rational dummy;
};

struct Solution {
  std::vector<Tour> tours;
};

Instance parse_instance(std::istream& in);
Instance parse_instance_text(std::string_view text);
void write_instance(std::ostream& out, const Instance& inst);

struct Normalized {
  Instance tree;
  // normalized vertex -> original vertex; kNoVertex for splitters
  std::vector<VertexId> origin;
};

Normalized preprocess(const Instance& inst);
// every internal vertex except possibly the root has two children, terminals are the leaves
bool is_normalized(const Instance& inst);

// 2 x weight of the minimal subtree spanning the root and `vertices`
Rational tour_cost(const Instance& inst, std::span<const VertexId> vertices);
Rational tour_demand(const Instance& inst, const Tour& t);
Rational solution_cost(const Instance& inst, const Solution& sol);

struct Violation {
  enum class Kind { uncovered, multiply_covered, capacity, unknown_terminal, bad_dummy, empty_tour };
  Kind kind;
  int tour = -1;
  VertexId terminal = kNoVertex;
  Rational excess;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

FeasibilityReport check_feasible(const Instance& inst, const Solution& sol);

bool check_bounded_distance(const Instance& inst, const Rational& eps);

// 1/eps for eps = 1/k; throws otherwise
int inverse_epsilon(const Rational& eps);

}  // namespace ucvrp
