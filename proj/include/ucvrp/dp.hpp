#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ucvrp/structure.hpp"

namespace ucvrp {

enum class SubtourKind : std::uint8_t { ending = 0, passing = 1 };

struct Caps {
  std::size_t y = 200000;          // |Y|
  std::size_t cfg = 12;            // distinct values (or pairs) per configuration list
  std::size_t parts = 12;          // |Q_c| for the partition search
  std::size_t table = 2000000;     // entries per table
  std::size_t x_budget = 10000;    // candidate sets X per critical vertex
};

enum class XStrategy { realizable, exhaustive };

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const;
};

// Local configuration list in canonical form: sorted codes 2*value_id + kind.
using LocalKey = std::vector<int>;
// Subtree configuration list in canonical form: flattened (value_id, count) pairs,
// value ids increasing, counts positive.
using SubtreeKey = std::vector<int>;

inline int local_code(int value_id, SubtourKind k) { return 2 * value_id + static_cast<int>(k); }

// Partition search for one component: all configurations whose values are tight,
// i.e. y = max(demand(part), alpha).
struct LocalTable {
  struct Node {
    LocalKey key;
    Rational cost;
    std::uint32_t block = 0;  // parts added by the last step
    int code = 0;
    int prev = -1;  // index into layers[mask ^ block]
  };
  std::vector<QPart> parts;
  std::vector<std::vector<Node>> layers;  // by covered mask
  std::vector<std::unordered_map<LocalKey, int, VecHash>> index;

  const std::vector<Node>& entries() const { return layers.back(); }
  std::optional<Rational> value(const LocalKey& key) const;
  // (mask, code) per subtour of the witness for entry i of the full layer
  std::vector<std::pair<std::uint32_t, int>> witness(int i) const;
};

LocalTable local_config_values(const Instance& inst, const Hierarchy& h, int c, const ValueSets& vs,
                               const Params& p, bool allow_passing, const Caps& caps = {});

// Direct evaluation of f(c, A) for any list: minimum over partitions of Q_c into
// |A| nonempty parts with demand(part i) <= y_i. Nullopt means infinity.
std::optional<Rational> evaluate_local_config(const Instance& inst, const Hierarchy& h, int c,
                                              const ValueSets& vs, const Params& p,
                                              const std::vector<std::pair<Rational, SubtourKind>>& list);

struct SubtreeTable {
  struct RootTrace {
    int local = -1;  // entry of the local table
    int exit = -1;   // entry of the exit table, -1 when there is none
    std::vector<int> assoc;  // exit value id for each passing local pair, key order
  };
  struct Step {
    std::shared_ptr<const Step> prev;
    int child = 0;        // position among the critical vertex's children
    int child_entry = 0;  // entry of that child's table
    std::vector<std::array<int, 3>> assoc;  // (accumulated value, child value, count)
  };
  struct CriticalTrace {
    int x = -1;  // candidate set index
    std::shared_ptr<const Step> steps;
  };
  struct Entry {
    SubtreeKey key;
    Rational cost;
    RootTrace root;
    CriticalTrace crit;
  };
  std::vector<Entry> entries;
  std::unordered_map<SubtreeKey, int, VecHash> index;
  std::vector<std::vector<int>> x_sets;  // critical tables: candidate value-id sets

  std::optional<Rational> value(const SubtreeKey& key) const;
  // keep the cheaper entry; on ties the first one stays
  bool offer(Entry e);
};

// Sums of value ids, with a cache; -1 when the sum exceeds 1.
class ValueAdder {
 public:
  explicit ValueAdder(const ValueSets& vs) : vs_(vs) {}
  int sum(int a, int b);

 private:
  const ValueSets& vs_;
  std::unordered_map<std::uint64_t, int> cache_;
};

SubtreeTable subtree_values_component_root(const LocalTable& f, const SubtreeTable* g_exit,
                                           const Rational& spine_weight, ValueAdder& add,
                                           const Caps& caps = {});

struct ChildTable {
  const SubtreeTable* table;
  Rational weight;  // edge from the child root to the critical vertex
};

SubtreeTable subtree_values_critical(const std::vector<ChildTable>& children, const ValueSets& vs,
                                     const Params& p, ValueAdder& add, const Caps& caps = {},
                                     XStrategy strategy = XStrategy::realizable);

struct SolveOptions {
  Caps caps;
  XStrategy strategy = XStrategy::realizable;
};

struct SolveStats {
  int terminals = 0;
  int components = 0;
  int critical = 0;
  std::size_t y_size = 0;
  std::size_t table_entries = 0;
  std::size_t max_x_sets = 0;
  Rational reduced_cost;  // value read from the root table
  Rational cost;          // on the input instance
  double wall_ms = 0;
};

struct SolveResult {
  Solution solution;  // ids of the input instance
  SolveStats stats;
};

SolveResult solve(const Instance& inst, const Params& p, const SolveOptions& opt = {});

// Traced tours on the normalized tree and its reduced tree, for tests that need the
// intermediate artefacts.
struct SolveTrace {
  Normalized normalized;
  Hierarchy hierarchy;
  ReducedTree reduced;
  ValueSets values;
  Solution reduced_solution;  // ids of the reduced tree (= normalized ids)
  Rational table_value;
  std::vector<SubtreeKey> root_keys;  // all keys of the depot table
  SubtreeKey best_key;
};

SolveResult solve_traced(const Instance& inst, const Params& p, const SolveOptions& opt, SolveTrace* trace);

}  // namespace ucvrp
