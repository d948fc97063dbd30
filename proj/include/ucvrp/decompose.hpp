#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucvrp/instance.hpp"
#include "ucvrp/params.hpp"

namespace ucvrp {

enum class RegionKind { component, block, cluster, cell };

// Edges are named by their lower endpoint: edge v is (parent(v), v).
struct Region {
  RegionKind kind = RegionKind::component;
  std::vector<VertexId> edges;     // sorted
  std::vector<VertexId> vertices;  // sorted; root plus lower endpoints (a singleton has no edges)
  VertexId root = kNoVertex;
  std::optional<VertexId> exit;
  std::vector<VertexId> spine;  // root .. exit, empty for ending regions
  // produced as a leaf piece by the peeling construction (leaf cluster, exit singleton,
  // or the whole region when nothing qualified)
  bool leaf_piece = false;

  bool passing() const { return exit.has_value(); }
  bool has_vertex(VertexId v) const;
  bool has_edge(VertexId v) const;
  // root and exit excluded
  bool strictly_inside(VertexId v) const { return has_vertex(v) && v != root && (!exit || v != *exit); }
};

Rational region_demand(const Instance& inst, const Region& r);  // terminals strictly inside
Rational spine_weight(const Instance& inst, const Region& r);
std::vector<VertexId> path_down(const Instance& inst, VertexId top, VertexId bottom);  // top..bottom

struct Hierarchy {
  std::vector<Region> components, blocks, clusters, cells;
  std::vector<std::vector<int>> blocks_of, clusters_of, cells_of;  // by parent index
  std::vector<int> block_component, cluster_block, cell_cluster;
  std::vector<std::vector<VertexId>> big_terminals_of;
  std::vector<int> component_of_edge;  // by lower endpoint, -1 at the root

  std::vector<int> clusters_of_component(int c) const;
  std::vector<int> cells_of_component(int c) const;
};

std::vector<Region> split_components(const Instance& inst, const Params& p);
std::vector<Region> split_blocks(const Instance& inst, const Region& component, const Params& p);
std::vector<Region> split_clusters(const Instance& inst, const Region& block, const Params& p);
std::vector<Region> split_cells(const Instance& inst, const Region& cluster, const Params& p);
std::vector<VertexId> big_terminals(const Instance& inst, const Region& component, const Params& p);

Hierarchy decompose(const Instance& inst, const Params& p);

struct CountReport {
  int big = 0, blocks = 0, cells = 0;
  Rational big_bound, block_bound, cell_bound;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

CountReport count_check(const Instance& inst, const Hierarchy& h, int component, const Params& p);

// Indented text listing of the hierarchy.
std::string describe(const Instance& inst, const Hierarchy& h);

}  // namespace ucvrp
