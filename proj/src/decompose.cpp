#include "ucvrp/decompose.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ucvrp {

bool Region::has_vertex(VertexId v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
bool Region::has_edge(VertexId v) const { return std::binary_search(edges.begin(), edges.end(), v); }

Rational region_demand(const Instance& inst, const Region& r) {
  Rational d;
  for (VertexId v : r.vertices)
    if (inst.is_terminal(v) && r.strictly_inside(v)) d += inst.demand(v);
  return d;
}

Rational spine_weight(const Instance& inst, const Region& r) {
  Rational s;
  for (std::size_t i = 1; i < r.spine.size(); ++i) s += inst.weight(r.spine[i]);
  return s;
}

std::vector<VertexId> path_down(const Instance& inst, VertexId top, VertexId bottom) {
  std::vector<VertexId> p;
  for (VertexId v = bottom; v != top; v = inst.parent(v)) {
    if (v == kNoVertex) throw std::logic_error("path_down: not an ancestor");
    p.push_back(v);
  }
  p.push_back(top);
  std::reverse(p.begin(), p.end());
  return p;
}

static Region make_region(const Instance& inst, RegionKind kind, std::vector<VertexId> edges, VertexId root,
                          std::optional<VertexId> exit, bool leaf_piece) {
  Region r;
  r.kind = kind;
  std::sort(edges.begin(), edges.end());
  r.edges = std::move(edges);
  r.vertices = r.edges;
  r.vertices.push_back(root);
  std::sort(r.vertices.begin(), r.vertices.end());
  r.root = root;
  r.exit = exit;
  if (exit) r.spine = path_down(inst, root, *exit);
  r.leaf_piece = leaf_piece;
  return r;
}

namespace {

// Children restricted to a region's edges.
struct RegionTree {
  const Instance& inst;
  const Region& region;
  std::vector<std::vector<VertexId>> kids;
  std::vector<VertexId> order;  // region vertices, preorder

  RegionTree(const Instance& in, const Region& r) : inst(in), region(r), kids(in.size()) {
    for (VertexId v : r.edges) kids[inst.parent(v)].push_back(v);
    for (auto& k : kids) std::sort(k.begin(), k.end());
    std::vector<VertexId> stack{r.root};
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
    }
  }

  // edges of the subtree under v (within the region), skipping the subtree under `stop`
  void collect(VertexId v, VertexId stop, std::vector<VertexId>& out) const {
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      if (u == stop) continue;
      for (VertexId c : kids[u]) {
        out.push_back(c);
        stack.push_back(c);
      }
    }
  }
};

// Peeling construction shared by components (threshold gamma over the whole tree)
// and clusters (threshold gamma_prime over a block).
std::vector<Region> peel(const Instance& inst, const Region& region, const Rational& threshold, RegionKind kind) {
  RegionTree t(inst, region);
  const int n = inst.size();
  std::vector<Rational> below(n);  // demand strictly inside region within T(v)
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    VertexId v = *it;
    if (inst.is_terminal(v) && region.strictly_inside(v)) below[v] = inst.demand(v);
    for (VertexId c : t.kids[v]) below[v] += below[c];
  }

  std::vector<VertexId> leaf_roots;
  for (VertexId v : t.order) {
    if (below[v] < threshold) continue;
    bool lowest = true;
    for (VertexId c : t.kids[v]) lowest = lowest && below[c] < threshold;
    if (lowest) leaf_roots.push_back(v);
  }
  std::sort(leaf_roots.begin(), leaf_roots.end());

  std::vector<Region> out;
  std::optional<VertexId> exit_singleton;
  if (region.exit) {
    bool covered = false;
    for (VertexId l : leaf_roots) covered = covered || inst.is_ancestor(l, *region.exit);
    if (!covered) exit_singleton = *region.exit;
  }
  if (leaf_roots.empty() && !exit_singleton) {
    out.push_back(make_region(inst, kind, region.edges, region.root, region.exit, true));
    return out;
  }

  for (VertexId l : leaf_roots) {
    std::vector<VertexId> edges;
    t.collect(l, kNoVertex, edges);
    std::optional<VertexId> ex;
    if (region.exit && inst.is_ancestor(l, *region.exit)) ex = *region.exit;
    out.push_back(make_region(inst, kind, std::move(edges), l, ex, true));
  }
  if (exit_singleton) out.push_back(make_region(inst, kind, {}, *exit_singleton, exit_singleton, true));

  std::vector<VertexId> ends = leaf_roots;
  if (exit_singleton) ends.push_back(*exit_singleton);
  std::vector<bool> on_backbone(n, false);
  on_backbone[region.root] = true;
  for (VertexId e : ends)
    for (VertexId v = e; !on_backbone[v]; v = inst.parent(v)) on_backbone[v] = true;
  std::vector<bool> key(n, false);
  key[region.root] = true;
  for (VertexId e : ends) key[e] = true;
  for (VertexId v : t.order) {
    int bb = 0;
    for (VertexId c : t.kids[v]) bb += on_backbone[c] ? 1 : 0;
    if (on_backbone[v] && bb >= 2) key[v] = true;
  }

  // side subtrees of the region root that carry no backbone join the root's top cluster
  std::vector<VertexId> orphans;
  for (VertexId c : t.kids[region.root])
    if (!on_backbone[c]) orphans.push_back(c);

  for (VertexId v2 : t.order) {
    if (!key[v2] || v2 == region.root) continue;
    VertexId below_v1 = v2;
    while (!key[inst.parent(below_v1)]) below_v1 = inst.parent(below_v1);
    VertexId v1 = inst.parent(below_v1);

    VertexId x = v2;
    for (VertexId v = inst.parent(x); v != v1; v = inst.parent(v)) {
      if (below[v] - below[x] >= threshold) {
        std::vector<VertexId> edges;
        t.collect(v, x, edges);
        out.push_back(make_region(inst, kind, std::move(edges), v, x, false));
        x = v;
      }
    }
    std::vector<VertexId> edges{below_v1};
    if (x != below_v1) t.collect(below_v1, x, edges);
    if (v1 == region.root && !orphans.empty()) {
      for (VertexId o : orphans) {
        edges.push_back(o);
        t.collect(o, kNoVertex, edges);
      }
      orphans.clear();
    }
    out.push_back(make_region(inst, kind, std::move(edges), v1, x, false));
  }
  return out;
}

}  // namespace

std::vector<Region> split_components(const Instance& inst, const Params& p) {
  Region whole;
  for (VertexId v = 0; v < inst.size(); ++v)
    if (v != inst.root()) whole.edges.push_back(v);
  whole = make_region(inst, RegionKind::component, whole.edges, inst.root(), std::nullopt, false);
  auto comps = peel(inst, whole, p.gamma, RegionKind::component);
  // a component without edges can only come from a terminal-less tree made of the root alone
  return comps;
}

std::vector<VertexId> big_terminals(const Instance& inst, const Region& component, const Params& p) {
  std::vector<VertexId> big;
  for (VertexId v : component.vertices)
    if (inst.is_terminal(v) && inst.demand(v) > p.gamma_prime) big.push_back(v);
  return big;
}

std::vector<Region> split_blocks(const Instance& inst, const Region& c, const Params& p) {
  RegionTree t(inst, c);
  const int n = inst.size();
  std::vector<bool> in_u(n, false), in_tu(n, false), key(n, false);
  std::vector<VertexId> u = big_terminals(inst, c, p);
  u.push_back(c.root);
  if (c.exit) u.push_back(*c.exit);
  for (VertexId x : u) {
    in_u[x] = true;
    for (VertexId v = x; !in_tu[v]; v = inst.parent(v)) {
      in_tu[v] = true;
      if (v == c.root) break;
    }
  }
  for (VertexId v : t.order) {
    int k = 0;
    for (VertexId ch : t.kids[v]) k += in_tu[ch] ? 1 : 0;
    key[v] = in_u[v] || (in_tu[v] && k >= 2);
  }

  std::vector<Region> out;
  for (VertexId k : t.order) {
    if (!key[k]) continue;
    for (VertexId first : t.kids[k]) {
      std::vector<VertexId> edges;
      std::optional<VertexId> exit;
      std::vector<VertexId> stack{first};
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        edges.push_back(v);
        if (key[v]) {
          if (exit) throw std::logic_error("block with two exits");
          exit = v;
          continue;
        }
        for (VertexId ch : t.kids[v]) stack.push_back(ch);
      }
      out.push_back(make_region(inst, RegionKind::block, std::move(edges), k, exit, false));
    }
  }
  return out;
}

std::vector<Region> split_clusters(const Instance& inst, const Region& b, const Params& p) {
  return peel(inst, b, p.gamma_prime, RegionKind::cluster);
}

std::vector<Region> split_cells(const Instance& inst, const Region& x, const Params& p) {
  Rational len = spine_weight(inst, x);
  if (!x.passing() || len.is_zero()) {
    Region cell = x;
    cell.kind = RegionKind::cell;
    cell.leaf_piece = false;
    return {cell};
  }
  const int k = p.inv_eps();
  const Rational base = inst.dist(x.root);
  std::vector<VertexId> cuts;
  for (int i = 1; i < k; ++i) {
    Rational target = Rational(i) * p.eps * len;
    for (std::size_t j = 1; j < x.spine.size(); ++j) {
      VertexId lo = x.spine[j];
      Rational a = inst.dist(inst.parent(lo)) - base, b = inst.dist(lo) - base;
      if (a <= target && target < b) {
        if (cuts.empty() || cuts.back() != lo) cuts.push_back(lo);
        break;
      }
    }
  }

  RegionTree t(inst, x);
  std::vector<int> cell_of(inst.size(), -1);
  std::vector<std::vector<VertexId>> edges(cuts.size() + 1);
  cell_of[x.root] = 0;
  for (VertexId v : t.order) {
    if (v == x.root) continue;
    auto it = std::find(cuts.begin(), cuts.end(), v);
    if (it != cuts.end()) {
      cell_of[v] = static_cast<int>(it - cuts.begin()) + 1;
    } else {
      cell_of[v] = cell_of[inst.parent(v)];
      edges[cell_of[v]].push_back(v);
    }
  }
  std::vector<Region> out;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    VertexId root = i == 0 ? x.root : cuts[i - 1];
    VertexId exit = i < cuts.size() ? inst.parent(cuts[i]) : *x.exit;
    out.push_back(make_region(inst, RegionKind::cell, std::move(edges[i]), root, exit, false));
  }
  return out;
}

Hierarchy decompose(const Instance& inst, const Params& p) {
  Hierarchy h;
  h.components = split_components(inst, p);
  h.component_of_edge.assign(inst.size(), -1);
  for (int c = 0; c < static_cast<int>(h.components.size()); ++c) {
    const Region& comp = h.components[c];
    for (VertexId e : comp.edges) h.component_of_edge[e] = c;
    h.big_terminals_of.push_back(big_terminals(inst, comp, p));
    h.blocks_of.emplace_back();
    for (Region& b : split_blocks(inst, comp, p)) {
      int bi = static_cast<int>(h.blocks.size());
      h.blocks_of[c].push_back(bi);
      h.block_component.push_back(c);
      h.clusters_of.emplace_back();
      for (Region& x : split_clusters(inst, b, p)) {
        int xi = static_cast<int>(h.clusters.size());
        h.clusters_of[bi].push_back(xi);
        h.cluster_block.push_back(bi);
        h.cells_of.emplace_back();
        for (Region& s : split_cells(inst, x, p)) {
          h.cells_of[xi].push_back(static_cast<int>(h.cells.size()));
          h.cell_cluster.push_back(xi);
          h.cells.push_back(std::move(s));
        }
        h.clusters.push_back(std::move(x));
      }
      h.blocks.push_back(std::move(b));
    }
  }
  return h;
}

std::vector<int> Hierarchy::clusters_of_component(int c) const {
  std::vector<int> out;
  for (int b : blocks_of[c])
    for (int x : clusters_of[b]) out.push_back(x);
  return out;
}

std::vector<int> Hierarchy::cells_of_component(int c) const {
  std::vector<int> out;
  for (int x : clusters_of_component(c))
    for (int s : cells_of[x]) out.push_back(s);
  return out;
}

CountReport count_check(const Instance& inst, const Hierarchy& h, int c, const Params& p) {
  (void)inst;
  CountReport r;
  r.big = static_cast<int>(h.big_terminals_of[c].size());
  r.blocks = static_cast<int>(h.blocks_of[c].size());
  r.cells = static_cast<int>(h.cells_of_component(c).size());
  Rational ratio = p.gamma / p.gamma_prime;
  r.big_bound = Rational(2) * ratio;
  r.block_bound = Rational(4) + Rational(4) * ratio;
  r.cell_bound = r.block_bound * Rational(3) * (Rational(2) * ratio + Rational(1)) * Rational(p.inv_eps());
  auto check = [&](const char* what, int count, const Rational& bound) {
    if (Rational(count) > bound)
      r.violations.push_back(std::string("component ") + std::to_string(c) + ": " + what + " count " +
                             std::to_string(count) + " exceeds bound " + bound.str());
  };
  check("big terminal", r.big, r.big_bound);
  check("block", r.blocks, r.block_bound);
  check("cell", r.cells, r.cell_bound);
  return r;
}

static std::string fmt_region(const Instance& inst, const char* name, int id, const Region& r) {
  std::ostringstream os;
  os << name << ' ' << id << " root=" << r.root << " exit=";
  if (r.exit) os << *r.exit;
  else os << '-';
  os << " edges=" << r.edges.size() << " demand=" << region_demand(inst, r).str();
  if (r.passing()) os << " spine=" << spine_weight(inst, r).str();
  return os.str();
}

std::string describe(const Instance& inst, const Hierarchy& h) {
  std::ostringstream os;
  for (std::size_t c = 0; c < h.components.size(); ++c) {
    os << fmt_region(inst, "component", static_cast<int>(c), h.components[c]) << " big=";
    for (std::size_t i = 0; i < h.big_terminals_of[c].size(); ++i)
      os << (i ? "," : "") << h.big_terminals_of[c][i];
    os << '\n';
    for (int b : h.blocks_of[c]) {
      os << "  " << fmt_region(inst, "block", b, h.blocks[b]) << '\n';
      for (int x : h.clusters_of[b]) {
        os << "    " << fmt_region(inst, "cluster", x, h.clusters[x]) << '\n';
        for (int s : h.cells_of[x]) os << "      " << fmt_region(inst, "cell", s, h.cells[s]) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace ucvrp
