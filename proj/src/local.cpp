#include "ucvrp/local.hpp"

#include <algorithm>

#include "ucvrp/assignment.hpp"

namespace ucvrp {

Rational subtour_cost(const Instance& inst, const Subtour& t) {
  Rational c;
  for (const auto& [e, m] : t.edges) c += inst.weight(e) * Rational(m);
  return c;
}

Rational subtour_demand(const Instance& inst, const Subtour& t) {
  Rational d;
  for (VertexId v : t.terminals) d += inst.demand(v);
  return d;
}

bool is_passing(const Region& r, const Subtour& t) {
  if (!r.exit) return false;
  if (*r.exit == r.root) return !t.empty();
  return t.mult(*r.exit) > 0;
}

Subtour spanning_subtour(const Instance& inst, VertexId root, const std::vector<VertexId>& reach,
                         const std::set<VertexId>& terminals) {
  Subtour t;
  t.terminals = terminals;
  auto climb = [&](VertexId v) {
    for (; v != root && !t.edges.count(v); v = inst.parent(v)) {
      if (v == inst.root()) throw std::invalid_argument("vertex not below the given root");
      t.edges[v] = 2;
    }
  };
  for (VertexId v : reach) climb(v);
  for (VertexId v : terminals) climb(v);
  return t;
}

namespace {

// Edges and strictly-inside terminals of `t` within region r, with spine copies kept
// back when `keep_spine` (two per spine edge).
Subtour take_restriction(const Instance& inst, Subtour& t, const Region& r, bool keep_spine) {
  Subtour piece;
  std::set<VertexId> spine_edges;
  if (keep_spine)
    for (std::size_t i = 1; i < r.spine.size(); ++i) spine_edges.insert(r.spine[i]);
  for (auto it = t.edges.begin(); it != t.edges.end();) {
    if (!r.has_edge(it->first)) {
      ++it;
      continue;
    }
    int keep = spine_edges.count(it->first) ? std::min(it->second, 2) : 0;
    if (it->second > keep) piece.edges[it->first] = it->second - keep;
    if (keep == 0) {
      it = t.edges.erase(it);
    } else {
      it->second = keep;
      ++it;
    }
  }
  for (auto it = t.terminals.begin(); it != t.terminals.end();) {
    if (inst.is_terminal(*it) && r.strictly_inside(*it)) {
      piece.terminals.insert(*it);
      it = t.terminals.erase(it);
    } else {
      ++it;
    }
  }
  return piece;
}

void absorb(Subtour& into, const Subtour& piece) {
  for (const auto& [e, m] : piece.edges) into.edges[e] += m;
  into.terminals.insert(piece.terminals.begin(), piece.terminals.end());
}

Subtour restriction(const Subtour& t, const Region& r) {
  Subtour out;
  for (const auto& [e, m] : t.edges)
    if (r.has_edge(e)) out.edges[e] = m;
  for (VertexId v : t.terminals)
    if (r.strictly_inside(v)) out.terminals.insert(v);
  return out;
}

Rational inside_demand(const Instance& inst, const Subtour& t, const Region& r) {
  Rational d;
  for (VertexId v : t.terminals)
    if (r.strictly_inside(v)) d += inst.demand(v);
  return d;
}

bool restriction_nonempty(const Subtour& t, const Region& r) {
  for (const auto& [e, m] : t.edges)
    if (r.has_edge(e)) return true;
  return false;
}

bool is_spine_only(const Subtour& rest, const Region& s) {
  if (!rest.terminals.empty() || rest.edges.size() + 1 != s.spine.size()) return false;
  for (std::size_t i = 1; i < s.spine.size(); ++i)
    if (rest.mult(s.spine[i]) != 2) return false;
  return true;
}

void validate(const Instance& inst, const Hierarchy& h, int c, const std::vector<Subtour>& s_c,
              const Params& p, std::optional<std::size_t> max_subtours) {
  const Region& comp = h.components[c];
  Rational limit = Rational(2) * p.gamma / p.alpha + Rational(1);
  if (max_subtours ? s_c.size() > *max_subtours : Rational(static_cast<long>(s_c.size())) > limit)
    throw PreconditionError("too many subtours: " + std::to_string(s_c.size()));
  std::map<VertexId, int> seen;
  for (std::size_t i = 0; i < s_c.size(); ++i) {
    const Subtour& t = s_c[i];
    for (const auto& [e, m] : t.edges) {
      if (!comp.has_edge(e)) throw PreconditionError("subtour " + std::to_string(i) + " leaves the component");
      if (m <= 0 || m % 2) throw PreconditionError("subtour " + std::to_string(i) + " is not a closed walk");
      VertexId up = inst.parent(e);
      if (up != comp.root && t.mult(up) == 0)
        throw PreconditionError("subtour " + std::to_string(i) + " is not connected to the component root");
    }
    for (VertexId v : t.terminals) {
      if (!inst.is_terminal(v) || !comp.strictly_inside(v))
        throw PreconditionError("subtour " + std::to_string(i) + " serves " + std::to_string(v) +
                                ", not a terminal of the component");
      if (t.mult(v) == 0) throw PreconditionError("subtour " + std::to_string(i) + " serves an unvisited terminal");
      if (seen.count(v)) throw PreconditionError("terminal " + std::to_string(v) + " served twice");
      seen[v] = static_cast<int>(i);
    }
  }
  for (VertexId v : comp.vertices)
    if (inst.is_terminal(v) && comp.strictly_inside(v) && !seen.count(v))
      throw PreconditionError("uncovered terminal " + std::to_string(v));
  for (int x : h.clusters_of_component(c)) {
    const Region& cl = h.clusters[x];
    if (!cl.passing() || cl.edges.empty()) continue;
    bool reached = std::any_of(s_c.begin(), s_c.end(), [&](const Subtour& t) { return t.mult(*cl.exit) > 0; });
    if (!reached) throw PreconditionError("no subtour passes cluster " + std::to_string(x));
  }
}

}  // namespace

int threshold_cell(const Instance& inst, const Hierarchy& h, int cluster, const Subtour& t_e) {
  (void)inst;
  const Region& x = h.clusters[cluster];
  const auto& cells = h.cells_of[cluster];
  int best = -1;
  auto consider = [&](VertexId v) {
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
      if (h.cells[cells[i]].has_vertex(v)) best = std::max(best, i);
  };
  bool touches = false;
  for (const auto& [e, m] : t_e.edges)
    if (x.has_edge(e)) {
      touches = true;
      consider(e);
    }
  if (!touches && t_e.edges.empty() && t_e.terminals.empty()) touches = true;  // walk sitting at r_x
  if (!touches) throw std::invalid_argument("subtour has no vertex in the cluster");
  consider(x.root);
  return cells[best];
}

std::set<VertexId> nice_edges(const std::vector<Subtour>& a2) {
  std::map<VertexId, int> count;
  for (const Subtour& t : a2)
    for (const auto& [e, m] : t.edges)
      if (m > 0) ++count[e];
  std::set<VertexId> out;
  for (const auto& [e, k] : count)
    if (k >= 2) out.insert(e);
  return out;
}

Subtour reconnect_removed(const Instance& inst, const Region& c, const std::vector<Subtour>& pieces,
                          const std::set<VertexId>& nice, Rational* used_nice_cost) {
  Subtour bar;
  for (const Subtour& q : pieces) absorb(bar, q);
  if (used_nice_cost) *used_nice_cost = Rational(0);
  if (bar.edges.empty()) return bar;

  // connected parts of the union of pieces
  std::map<VertexId, VertexId> uf;
  auto find = [&](VertexId v) {
    VertexId r = v;
    while (uf.count(r) && uf[r] != r) r = uf[r];
    while (uf.count(v) && uf[v] != r) {
      VertexId next = uf[v];
      uf[v] = r;
      v = next;
    }
    return r;
  };
  for (const auto& [e, m] : bar.edges) {
    VertexId a = find(e), b = find(inst.parent(e));
    uf[a] = a;
    uf[b] = b;
    if (a != b) uf[a] = b;
  }
  std::map<VertexId, std::vector<VertexId>> members;
  for (const auto& [v, r] : uf) members[find(v)].push_back(v);
  std::vector<std::pair<VertexId, const std::vector<VertexId>*>> parts;
  for (const auto& [r, vs] : members) {
    VertexId top = *std::min_element(vs.begin(), vs.end(), [&](VertexId x, VertexId y) {
      return inst.depth(x) != inst.depth(y) ? inst.depth(x) < inst.depth(y) : x < y;
    });
    parts.push_back({top, &vs});
  }
  std::sort(parts.begin(), parts.end(), [&](const auto& x, const auto& y) {
    return inst.depth(x.first) != inst.depth(y.first) ? inst.depth(x.first) < inst.depth(y.first) : x.first < y.first;
  });

  std::set<VertexId> connected{c.root};
  Rational used;
  for (const auto& [top, vs] : parts) {
    for (VertexId u = top; !connected.count(u); u = inst.parent(u)) {
      if (!c.has_edge(u)) throw ReconnectError("piece at vertex " + std::to_string(top) + " escapes the component");
      if (!nice.count(u))
        throw ReconnectError("piece at vertex " + std::to_string(top) + " cannot reach the root through nice edges");
      bar.edges[u] += 2;
      used += inst.weight(u);
      connected.insert(u);
    }
    connected.insert(vs->begin(), vs->end());
  }
  if (used_nice_cost) *used_nice_cost = used * Rational(2);
  return bar;
}

LocalResult local_simplify(const Instance& inst, const Hierarchy& h, int c, const std::vector<Subtour>& s_c,
                           const Params& p, std::optional<std::size_t> max_subtours) {
  validate(inst, h, c, s_c, p, max_subtours);
  const std::vector<int> clusters = h.clusters_of_component(c);
  LocalResult res;
  LocalDiagnostics& diag = res.diag;
  std::vector<Subtour> a = s_c;
  const int m = static_cast<int>(a.size());
  diag.stages[0] = a;

  // Step 1: per cluster, gather ending restrictions onto one subtour
  for (int x : clusters) {
    const Region& cl = h.clusters[x];
    if (cl.edges.empty()) continue;
    BipartiteWeights g{m, 1, {}, {Rational(0)}};
    for (int i = 0; i < m; ++i) {
      if (!restriction_nonempty(a[i], cl) || (cl.passing() && a[i].mult(*cl.exit) > 0)) continue;
      Rational w = inside_demand(inst, a[i], cl);
      g.edges.push_back({i, 0, w});
      g.b_weight[0] += w;
    }
    if (g.edges.size() <= 1) continue;
    int target = assign(g)[0];
    for (const auto& e : g.edges)
      if (e.a != target) absorb(a[target], take_restriction(inst, a[e.a], cl, false));
  }
  diag.stages[1] = a;

  // Step 2: the surviving ending subtour of a passing cluster reaches its threshold cell's exit
  for (int x : clusters) {
    const Region& cl = h.clusters[x];
    if (!cl.passing() || cl.edges.empty()) continue;
    int owner = -1;
    for (int i = 0; i < m; ++i) {
      if (!restriction_nonempty(a[i], cl) || a[i].mult(*cl.exit) > 0) continue;
      if (owner >= 0) throw std::logic_error("two ending subtours in one cluster after combining");
      owner = i;
    }
    if (owner < 0) continue;
    int s = threshold_cell(inst, h, x, restriction(a[owner], cl));
    diag.threshold_cells[x] = s;
    const Region& cell = h.cells[s];
    diag.threshold_spines += spine_weight(inst, cell);
    for (std::size_t i = 1; i < cell.spine.size(); ++i) {
      VertexId e = cell.spine[i];
      if (a[owner].mult(e) == 0) {
        a[owner].edges[e] = 2;
        diag.extra_cost_step2 += Rational(2) * inst.weight(e);
      }
    }
  }
  diag.stages[2] = a;
  diag.nice_edges = nice_edges(a);

  // Step 3: per passing cell, gather the non-spine parts of passing restrictions
  for (int x : clusters) {
    if (!h.clusters[x].passing()) continue;
    for (int s : h.cells_of[x]) {
      const Region& cell = h.cells[s];
      BipartiteWeights g{m, 1, {}, {Rational(0)}};
      for (int i = 0; i < m; ++i) {
        Subtour rest = restriction(a[i], cell);
        if (rest.edges.empty()) continue;
        if (!is_passing(cell, rest)) throw std::logic_error("ending restriction in a passing cell after step 2");
        if (is_spine_only(rest, cell)) continue;
        Rational w = inside_demand(inst, a[i], cell);
        g.edges.push_back({i, 0, w});
        g.b_weight[0] += w;
      }
      if (g.edges.size() <= 1) continue;
      int target = assign(g)[0];
      for (const auto& e : g.edges)
        if (e.a != target) absorb(a[target], take_restriction(inst, a[e.a], cell, true));
    }
  }
  diag.stages[3] = a;

  // Step 4: drop cell pieces until no subtour serves more demand than it started with
  std::map<VertexId, int> cell_of_terminal;
  for (int x : clusters)
    for (int s : h.cells_of[x])
      for (VertexId v : h.cells[s].vertices)
        if (inst.is_terminal(v) && h.cells[s].strictly_inside(v)) cell_of_terminal[v] = s;
  for (int i = 0; i < m; ++i) {
    while (subtour_demand(inst, a[i]) > subtour_demand(inst, s_c[i])) {
      int pick = -1;
      VertexId pick_v = kNoVertex;
      for (VertexId v : a[i].terminals) {
        if (s_c[i].terminals.count(v)) continue;
        auto it = cell_of_terminal.find(v);
        if (it == cell_of_terminal.end()) throw std::logic_error("a terminal outside every cell moved");
        int s = it->second;
        auto deeper = [&](int s1, VertexId v1, int s2, VertexId v2) {
          VertexId r1 = h.cells[s1].root, r2 = h.cells[s2].root;
          if (inst.dist(r1) != inst.dist(r2)) return inst.dist(r1) > inst.dist(r2);
          if (inst.depth(r1) != inst.depth(r2)) return inst.depth(r1) > inst.depth(r2);
          return v1 < v2;
        };
        if (pick < 0 || deeper(s, v, pick, pick_v)) {
          pick = s;
          pick_v = v;
        }
      }
      const Region& cell = h.cells[pick];
      diag.removed_pieces.push_back(take_restriction(inst, a[i], cell, cell.passing()));
    }
  }
  diag.stages[4] = a;

  // Step 5
  Rational used;
  res.bar_t = reconnect_removed(inst, h.components[c], diag.removed_pieces, diag.nice_edges, &used);
  diag.extra_cost_step5 = used;
  res.s_star = std::move(a);
  return res;
}

}  // namespace ucvrp
