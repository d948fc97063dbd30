#include "ucvrp/dp.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

namespace ucvrp {

std::size_t VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return h;
}

int ValueAdder::sum(int a, int b) {
  if (a > b) std::swap(a, b);
  std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Rational s = vs_.y[a] + vs_.y[b];
  int id = -1;
  if (s <= Rational(1)) {
    id = vs_.index_of(s);
    if (id < 0) throw std::logic_error("value set is not closed under capped addition: " + s.str());
  }
  cache_.emplace(key, id);
  return id;
}

namespace {

// sort by value, merge equal values, drop zero counts, flatten
SubtreeKey make_key(std::vector<std::pair<int, int>>& items, std::size_t cap) {
  std::sort(items.begin(), items.end());
  SubtreeKey key;
  for (const auto& [v, n] : items) {
    if (n == 0) continue;
    if (!key.empty() && key[key.size() - 2] == v) key.back() += n;
    else {
      key.push_back(v);
      key.push_back(n);
    }
  }
  if (key.size() / 2 > cap)
    throw CapExceeded("configuration list with " + std::to_string(key.size() / 2) +
                      " distinct values exceeds the length cap of " + std::to_string(cap));
  return key;
}

struct EdgeBits {
  std::vector<std::uint64_t> w;
  explicit EdgeBits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= 1ULL << (i % 64); }
  EdgeBits operator|(const EdgeBits& o) const {
    EdgeBits r = *this;
    for (std::size_t i = 0; i < w.size(); ++i) r.w[i] |= o.w[i];
    return r;
  }
};

// weight of edges set in `a` but not in `b`
Rational extra_weight(const EdgeBits& a, const EdgeBits& b, const std::vector<Rational>& weight) {
  Rational s;
  for (std::size_t i = 0; i < a.w.size(); ++i) {
    std::uint64_t d = a.w[i] & ~b.w[i];
    while (d) {
      int bit = __builtin_ctzll(d);
      s += weight[i * 64 + bit];
      d &= d - 1;
    }
  }
  return s;
}

struct PartGeometry {
  std::vector<Rational> edge_weight;  // by local edge index
  std::vector<EdgeBits> part_bits;
  EdgeBits exit_bits;
};

PartGeometry geometry(const Instance& inst, const Region& comp, const std::vector<QPart>& parts) {
  PartGeometry g;
  std::map<VertexId, std::size_t> idx;
  for (VertexId e : comp.edges) {
    idx[e] = g.edge_weight.size();
    g.edge_weight.push_back(inst.weight(e));
  }
  auto path_bits = [&](VertexId v) {
    EdgeBits b(comp.edges.size());
    for (; v != comp.root; v = inst.parent(v)) b.set(idx.at(v));
    return b;
  };
  for (const QPart& q : parts) {
    EdgeBits b(comp.edges.size());
    for (VertexId t : q.terminals) b = b | path_bits(t);
    g.part_bits.push_back(std::move(b));
  }
  g.exit_bits = comp.exit ? path_bits(*comp.exit) : EdgeBits(comp.edges.size());
  return g;
}

}  // namespace

// ---------------------------------------------------------------- local tables

std::optional<Rational> LocalTable::value(const LocalKey& key) const {
  auto it = index.back().find(key);
  if (it == index.back().end()) return std::nullopt;
  return layers.back()[it->second].cost;
}

std::vector<std::pair<std::uint32_t, int>> LocalTable::witness(int i) const {
  std::vector<std::pair<std::uint32_t, int>> out;
  std::uint32_t mask = static_cast<std::uint32_t>(layers.size() - 1);
  while (mask) {
    const Node& n = layers[mask][i];
    out.push_back({n.block, n.code});
    i = n.prev;
    mask ^= n.block;
  }
  return out;
}

LocalTable local_config_values(const Instance& inst, const Hierarchy& h, int c, const ValueSets& vs,
                               const Params& p, bool allow_passing, const Caps& caps) {
  const Region& comp = h.components[c];
  LocalTable t;
  t.parts = vs.q_c.empty() ? component_parts(inst, h, c, p) : vs.q_c[c];
  const std::size_t k = t.parts.size();
  if (k > caps.parts)
    throw CapExceeded("component " + std::to_string(c) + " has " + std::to_string(k) +
                      " terminal parts, above the partition cap of " + std::to_string(caps.parts));
  const std::uint32_t full = (1u << k) - 1;
  allow_passing = allow_passing && comp.passing();

  PartGeometry geo = geometry(inst, comp, t.parts);
  std::vector<EdgeBits> bits(full + 1, EdgeBits(comp.edges.size()));
  std::vector<Rational> demand(full + 1), cost_end(full + 1), cost_pass(full + 1);
  std::vector<int> value(full + 1, -1);
  for (std::uint32_t b = 1; b <= full; ++b) {
    int low = __builtin_ctz(b);
    std::uint32_t rest = b & (b - 1);
    bits[b] = bits[rest] | geo.part_bits[low];
    demand[b] = demand[rest] + t.parts[low].demand;
    cost_end[b] = cost_end[rest] + Rational(2) * extra_weight(geo.part_bits[low], bits[rest], geo.edge_weight);
    cost_pass[b] = cost_end[b] + Rational(2) * extra_weight(geo.exit_bits, bits[b], geo.edge_weight);
    if (demand[b] <= Rational(1)) {
      value[b] = vs.index_of(max(demand[b], p.alpha));
      if (value[b] < 0) throw std::logic_error("part demand missing from the value set");
    }
  }

  t.layers.assign(full + 1, {});
  t.index.assign(full + 1, {});
  t.layers[0].push_back({{}, Rational(0), 0, 0, -1});
  t.index[0][{}] = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (t.layers[mask].empty()) continue;
    std::uint32_t free = full & ~mask;
    std::uint32_t low = free & (~free + 1);
    std::uint32_t rest = free ^ low;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      std::uint32_t b = sub | low;
      if (value[b] >= 0) {
        for (int kind = 0; kind <= (allow_passing ? 1 : 0); ++kind) {
          int code = 2 * value[b] + kind;
          const Rational& add = kind ? cost_pass[b] : cost_end[b];
          auto& layer = t.layers[mask | b];
          auto& index = t.index[mask | b];
          for (int i = 0; i < static_cast<int>(t.layers[mask].size()); ++i) {
            const auto& node = t.layers[mask][i];
            LocalKey key = node.key;
            key.insert(std::upper_bound(key.begin(), key.end(), code), code);
            Rational cost = node.cost + add;
            auto it = index.find(key);
            if (it == index.end()) {
              if (layer.size() >= caps.table) throw CapExceeded("local table exceeds the table cap");
              index.emplace(key, static_cast<int>(layer.size()));
              layer.push_back({std::move(key), std::move(cost), b, code, i});
            } else if (cost < layer[it->second].cost) {
              layer[it->second] = {std::move(key), std::move(cost), b, code, i};
            }
          }
        }
      }
      if (sub == 0) break;
    }
  }
  return t;
}

std::optional<Rational> evaluate_local_config(const Instance& inst, const Hierarchy& h, int c,
                                              const ValueSets& vs, const Params& p,
                                              const std::vector<std::pair<Rational, SubtourKind>>& list) {
  const Region& comp = h.components[c];
  std::vector<QPart> parts = vs.q_c.empty() ? component_parts(inst, h, c, p) : vs.q_c[c];
  const std::size_t k = parts.size(), l = list.size();
  if (k == 0) return l == 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
  if (l == 0 || l > k) return std::nullopt;
  for (const auto& [y, kind] : list)
    if (kind == SubtourKind::passing && !comp.passing()) return std::nullopt;
  std::optional<Rational> best;
  std::vector<std::size_t> slot(k, 0);
  while (true) {
    std::vector<std::vector<VertexId>> reach(l);
    std::vector<Rational> dem(l);
    std::vector<bool> used(l, false);
    for (std::size_t i = 0; i < k; ++i) {
      used[slot[i]] = true;
      dem[slot[i]] += parts[i].demand;
      reach[slot[i]].insert(reach[slot[i]].end(), parts[i].terminals.begin(), parts[i].terminals.end());
    }
    bool ok = std::all_of(used.begin(), used.end(), [](bool b) { return b; });
    for (std::size_t j = 0; ok && j < l; ++j) ok = dem[j] <= list[j].first;
    if (ok) {
      Rational cost;
      for (std::size_t j = 0; j < l; ++j) {
        if (list[j].second == SubtourKind::passing) reach[j].push_back(*comp.exit);
        // subtour in c spanning the set: measured from the component root
        Rational span;
        std::vector<bool> seen(inst.size(), false);
        for (VertexId v : reach[j])
          for (; v != comp.root && !seen[v]; v = inst.parent(v)) {
            seen[v] = true;
            span += inst.weight(v);
          }
        cost += Rational(2) * span;
      }
      if (!best || cost < *best) best = cost;
    }
    std::size_t i = 0;
    while (i < k && ++slot[i] == l) slot[i++] = 0;
    if (i == k) break;
  }
  return best;
}

// ---------------------------------------------------------------- subtree tables

std::optional<Rational> SubtreeTable::value(const SubtreeKey& key) const {
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return entries[it->second].cost;
}

bool SubtreeTable::offer(Entry e) {
  auto it = index.find(e.key);
  if (it == index.end()) {
    index.emplace(e.key, static_cast<int>(entries.size()));
    entries.push_back(std::move(e));
    return true;
  }
  if (e.cost < entries[it->second].cost) {
    entries[it->second] = std::move(e);
    return true;
  }
  return false;
}

SubtreeTable subtree_values_component_root(const LocalTable& f, const SubtreeTable* g_exit,
                                           const Rational& spine_weight, ValueAdder& add, const Caps& caps) {
  SubtreeTable out;
  const Rational spine2 = Rational(2) * spine_weight;
  const auto& locals = f.entries();
  for (int li = 0; li < static_cast<int>(locals.size()); ++li) {
    const auto& local = locals[li];
    std::vector<int> passing;
    std::vector<std::pair<int, int>> base;
    for (int code : local.key) {
      if (code & 1) passing.push_back(code >> 1);
      else base.push_back({code >> 1, 1});
    }
    if (!g_exit) {
      if (!passing.empty()) continue;
      auto items = base;
      out.offer({make_key(items, caps.cfg), local.cost, {li, -1, {}}, {}});
      if (out.entries.size() > caps.table) throw CapExceeded("subtree table exceeds the table cap");
      continue;
    }
    for (int ei = 0; ei < static_cast<int>(g_exit->entries.size()); ++ei) {
      const auto& ex = g_exit->entries[ei];
      std::vector<int> vals, left;
      int total = 0;
      for (std::size_t j = 0; j < ex.key.size(); j += 2) {
        vals.push_back(ex.key[j]);
        left.push_back(ex.key[j + 1]);
        total += ex.key[j + 1];
      }
      if (total < static_cast<int>(passing.size())) continue;
      const Rational base_cost = local.cost + ex.cost + spine2 * Rational(total - static_cast<long>(passing.size()));
      std::vector<int> choice(passing.size());
      std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == passing.size()) {
          auto items = base;
          std::vector<int> assoc;
          for (std::size_t i = 0; i < passing.size(); ++i) {
            items.push_back({add.sum(passing[i], vals[choice[i]]), 1});
            assoc.push_back(vals[choice[i]]);
          }
          for (std::size_t j = 0; j < vals.size(); ++j) items.push_back({vals[j], left[j]});
          out.offer({make_key(items, caps.cfg), base_cost, {li, ei, std::move(assoc)}, {}});
          if (out.entries.size() > caps.table) throw CapExceeded("subtree table exceeds the table cap");
          return;
        }
        std::size_t from = pos > 0 && passing[pos] == passing[pos - 1] ? choice[pos - 1] : 0;
        for (std::size_t j = from; j < vals.size(); ++j) {
          if (left[j] == 0 || add.sum(passing[pos], vals[j]) < 0) continue;
          --left[j];
          choice[pos] = static_cast<int>(j);
          rec(pos + 1);
          ++left[j];
        }
      };
      rec(0);
    }
  }
  return out;
}

namespace {

// k-subsets of `pool` in lexicographic order, at most `budget` of them
std::vector<std::vector<int>> subsets(const std::vector<int>& pool, std::size_t k, std::size_t budget) {
  std::vector<std::vector<int>> out;
  if (k >= pool.size()) {
    out.push_back(pool);
    return out;
  }
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    if (out.size() >= budget)
      throw CapExceeded("more than " + std::to_string(budget) + " candidate value sets at a critical vertex");
    std::vector<int> s;
    for (std::size_t i : pick) s.push_back(pool[i]);
    out.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

struct Rounded {
  SubtreeKey key;
  Rational cost;  // child value plus the doubled attachment edge
  int entry;
};

}  // namespace

SubtreeTable subtree_values_critical(const std::vector<ChildTable>& children, const ValueSets& vs,
                                     const Params& p, ValueAdder& add, const Caps& caps, XStrategy strategy) {
  SubtreeTable out;
  std::vector<int> u;
  for (const auto& ch : children)
    for (const auto& e : ch.table->entries)
      for (std::size_t j = 0; j < e.key.size(); j += 2) u.push_back(e.key[j]);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  const auto k = static_cast<std::size_t>(p.inv_beta());
  if (strategy == XStrategy::exhaustive) {
    std::vector<int> all(vs.y.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    out.x_sets = subsets(all, k, caps.x_budget);
  } else {
    out.x_sets = subsets(u, k, caps.x_budget);
  }

  for (int xi = 0; xi < static_cast<int>(out.x_sets.size()); ++xi) {
    const auto& x = out.x_sets[xi];
    auto round_up = [&](int v) {
      auto it = std::lower_bound(x.begin(), x.end(), v);
      return it == x.end() ? -1 : *it;
    };
    struct Cell {
      Rational cost;
      std::shared_ptr<const SubtreeTable::Step> steps;
    };
    std::unordered_map<SubtreeKey, Cell, VecHash> dp{{SubtreeKey{}, {Rational(0), nullptr}}};
    for (int ci = 0; ci < static_cast<int>(children.size()); ++ci) {
      const auto& ch = children[ci];
      std::unordered_map<SubtreeKey, Rounded, VecHash> rounded;
      for (int ei = 0; ei < static_cast<int>(ch.table->entries.size()); ++ei) {
        const auto& e = ch.table->entries[ei];
        std::vector<std::pair<int, int>> items;
        int n = 0;
        bool ok = true;
        for (std::size_t j = 0; j < e.key.size(); j += 2) {
          int r = round_up(e.key[j]);
          if (r < 0) ok = false;
          items.push_back({r, e.key[j + 1]});
          n += e.key[j + 1];
        }
        if (!ok) continue;
        Rational cost = e.cost + Rational(2) * Rational(n) * ch.weight;
        SubtreeKey key = make_key(items, caps.cfg);
        auto it = rounded.find(key);
        if (it == rounded.end()) rounded.emplace(key, Rounded{key, std::move(cost), ei});
        else if (cost < it->second.cost) it->second = Rounded{key, std::move(cost), ei};
      }
      // deterministic iteration order
      std::vector<const Rounded*> child_list;
      for (const auto& [key, r] : rounded) child_list.push_back(&r);
      std::sort(child_list.begin(), child_list.end(), [](const Rounded* a, const Rounded* b) { return a->key < b->key; });
      std::vector<std::pair<const SubtreeKey*, const Cell*>> prev_list;
      for (const auto& [key, cell] : dp) prev_list.push_back({&key, &cell});
      std::sort(prev_list.begin(), prev_list.end(), [](const auto& a, const auto& b) { return *a.first < *b.first; });

      std::unordered_map<SubtreeKey, Cell, VecHash> next;
      for (const auto& [pkey, pcell] : prev_list) {
        for (const Rounded* r : child_list) {
          const Rational base = pcell->cost + r->cost;
          // pairs (p, j) whose sum stays within capacity
          std::vector<std::array<int, 3>> pairs;  // p index, j index, sum id
          for (std::size_t a = 0; a < pkey->size(); a += 2)
            for (std::size_t b = 0; b < r->key.size(); b += 2) {
              int s = add.sum((*pkey)[a], r->key[b]);
              if (s >= 0) pairs.push_back({static_cast<int>(a / 2), static_cast<int>(b / 2), s});
            }
          std::vector<int> left_p, left_c;
          for (std::size_t a = 1; a < pkey->size(); a += 2) left_p.push_back((*pkey)[a]);
          for (std::size_t b = 1; b < r->key.size(); b += 2) left_c.push_back(r->key[b]);
          std::vector<int> count(pairs.size(), 0);
          std::function<void(std::size_t)> rec = [&](std::size_t q) {
            if (q == pairs.size()) {
              std::vector<std::pair<int, int>> items;
              std::vector<std::array<int, 3>> assoc;
              for (std::size_t i = 0; i < pairs.size(); ++i)
                if (count[i]) {
                  items.push_back({pairs[i][2], count[i]});
                  assoc.push_back({(*pkey)[2 * pairs[i][0]], r->key[2 * pairs[i][1]], count[i]});
                }
              for (std::size_t a = 0; a < left_p.size(); ++a) items.push_back({(*pkey)[2 * a], left_p[a]});
              for (std::size_t b = 0; b < left_c.size(); ++b) items.push_back({r->key[2 * b], left_c[b]});
              SubtreeKey key = make_key(items, caps.cfg);
              auto it = next.find(key);
              if (it != next.end() && !(base < it->second.cost)) return;
              auto step = std::make_shared<SubtreeTable::Step>();
              step->prev = pcell->steps;
              step->child = ci;
              step->child_entry = r->entry;
              step->assoc = std::move(assoc);
              if (it == next.end()) {
                if (next.size() >= caps.table) throw CapExceeded("critical table exceeds the table cap");
                next.emplace(std::move(key), Cell{base, std::move(step)});
              } else {
                it->second = Cell{base, std::move(step)};
              }
              return;
            }
            auto [a, b, s] = pairs[q];
            int most = std::min(left_p[a], left_c[b]);
            for (int n = 0; n <= most; ++n) {
              count[q] = n;
              left_p[a] -= n;
              left_c[b] -= n;
              rec(q + 1);
              left_p[a] += n;
              left_c[b] += n;
            }
            count[q] = 0;
          };
          rec(0);
        }
      }
      dp = std::move(next);
    }
    std::vector<std::pair<const SubtreeKey*, const Cell*>> final_list;
    for (const auto& [key, cell] : dp) final_list.push_back({&key, &cell});
    std::sort(final_list.begin(), final_list.end(), [](const auto& a, const auto& b) { return *a.first < *b.first; });
    for (const auto& [key, cell] : final_list) out.offer({*key, cell->cost, {}, {xi, cell->steps}});
  }
  return out;
}

// ---------------------------------------------------------------- orchestration

namespace {

struct Bundle {
  std::vector<VertexId> terminals;
  int value;
};

struct Run {
  const Instance& tree;  // normalized T
  const Hierarchy& h;
  const ReducedTree& rt;
  const ValueSets& vs;
  const Params& p;
  const SolveOptions& opt;
  ValueAdder add;
  std::vector<std::optional<LocalTable>> local;
  std::vector<std::optional<SubtreeTable>> root;
  std::map<VertexId, SubtreeTable> critical;
  std::map<VertexId, std::vector<int>> children;
  std::size_t entries = 0, max_x = 0;

  Run(const Instance& t, const Hierarchy& hh, const ReducedTree& r, const ValueSets& v, const Params& pp,
      const SolveOptions& o)
      : tree(t), h(hh), rt(r), vs(v), p(pp), opt(o), add(v), local(hh.components.size()), root(hh.components.size()) {
    for (VertexId z : rt.critical_vertices) children[z] = rt.children_of_critical(z);
  }

  bool exit_critical(int c) const {
    const Region& comp = h.components[c];
    return comp.exit && children.count(*comp.exit);
  }

  const SubtreeTable& component_table(int c) {
    if (root[c]) return *root[c];
    const SubtreeTable* exit = nullptr;
    if (exit_critical(c)) exit = &critical_table(*h.components[c].exit);
    local[c] = local_config_values(tree, h, c, vs, p, exit != nullptr, opt.caps);
    entries += local[c]->entries().size();
    root[c] = subtree_values_component_root(*local[c], exit, spine_weight(tree, h.components[c]), add, opt.caps);
    entries += root[c]->entries.size();
    return *root[c];
  }

  const SubtreeTable& critical_table(VertexId z) {
    auto it = critical.find(z);
    if (it != critical.end()) return it->second;
    std::vector<ChildTable> kids;
    for (int c : children.at(z)) kids.push_back({&component_table(c), rt.attach_weight[c]});
    SubtreeTable t = subtree_values_critical(kids, vs, p, add, opt.caps, opt.strategy);
    entries += t.entries.size();
    max_x = std::max(max_x, t.x_sets.size());
    return critical.emplace(z, std::move(t)).first->second;
  }

  static Bundle merge(const Bundle& a, const Bundle& b, int value) {
    Bundle m{a.terminals, value};
    m.terminals.insert(m.terminals.end(), b.terminals.begin(), b.terminals.end());
    return m;
  }

  std::vector<Bundle> unfold_component(int c, int entry) {
    const auto& e = root[c]->entries[entry];
    const LocalTable& lt = *local[c];
    std::vector<Bundle> ending;
    std::vector<Bundle> passing;
    for (const auto& [mask, code] : lt.witness(e.root.local)) {
      Bundle b{{}, code >> 1};
      for (std::size_t i = 0; i < lt.parts.size(); ++i)
        if (mask >> i & 1) b.terminals.insert(b.terminals.end(), lt.parts[i].terminals.begin(), lt.parts[i].terminals.end());
      (code & 1 ? passing : ending).push_back(std::move(b));
    }
    if (e.root.exit < 0) return ending;
    std::vector<Bundle> below = unfold_critical(*h.components[c].exit, e.root.exit);
    std::stable_sort(passing.begin(), passing.end(), [](const Bundle& a, const Bundle& b) { return a.value < b.value; });
    std::vector<bool> used(below.size(), false);
    std::vector<Bundle> out = std::move(ending);
    for (std::size_t i = 0; i < passing.size(); ++i) {
      int want = e.root.assoc[i];
      std::size_t j = 0;
      while (j < below.size() && (used[j] || below[j].value != want)) ++j;
      if (j == below.size()) throw std::logic_error("traceback: missing exit subtour");
      used[j] = true;
      out.push_back(merge(passing[i], below[j], add.sum(passing[i].value, want)));
    }
    for (std::size_t j = 0; j < below.size(); ++j)
      if (!used[j]) out.push_back(below[j]);
    return out;
  }

  std::vector<Bundle> unfold_critical(VertexId z, int entry) {
    const SubtreeTable& t = critical.at(z);
    const auto& e = t.entries[entry];
    const auto& x = t.x_sets[e.crit.x];
    std::vector<const SubtreeTable::Step*> steps;
    for (auto s = e.crit.steps.get(); s; s = s->prev.get()) steps.push_back(s);
    std::reverse(steps.begin(), steps.end());
    const auto& kids = children.at(z);
    std::vector<Bundle> acc;
    for (const auto* s : steps) {
      std::vector<Bundle> child = unfold_component(kids[s->child], s->child_entry);
      for (Bundle& b : child) b.value = *std::lower_bound(x.begin(), x.end(), b.value);
      std::vector<bool> used_a(acc.size(), false), used_c(child.size(), false);
      std::vector<Bundle> next;
      for (const auto& [pv, cv, n] : s->assoc) {
        for (int k = 0; k < n; ++k) {
          std::size_t i = 0, j = 0;
          while (i < acc.size() && (used_a[i] || acc[i].value != pv)) ++i;
          while (j < child.size() && (used_c[j] || child[j].value != cv)) ++j;
          if (i == acc.size() || j == child.size()) throw std::logic_error("traceback: association out of range");
          used_a[i] = used_c[j] = true;
          next.push_back(merge(acc[i], child[j], add.sum(pv, cv)));
        }
      }
      for (std::size_t i = 0; i < acc.size(); ++i)
        if (!used_a[i]) next.push_back(std::move(acc[i]));
      for (std::size_t j = 0; j < child.size(); ++j)
        if (!used_c[j]) next.push_back(std::move(child[j]));
      acc = std::move(next);
    }
    return acc;
  }
};

}  // namespace

SolveResult solve_traced(const Instance& inst, const Params& p, const SolveOptions& opt, SolveTrace* trace) {
  auto start = std::chrono::steady_clock::now();
  SolveTrace local_trace;
  SolveTrace& tr = trace ? *trace : local_trace;
  tr.normalized = preprocess(inst);
  const Instance& t = tr.normalized.tree;
  tr.hierarchy = decompose(t, p);
  tr.reduced = height_reduce(t, tr.hierarchy, p);
  tr.values = build_value_sets(t, tr.hierarchy, p, opt.caps.y);

  Run run(t, tr.hierarchy, tr.reduced, tr.values, p, opt);
  const SubtreeTable& top = run.critical_table(t.root());
  if (top.entries.empty()) throw std::runtime_error("no feasible configuration at the depot");
  int best = 0;
  for (int i = 1; i < static_cast<int>(top.entries.size()); ++i) {
    const auto& a = top.entries[i];
    const auto& b = top.entries[best];
    if (a.cost < b.cost || (a.cost == b.cost && a.key < b.key)) best = i;
  }
  tr.table_value = top.entries[best].cost;
  tr.best_key = top.entries[best].key;
  tr.root_keys.clear();
  for (const auto& e : top.entries) tr.root_keys.push_back(e.key);

  std::vector<Bundle> bundles = run.unfold_critical(t.root(), best);
  Solution reduced;
  for (Bundle& b : bundles) {
    Tour tour;
    tour.terminals = std::move(b.terminals);
    std::sort(tour.terminals.begin(), tour.terminals.end());
    Rational real;
    for (VertexId v : tour.terminals) real += t.demand(v);
    tour.dummy = tr.values.y[b.value] - real;
    if (tour.dummy.sign() < 0) throw std::logic_error("traceback: tour value below its real demand");
    reduced.tours.push_back(std::move(tour));
  }
  std::sort(reduced.tours.begin(), reduced.tours.end(),
            [](const Tour& a, const Tour& b) { return a.terminals < b.terminals; });
  auto rep = check_feasible(tr.reduced.tree, reduced);
  if (!rep.feasible()) throw std::logic_error("solver produced an infeasible solution: " + rep.violations[0].message);
  Rational reduced_cost = solution_cost(tr.reduced.tree, reduced);
  if (reduced_cost != tr.table_value)
    throw std::logic_error("traceback cost " + reduced_cost.str() + " differs from table value " + tr.table_value.str());
  tr.reduced_solution = reduced;

  Solution on_t = map_back(tr.reduced, reduced);
  SolveResult res;
  for (const Tour& tour : on_t.tours) {
    Tour out{{}, tour.dummy};
    for (VertexId v : tour.terminals) out.terminals.push_back(tr.normalized.origin[v]);
    std::sort(out.terminals.begin(), out.terminals.end());
    res.solution.tours.push_back(std::move(out));
  }
  auto final_rep = check_feasible(inst, res.solution);
  if (!final_rep.feasible()) throw std::logic_error("mapped solution is infeasible: " + final_rep.violations[0].message);

  SolveStats& st = res.stats;
  st.terminals = static_cast<int>(inst.terminals().size());
  st.components = static_cast<int>(tr.hierarchy.components.size());
  st.critical = static_cast<int>(tr.reduced.critical_vertices.size());
  st.y_size = tr.values.y.size();
  st.table_entries = run.entries;
  st.max_x_sets = run.max_x;
  st.reduced_cost = tr.table_value;
  st.cost = solution_cost(inst, res.solution);
  if (st.cost > st.reduced_cost) throw std::logic_error("mapping back increased the cost");
  st.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SolveResult solve(const Instance& inst, const Params& p, const SolveOptions& opt) {
  return solve_traced(inst, p, opt, nullptr);
}

}  // namespace ucvrp
