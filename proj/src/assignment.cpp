#include "ucvrp/assignment.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace ucvrp {

namespace {

// Support graph of the fractional assignment. Node ids: a -> a, b -> a_count + b.
struct Support {
  int a_count;
  std::vector<std::set<int>> adj;
  std::map<std::pair<int, int>, Rational> x;  // keyed (a, b)

  std::pair<int, int> key(int u, int v) const {
    return u < a_count ? std::pair{u, v - a_count} : std::pair{v, u - a_count};
  }
  void drop(int u, int v) {
    adj[u].erase(v);
    adj[v].erase(u);
    x.erase(key(u, v));
  }

  // Some cycle as a node sequence (closing edge implied), found by id-ordered DFS.
  std::optional<std::vector<int>> find_cycle() const {
    const int n = static_cast<int>(adj.size());
    std::vector<int> state(n, 0), parent(n, -1);
    for (int s = 0; s < n; ++s) {
      if (state[s]) continue;
      std::vector<std::pair<int, std::set<int>::const_iterator>> stack{{s, adj[s].begin()}};
      state[s] = 1;
      while (!stack.empty()) {
        auto& [u, it] = stack.back();
        if (it == adj[u].end()) {
          state[u] = 2;
          stack.pop_back();
          continue;
        }
        int v = *it++;
        if (v == parent[u]) continue;
        if (state[v] == 1) {
          std::vector<int> cyc;
          auto pos = std::find_if(stack.begin(), stack.end(), [&](const auto& e) { return e.first == v; });
          for (; pos != stack.end(); ++pos) cyc.push_back(pos->first);
          return cyc;
        }
        if (state[v] == 0) {
          state[v] = 1;
          parent[v] = u;
          stack.push_back({v, adj[v].begin()});
        }
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::vector<int> assign(const BipartiteWeights& g) {
  if (static_cast<int>(g.b_weight.size()) != g.b_count) throw std::invalid_argument("b_weight size mismatch");
  std::map<std::pair<int, int>, Rational> w;
  for (const auto& e : g.edges) {
    if (e.a < 0 || e.a >= g.a_count || e.b < 0 || e.b >= g.b_count) throw std::invalid_argument("edge endpoint out of range");
    if (e.w.sign() < 0) throw std::invalid_argument("negative edge weight");
    w[{e.a, e.b}] += e.w;
  }
  std::vector<Rational> total(g.b_count);
  std::vector<int> first_neighbor(g.b_count, -1);
  for (const auto& [ab, wt] : w) {
    total[ab.second] += wt;
    if (first_neighbor[ab.second] < 0) first_neighbor[ab.second] = ab.first;
  }
  for (int b = 0; b < g.b_count; ++b) {
    if (first_neighbor[b] < 0) throw std::invalid_argument("b " + std::to_string(b) + " has no neighbor");
    if (g.b_weight[b].sign() < 0) throw std::invalid_argument("negative b weight");
    if (g.b_weight[b] > total[b])
      throw std::invalid_argument("b " + std::to_string(b) + " weighs more than its edges");
  }

  Support s{g.a_count, std::vector<std::set<int>>(g.a_count + g.b_count), {}};
  for (const auto& [ab, wt] : w) {
    auto [a, b] = ab;
    if (total[b].is_zero()) continue;
    Rational frac = g.b_weight[b] * wt / total[b];
    if (frac.is_zero()) continue;
    s.x[ab] = frac;
    s.adj[a].insert(g.a_count + b);
    s.adj[g.a_count + b].insert(a);
  }

  // cancel cycles: alternate +d/-d around the cycle keeps every a-load and b-sum fixed
  while (auto cyc = s.find_cycle()) {
    const auto& c = *cyc;
    const std::size_t m = c.size();
    Rational delta;
    bool first = true;
    for (std::size_t i = 1; i < m; i += 2) {
      const Rational& v = s.x.at(s.key(c[i], c[(i + 1) % m]));
      if (first || v < delta) delta = v;
      first = false;
    }
    for (std::size_t i = 0; i < m; ++i) {
      int u = c[i], v = c[(i + 1) % m];
      Rational& val = s.x.at(s.key(u, v));
      if (i % 2 == 0) val += delta;
      else val -= delta;
    }
    for (std::size_t i = 1; i < m; i += 2) {
      int u = c[i], v = c[(i + 1) % m];
      if (s.x.at(s.key(u, v)).is_zero()) s.drop(u, v);
    }
  }

  // root every support tree at its smallest a; a leaf b goes to its only neighbour,
  // an inner b to its smallest child, so each a takes at most one inner b (its parent)
  const int n = g.a_count + g.b_count;
  std::vector<int> parent(n, -2);
  std::vector<int> f(g.b_count, -1);
  for (int r = 0; r < g.a_count; ++r) {
    if (parent[r] != -2) continue;
    parent[r] = -1;
    std::vector<int> stack{r};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : s.adj[u]) {
        if (v == parent[u] || parent[v] != -2) continue;
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  for (int b = 0; b < g.b_count; ++b) {
    int node = g.a_count + b;
    const auto& nb = s.adj[node];
    if (nb.empty()) {
      f[b] = first_neighbor[b];
    } else if (nb.size() == 1) {
      f[b] = *nb.begin();
    } else {
      for (int a : nb)
        if (a != parent[node]) {
          f[b] = a;
          break;
        }
    }
  }
  return f;
}

std::vector<Rational> assignment_excess(const BipartiteWeights& g, const std::vector<int>& f) {
  std::vector<Rational> ex(g.a_count);
  for (int b = 0; b < g.b_count; ++b) ex[f[b]] += g.b_weight[b];
  for (const auto& e : g.edges) ex[e.a] -= e.w;
  return ex;
}

}  // namespace ucvrp
