#include "ucvrp/baselines.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace ucvrp {

OracleResult exact_opt(const Instance& inst, int limit) {
  const auto& terms = inst.terminals();
  const int n = static_cast<int>(terms.size());
  if (n > limit)
    throw std::invalid_argument("exact_opt: " + std::to_string(n) + " terminals above the limit of " +
                                std::to_string(limit));
  OracleResult res;
  if (n == 0) return res;
  const std::uint32_t full = (1u << n) - 1;

  // edges on each terminal's root path, as bitsets over vertices
  const std::size_t words = (inst.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> path(n, std::vector<std::uint64_t>(words, 0));
  for (int i = 0; i < n; ++i)
    for (VertexId v = terms[i]; v != inst.root(); v = inst.parent(v)) path[i][v / 64] |= 1ULL << (v % 64);

  std::vector<std::vector<std::uint64_t>> bits(full + 1, std::vector<std::uint64_t>(words, 0));
  std::vector<Rational> demand(full + 1), cost(full + 1);
  std::vector<bool> fits(full + 1, false);
  fits[0] = true;
  for (std::uint32_t s = 1; s <= full; ++s) {
    int low = __builtin_ctz(s);
    std::uint32_t rest = s & (s - 1);
    demand[s] = demand[rest] + inst.demand(terms[low]);
    fits[s] = fits[rest] && demand[s] <= Rational(1);
    if (!fits[s]) continue;
    Rational extra;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t d = path[low][w] & ~bits[rest][w];
      bits[s][w] = bits[rest][w] | path[low][w];
      while (d) {
        extra += inst.weight(static_cast<VertexId>(w * 64 + __builtin_ctzll(d)));
        d &= d - 1;
      }
    }
    cost[s] = cost[rest] + Rational(2) * extra;
  }

  std::vector<std::optional<Rational>> best(full + 1);
  std::vector<std::uint32_t> choice(full + 1, 0);
  best[0] = Rational(0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low = mask & (~mask + 1);
    std::uint32_t rest = mask ^ low;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      std::uint32_t part = sub | low;
      ++res.explored;
      if (fits[part] && best[mask ^ part]) {
        Rational c = *best[mask ^ part] + cost[part];
        if (!best[mask] || c < *best[mask]) {
          best[mask] = c;
          choice[mask] = part;
        }
      }
      if (sub == 0) break;
    }
  }
  res.cost = *best[full];
  for (std::uint32_t mask = full; mask; mask ^= choice[mask]) {
    Tour t;
    for (int i = 0; i < n; ++i)
      if (choice[mask] >> i & 1) t.terminals.push_back(terms[i]);
    std::sort(t.terminals.begin(), t.terminals.end());
    res.solution.tours.push_back(std::move(t));
  }
  std::sort(res.solution.tours.begin(), res.solution.tours.end(),
            [](const Tour& a, const Tour& b) { return a.terminals < b.terminals; });
  return res;
}

int binpacking_opt(const std::vector<Rational>& sizes) {
  if (sizes.size() > 12) throw std::invalid_argument("binpacking_opt: more than 12 sizes");
  for (const Rational& s : sizes)
    if (s.sign() <= 0 || s > Rational(1)) throw std::invalid_argument("binpacking_opt: size outside (0,1]");
  std::vector<Rational> items = sizes;
  std::sort(items.begin(), items.end(), std::greater<>());
  int best = static_cast<int>(items.size());
  std::vector<Rational> bins;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (static_cast<int>(bins.size()) >= best) return;
    if (i == items.size()) {
      best = static_cast<int>(bins.size());
      return;
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (bins[b] + items[i] > Rational(1)) continue;
      bins[b] += items[i];
      place(i + 1);
      bins[b] -= items[i];
    }
    bins.push_back(items[i]);
    place(i + 1);
    bins.pop_back();
  };
  place(0);
  return best;
}

Solution itp_heuristic(const Instance& inst, const Params& p, ItpMode mode) {
  std::vector<VertexId> order;
  std::vector<VertexId> stack{inst.root()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (inst.is_terminal(v)) order.push_back(v);
    std::vector<VertexId> kids = inst.children(v);
    std::sort(kids.rbegin(), kids.rend());
    stack.insert(stack.end(), kids.begin(), kids.end());
  }
  if (mode == ItpMode::early_close)
    for (VertexId t : order)
      if (inst.demand(t) > p.alpha)
        throw std::invalid_argument("early-close segmentation needs every demand <= alpha; terminal " +
                                    std::to_string(t) + " has " + inst.demand(t).str());
  Solution sol;
  Tour cur;
  Rational load;
  auto close = [&] {
    std::sort(cur.terminals.begin(), cur.terminals.end());
    sol.tours.push_back(std::move(cur));
    cur = Tour{};
    load = Rational(0);
  };
  for (VertexId t : order) {
    if (mode == ItpMode::nextfit && !cur.terminals.empty() && load + inst.demand(t) > Rational(1)) close();
    cur.terminals.push_back(t);
    load += inst.demand(t);
    if (mode == ItpMode::early_close && load >= Rational(1) - p.alpha) close();
  }
  if (!cur.terminals.empty()) close();
  return sol;
}

}  // namespace ucvrp
