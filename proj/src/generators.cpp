#include "ucvrp/generators.hpp"

#include <stdexcept>

namespace ucvrp {

long Rng::range(long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // rejection sampling to avoid modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do x = gen_(); while (x >= limit);
  return lo + static_cast<long>(x % span);
}

static Rational random_demand(Rng& rng, const RandomSpec& spec) {
  long k = rng.range(1, spec.max_numerator);
  return spec.demands == DemandDist::dyadic ? Rational(k, spec.denominator) : Rational(k, 100);
}

Instance gen_random(const RandomSpec& spec, std::uint64_t seed) {
  if (spec.terminals < 1) throw std::invalid_argument("need at least one terminal");
  Rng rng(seed);
  std::vector<VertexId> parent{kNoVertex, 0};
  std::vector<VertexId> leaves{1};
  while (static_cast<int>(leaves.size()) < spec.terminals) {
    auto i = static_cast<std::size_t>(rng.range(0, static_cast<long>(leaves.size()) - 1));
    VertexId v = leaves[i];
    auto n = static_cast<VertexId>(parent.size());
    parent.push_back(v);
    parent.push_back(v);
    leaves[i] = n;
    leaves.push_back(n + 1);
  }
  std::vector<Rational> weight(parent.size());
  for (std::size_t v = 1; v < parent.size(); ++v) weight[v] = Rational(rng.range(0, spec.max_weight_tenths), 10);
  // keep the depot away from terminals so distances stay positive
  if (weight[1].is_zero()) weight[1] = Rational(1, 10);
  std::map<VertexId, Rational> demands;
  for (VertexId l : leaves) demands[l] = random_demand(rng, spec);
  return Instance(std::move(parent), std::move(weight), demands);
}

Instance gen_random_general(int vertices, int terminals, std::uint64_t seed) {
  if (vertices < 1 || terminals < 0 || terminals > vertices) throw std::invalid_argument("bad sizes");
  Rng rng(seed);
  std::vector<VertexId> parent(vertices, kNoVertex);
  std::vector<Rational> weight(vertices);
  for (int v = 1; v < vertices; ++v) {
    parent[v] = static_cast<VertexId>(rng.range(0, v - 1));
    weight[v] = Rational(rng.range(0, 9), 4);
  }
  std::vector<int> ids(vertices);
  for (int v = 0; v < vertices; ++v) ids[v] = v;
  for (int i = vertices - 1; i > 0; --i) std::swap(ids[i], ids[rng.range(0, i)]);
  std::map<VertexId, Rational> demands;
  for (int i = 0; i < terminals; ++i) demands[ids[i]] = Rational(rng.range(1, 8), 8);
  return Instance(std::move(parent), std::move(weight), demands);
}

std::vector<Rational> random_dyadic_sizes(Rng& rng, int count, long denominator) {
  std::vector<Rational> out;
  for (int i = 0; i < count; ++i) out.emplace_back(rng.range(1, denominator), denominator);
  return out;
}

static void check_sizes(std::span<const Rational> sizes) {
  if (sizes.empty()) throw std::invalid_argument("empty size list");
  for (const auto& s : sizes)
    if (s.sign() <= 0 || s > Rational(1)) throw std::invalid_argument("size outside (0,1]");
}

Instance gen_binpacking_path(std::span<const Rational> sizes) {
  check_sizes(sizes);
  const int n = static_cast<int>(sizes.size());
  std::vector<VertexId> parent(n + 1);
  std::vector<Rational> weight(n + 1);
  std::map<VertexId, Rational> demands;
  parent[0] = kNoVertex;
  for (int i = 1; i <= n; ++i) {
    parent[i] = i - 1;
    weight[i] = i == 1 ? Rational(1) : Rational(0);
    demands[i] = sizes[i - 1];
  }
  return Instance(std::move(parent), std::move(weight), demands);
}

Instance gen_binpacking_star(std::span<const Rational> sizes) {
  check_sizes(sizes);
  const int n = static_cast<int>(sizes.size());
  std::vector<VertexId> parent(n + 2);
  std::vector<Rational> weight(n + 2);
  std::map<VertexId, Rational> demands;
  parent[0] = kNoVertex;
  parent[1] = 0;
  weight[1] = Rational(1);
  for (int i = 0; i < n; ++i) {
    parent[i + 2] = 1;
    demands[i + 2] = sizes[i];
  }
  return Instance(std::move(parent), std::move(weight), demands);
}

}  // namespace ucvrp
