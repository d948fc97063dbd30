#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ucvrp/instance.hpp"

namespace ucvrp {

// Thin deterministic helpers over mt19937_64 output; std distributions differ across
// standard libraries and would break fixture reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  // uniform in [lo, hi]
  long range(long lo, long hi);
  bool coin(int num, int den) { return range(0, den - 1) < num; }

 private:
  std::mt19937_64 gen_;
};

enum class DemandDist { uniform, dyadic };

struct RandomSpec {
  int terminals = 8;
  DemandDist demands = DemandDist::dyadic;
  // dyadic: k/denominator with k in [1, max_numerator]; uniform: k/100 with k in [1, max_numerator]
  long denominator = 16;
  long max_numerator = 16;
  // edge weights are k/10 for k in [0, max_weight_tenths]
  long max_weight_tenths = 20;
};

// Random binary tree shape, terminals exactly at the leaves, root with a single child.
Instance gen_random(const RandomSpec& spec, std::uint64_t seed);

// Random recursive tree (arbitrary degrees) with terminals on a random vertex subset,
// possibly internal ones; meant to exercise preprocessing.
Instance gen_random_general(int vertices, int terminals, std::uint64_t seed);

std::vector<Rational> random_dyadic_sizes(Rng& rng, int count, long denominator);

Instance gen_binpacking_path(std::span<const Rational> sizes);
Instance gen_binpacking_star(std::span<const Rational> sizes);

}  // namespace ucvrp
