#pragma once

#include <optional>
#include <string>

#include "ucvrp/rational.hpp"

namespace ucvrp {

struct ParamOverrides {
  std::optional<Rational> gamma, alpha, gamma_prime, beta, h_eps;
};

struct Params {
  Rational eps;
  Rational gamma;        // component demand threshold
  Rational alpha;        // smallest subtour value
  Rational gamma_prime;  // small/big terminal threshold, cluster demand threshold
  Rational beta;         // 1/beta = number of rounding groups
  Rational h_eps;        // number of distance bands

  int inv_eps() const;
  int inv_beta() const;  // throws if 1/beta is not an integer

  // Values derived from epsilon, each computed from the in-force values above it
  // (gamma, alpha -> gamma_prime) so an override propagates.
  static Params make(const Rational& eps, const ParamOverrides& o = {});
  // Desk-scale defaults: gamma=2, alpha=1/16, gamma_prime=1/8, beta=1/64.
  static Params relaxed(const Rational& eps, const ParamOverrides& o = {});

  std::string describe() const;
};

// "gamma=2,alpha=1/16"; throws std::invalid_argument on unknown keys
ParamOverrides parse_overrides(const std::string& text);

}  // namespace ucvrp
