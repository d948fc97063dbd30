#include "ucvrp/params.hpp"

#include <sstream>
#include <stdexcept>

#include "ucvrp/instance.hpp"

namespace ucvrp {

int Params::inv_eps() const { return inverse_epsilon(eps); }

int Params::inv_beta() const {
  if (beta.sign() <= 0) throw std::invalid_argument("beta must be positive");
  Rational k = Rational(1) / beta;
  if (!k.is_integer()) throw std::invalid_argument("1/beta must be an integer");
  return static_cast<int>(k.floor_long());
}

Params Params::make(const Rational& eps, const ParamOverrides& o) {
  const int k = inverse_epsilon(eps);
  Params p;
  p.eps = eps;
  p.gamma = o.gamma.value_or(Rational(12) / eps);
  p.alpha = o.alpha.value_or(pow(eps, static_cast<unsigned>(k + 1)));
  p.gamma_prime = o.gamma_prime.value_or(eps * p.alpha / p.gamma);
  p.beta = o.beta.value_or(Rational(1, 4) * pow(eps, static_cast<unsigned>(4 * k + 1)));
  p.h_eps = o.h_eps.value_or(pow(Rational(k), static_cast<unsigned>(2 * k + 1)));
  for (const Rational* v : {&p.gamma, &p.alpha, &p.gamma_prime, &p.beta, &p.h_eps})
    if (v->sign() <= 0) throw std::invalid_argument("parameters must be positive");
  if (p.alpha > Rational(1)) throw std::invalid_argument("alpha must be at most 1");
  // a leaf terminal on its own must never reach the component threshold
  if (p.gamma <= Rational(1)) throw std::invalid_argument("gamma must exceed 1");
  return p;
}

Params Params::relaxed(const Rational& eps, const ParamOverrides& o) {
  ParamOverrides r = o;
  if (!r.gamma) r.gamma = Rational(2);
  if (!r.alpha) r.alpha = Rational(1, 16);
  if (!r.gamma_prime) r.gamma_prime = Rational(1, 8);
  if (!r.beta) r.beta = Rational(1, 64);
  return make(eps, r);
}

std::string Params::describe() const {
  std::ostringstream os;
  os << "eps=" << eps.fraction() << " gamma=" << gamma.fraction() << " alpha=" << alpha.fraction()
     << " gamma_prime=" << gamma_prime.fraction() << " beta=" << beta.fraction()
     << " h_eps=" << h_eps.fraction();
  return os.str();
}

ParamOverrides parse_overrides(const std::string& text) {
  ParamOverrides o;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override '" + item + "' needs key=value");
    std::string key = item.substr(0, eq);
    Rational val = Rational::parse(item.substr(eq + 1));
    if (key == "gamma") o.gamma = val;
    else if (key == "alpha") o.alpha = val;
    else if (key == "gamma_prime") o.gamma_prime = val;
    else if (key == "beta") o.beta = val;
    else if (key == "h_eps") o.h_eps = val;
    else throw std::invalid_argument("unknown override '" + key + "'");
  }
  return o;
}

}  // namespace ucvrp
