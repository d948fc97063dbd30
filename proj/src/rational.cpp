#include "ucvrp/rational.hpp"

#include <functional>
#include <ostream>
#include <stdexcept>

namespace ucvrp {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

static bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational Rational::parse_decimal(std::string_view s) {
  std::string_view body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  std::string_view ip = body, fp;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    ip = body.substr(0, dot);
    fp = body.substr(dot + 1);
    if (fp.empty() || !all_digits(fp)) throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
  }
  if (ip.empty() && fp.empty()) throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
  if (!ip.empty() && !all_digits(ip)) throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
  if (fp.size() > 18) throw std::invalid_argument("more than 18 fraction digits in '" + std::string(s) + "'");

  std::string digits = std::string(ip) + std::string(fp);
  if (digits.empty()) digits = "0";
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
  if (neg) num = -num;
  Rational r;
  r.v_ = mpq_class(num, den);
  r.v_.canonicalize();
  return r;
}

Rational Rational::parse(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational p = parse_decimal(s.substr(0, slash));
  Rational q = parse_decimal(s.substr(slash + 1));
  if (q.is_zero()) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  return p / q;
}

std::string Rational::fraction() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  mpz_class den = v_.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return fraction();

  unsigned k = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
  mpz_class scaled = v_.get_num() * scale / v_.get_den();
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= k) digits = std::string(k + 1 - digits.size(), '0') + digits;
  std::string out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  return neg ? "-" + out : out;
}

long Rational::floor_long() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("floor out of range");
  return q.get_si();
}

std::size_t Rational::hash() const {
  std::size_t h = mpz_get_ui(v_.get_num_mpz_t());
  h ^= std::hash<unsigned long>{}(mpz_get_ui(v_.get_den_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(sgn(v_) + 1);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, unsigned exp) {
  Rational r(1);
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ucvrp
