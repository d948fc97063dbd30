#include "ucvrp/solution_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ucvrp {

void write_solution(std::ostream& out, const Solution& sol) {
  out << "ucvrp-sol 1\n";
  for (std::size_t i = 0; i < sol.tours.size(); ++i) {
    const Tour& t = sol.tours[i];
    out << "tour " << i << " dummy=" << t.dummy.str() << " :";
    for (VertexId v : t.terminals) out << ' ' << v;
    out << '\n';
  }
}

Solution parse_solution(std::istream& in) {
  Solution sol;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string first;
    if (!(is >> first)) continue;
    if (!header) {
      std::string ver;
      if (first != "ucvrp-sol" || !(is >> ver) || ver != "1") throw ParseError(lineno, "expected header 'ucvrp-sol 1'");
      header = true;
      continue;
    }
    if (first != "tour") throw ParseError(lineno, "expected 'tour' record");
    std::string id, dummy, colon;
    if (!(is >> id >> dummy >> colon) || colon != ":" || dummy.rfind("dummy=", 0) != 0)
      throw ParseError(lineno, "tour record needs 'tour <id> dummy=<value> : <ids>'");
    if (id != std::to_string(sol.tours.size())) throw ParseError(lineno, "tour ids must be consecutive from 0");
    Tour t;
    try {
      t.dummy = Rational::parse(dummy.substr(6));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    std::string tok;
    while (is >> tok) {
      try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        t.terminals.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad terminal id '" + tok + "'");
      }
    }
    std::sort(t.terminals.begin(), t.terminals.end());
    sol.tours.push_back(std::move(t));
  }
  if (!header) throw ParseError(lineno, "missing header 'ucvrp-sol 1'");
  return sol;
}

Solution parse_solution_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_solution(is);
}

}  // namespace ucvrp
