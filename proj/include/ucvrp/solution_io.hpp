#pragma once

#include <iosfwd>
#include <string_view>

#include "ucvrp/instance.hpp"

namespace ucvrp {

// ucvrp-sol 1
// tour <id> dummy=<value> : <terminal ids>
// The dummy value is a decimal when it terminates, "p/q" otherwise.
void write_solution(std::ostream& out, const Solution& sol);
Solution parse_solution(std::istream& in);
Solution parse_solution_text(std::string_view text);

}  // namespace ucvrp
