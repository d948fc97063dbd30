#pragma once

#include <iosfwd>

namespace ucvrp {

// Exit codes: 0 success, 1 infeasible solution / violated invariant / cap exceeded,
// 2 usage or input error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ucvrp
