#include <iostream>

#include "ucvrp/cli.hpp"

int main(int argc, char** argv) {
  return ucvrp::run(argc, argv, std::cout, std::cerr);
}
