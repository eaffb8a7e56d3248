#include <iostream>

#include "ridgeboost/commands.hpp"

int main(int argc, char** argv) {
  return ridgeboost::cli::run(argc, argv, std::cout, std::cerr);
}
