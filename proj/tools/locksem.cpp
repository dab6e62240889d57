#include <iostream>
#include <string>
#include <vector>

#include "locksem/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return locksem::cli::run(args, std::cout, std::cerr);
}
