#include <iostream>
#include <string>
#include <vector>

#include "rci/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rci::cli::run(args, std::cin, std::cout, std::cerr);
}
