#include <iostream>

#include "fracpack/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fracpack::run_cli(args, std::cout, std::cerr);
}
