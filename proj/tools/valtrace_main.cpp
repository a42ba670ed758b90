#include <iostream>

#include "valtrace/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return valtrace::run_cli(args, std::cout, std::cerr);
}
