#include <iostream>
#include <string>
#include <vector>

#include "noncollide/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return noncollide::run_cli(args, std::cout, std::cerr);
}
