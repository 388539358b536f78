#include <iostream>
#include <string>
#include <vector>

#include "nntlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nntlab::run_cli(args, std::cout, std::cerr);
}
