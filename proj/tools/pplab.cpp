#include <iostream>
#include <string>
#include <vector>

#include "pplab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pplab::run_main(args, std::cout, std::cerr);
}
