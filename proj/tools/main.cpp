#include <iostream>
#include <string>
#include <vector>

#include "dstree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dstree::run_cli(args, std::cout, std::cerr);
}
