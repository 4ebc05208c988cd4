#include <iostream>
#include <string>
#include <vector>

#include "unaryflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return unaryflow::run(args, std::cout, std::cerr);
}
