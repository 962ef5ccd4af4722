#include <iostream>
#include <string>
#include <vector>

#include "tml/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tml::run_cli(args, std::cout, std::cerr);
}
