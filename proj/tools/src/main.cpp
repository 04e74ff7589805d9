#include <iostream>
#include <string>
#include <vector>

#include "dplimit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dplimit::cli::run(args, std::cout, std::cerr);
}
