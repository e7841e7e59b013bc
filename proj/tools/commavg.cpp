#include <iostream>
#include <string>
#include <vector>

#include "commavg/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return commavg::cli::run_cli(args, std::cout, std::cerr);
}
