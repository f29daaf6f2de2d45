#include <iostream>

#include "asymshap/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return asymshap::cli::run(args, std::cout, std::cerr);
}
