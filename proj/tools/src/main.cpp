#include <iostream>

#include "ppedcrf_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ppedcrf::cli::run(args, std::cout, std::cerr);
}
