#include <iostream>

#include "cltj/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cltj::cli::run_cli(args, std::cout, std::cerr);
}
