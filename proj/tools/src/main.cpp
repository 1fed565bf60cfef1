#include <iostream>
#include <string>
#include <vector>

#include "muhasse_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return muhasse::cli::parse_and_dispatch(args, std::cin, std::cout, std::cerr);
}
