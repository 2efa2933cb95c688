#include <iostream>

#include "wsaw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wsaw::cli::run(args, std::cout, std::cerr);
}
