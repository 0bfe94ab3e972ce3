#include <iostream>
#include <string>
#include <vector>

#include "ctopo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ctopo::cli::run(args, std::cout, std::cerr);
}
