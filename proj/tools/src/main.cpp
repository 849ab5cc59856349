#include <iostream>
#include <string>
#include <vector>

#include "mleak_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mleak::cli::run(args, std::cout, std::cerr);
}
