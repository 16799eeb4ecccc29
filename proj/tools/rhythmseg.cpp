#include <iostream>
#include <string>
#include <vector>

#include "rhythmseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rsa::cli::run(args, std::cout, std::cerr);
}
