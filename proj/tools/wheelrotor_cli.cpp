#include <iostream>
#include <string>
#include <vector>

#include "wheelrotor/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wheelrotor::cli_main(args, std::cout, std::cerr);
}
