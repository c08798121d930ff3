#include <iostream>
#include <string>
#include <vector>

#include "contact/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return contact::cli::run(args, std::cout, std::cerr);
}
