#include <iostream>

#include "leafstab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto r = leafstab::run_cli(args);
  std::cout << r.output;
  std::cerr << r.error;
  return r.exit_code;
}
