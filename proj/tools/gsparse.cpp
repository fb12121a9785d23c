#include <iostream>
#include <string>
#include <vector>

#include "gsparse/cli/commands.hpp"

int main(int argc, char** argv) {
  return gsparse::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
