#include <iostream>
#include <string>
#include <vector>

#include "qkr/cli.hpp"

int main(int argc, char** argv) {
  return qkr::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
