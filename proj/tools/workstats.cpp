#include <iostream>

#include "workstats/cli.hpp"

int main(int argc, char** argv) {
  return workstats::run_cli(argc, argv, std::cout, std::cerr);
}
