#include <iostream>

#include "depthnorm/cli.hpp"

int main(int argc, char** argv) {
  return depthnorm::cli::run(argc, argv, std::cout, std::cerr);
}
