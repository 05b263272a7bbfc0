#include <iostream>

#include "zetashift/cli.hpp"

int main(int argc, char** argv) {
  return zetashift::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
