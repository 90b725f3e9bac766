#include <iostream>

#include "cayley/cli.hpp"

int main(int argc, char** argv) {
  return cayley::cli::run(argc, argv, std::cout, std::cerr);
}
