#include <iostream>

#include "trimerge/cli.hpp"

int main(int argc, char** argv) {
  return trimerge::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
