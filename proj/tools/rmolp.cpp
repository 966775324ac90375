#include "rmolp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return rmolp::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
