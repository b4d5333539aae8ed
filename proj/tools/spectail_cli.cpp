#include <iostream>
#include <string>
#include <vector>

#include "spectail/experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spectail::cli::run(args, std::cout, std::cerr);
}
