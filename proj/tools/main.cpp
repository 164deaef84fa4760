#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return hspkit::cli::execute(std::vector<std::string>(argv + 1, argv + argc), std::cout);
}
