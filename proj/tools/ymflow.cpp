#include <iostream>
#include <string>
#include <vector>

#include "ymflow/cli.hpp"

int main(int argc, char** argv) {
  return ymflow::execute(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
