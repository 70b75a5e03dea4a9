#include <string>
#include <vector>

#include "esslab/cli.hpp"

int main(int argc, char** argv) {
  return esslab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
