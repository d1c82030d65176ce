#include <string>
#include <vector>

#include "subvarx/cli.hpp"

int main(int argc, char **argv) {
  return subvarx::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
