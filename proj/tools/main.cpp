#include <string>
#include <vector>

#include "mr_isolator/cli.hpp"

int main(int argc, char** argv) {
  return mr_isolator::CliMain(std::vector<std::string>(argv, argv + argc));
}
