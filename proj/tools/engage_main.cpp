#include <string>
#include <vector>

#include "engage/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return engage::cli::run(args, engage::cli::default_services());
}
