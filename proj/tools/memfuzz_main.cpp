#include <string>
#include <vector>

#include "memfuzz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return memfuzz::cli::run(args);
}
