#include <iostream>

#include "wheelleg_cli/cli_commands.hpp"

int main(int argc, char** argv) {
  return wheelleg::cli::main_entry(argc, argv, std::cout, std::cerr);
}
