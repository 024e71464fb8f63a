#include <iostream>

#include "nsfemdg/cli/commands.hpp"

int main(int argc, char** argv) { return nsfemdg::cli::run_cli(argc, argv, std::cout, std::cerr); }
