#include <iostream>

#include "stlf/cli/commands.hpp"

int main(int argc, char** argv) { return stlf::cli::run(argc, argv, std::cout, std::cerr); }
