#include <iostream>

#include "ricsol_cli/commands.hpp"

int main(int argc, char** argv) { return ricsol::cli::run(argc, argv, std::cout, std::cerr); }
