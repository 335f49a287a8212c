#include <iostream>

#include "unitarizer_cli/commands.hpp"

int main(int argc, char** argv) { return unitarizer::cli::main_entry(argc, argv, std::cout, std::cerr); }
