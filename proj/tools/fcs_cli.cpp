#include <iostream>

#include "fcs/cli.hpp"

int main(int argc, char** argv) { return fcs::cli::run_cli(argc, argv, std::cout, std::cerr); }
