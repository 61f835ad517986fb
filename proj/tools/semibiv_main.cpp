#include "semibiv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return semibiv::run_cli(argc, argv, std::cout, std::cerr); }
