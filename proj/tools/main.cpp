#include <iostream>

#include "reconf/cli.hpp"

int main(int argc, char** argv) { return reconf::run_cli(argc, argv, std::cout, std::cerr); }
