#include <iostream>

#include "genbound/cli.hpp"

int main(int argc, char** argv) { return genbound::run_cli(argc, argv, std::cout, std::cerr); }
