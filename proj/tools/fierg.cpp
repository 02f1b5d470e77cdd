#include <iostream>

#include "fierg/cli.hpp"

int main(int argc, char** argv) { return fierg::run_cli(argc, argv, std::cout, std::cerr); }
