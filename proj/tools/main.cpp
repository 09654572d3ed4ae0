#include "proxinorm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return proxinorm::run_cli(argc, argv, std::cout, std::cerr); }
