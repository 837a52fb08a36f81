#include <iostream>

#include "detsched/cli.hpp"

int main(int argc, char** argv) { return detsched::run_cli(argc, argv, std::cout, std::cerr); }
