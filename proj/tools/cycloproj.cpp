#include <iostream>

#include "cycloproj/cli.hpp"

int main(int argc, char** argv) { return cycloproj::run_cli(argc, argv, std::cout, std::cerr); }
