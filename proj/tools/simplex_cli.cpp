#include <iostream>

#include "simplex/cli.hpp"

int main(int argc, char** argv) { return simplex::cli::run(argc, argv, std::cout, std::cerr); }
