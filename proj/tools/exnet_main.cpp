#include <iostream>

#include "exnet/cli.hpp"

int main(int argc, char** argv) { return exnet::cli::run(argc, argv, std::cout, std::cerr); }
