#include <iostream>

#include "sbvp/cli.hpp"

int main(int argc, char** argv) { return sbvp::cli::main(argc, argv, std::cout, std::cerr); }
