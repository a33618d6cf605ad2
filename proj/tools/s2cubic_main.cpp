#include <iostream>

#include "s2cubic/cli.hpp"

int main(int argc, char** argv) { return s2cubic::cli::main(argc, argv, std::cout, std::cerr); }
