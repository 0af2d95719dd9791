#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) { return itt::cli::run(argc, argv, std::cout, std::cerr); }
