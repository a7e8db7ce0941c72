#include <iostream>

#include "stratwave/cli/cli.hpp"

int main(int argc, char** argv) { return stratwave::cli::run(argc, argv, std::cout, std::cerr); }
