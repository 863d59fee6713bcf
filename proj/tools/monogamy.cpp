#include "monogamy/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return monogamy::cli::run(argc, argv, std::cout, std::cerr); }
