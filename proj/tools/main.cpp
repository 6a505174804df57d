#include <iostream>

#include "padyn/cli.hpp"

int main(int argc, char** argv) { return padyn::cli::run(argc, argv, std::cout, std::cerr); }
