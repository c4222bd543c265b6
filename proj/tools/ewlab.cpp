#include "ewlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ewlab::cli::run(argc, argv, std::cout, std::cerr); }
