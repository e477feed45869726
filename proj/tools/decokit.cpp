#include <iostream>

#include "decokit/cli.hpp"

int main(int argc, char** argv) { return deco::cli::run_cli(argc, argv, std::cout, std::cerr); }
