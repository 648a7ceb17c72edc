#include "gaugecalc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gaugecalc::cli::main_entry(argc, argv, std::cout, std::cerr); }
