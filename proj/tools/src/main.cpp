#include <iostream>

#include "revcat_cli/cli.hpp"

int main(int argc, char** argv) { return revcat::cli::run(argc, argv, std::cout, std::cerr); }
