#include <iostream>

#include "primegap/cli.hpp"

int main(int argc, char** argv) { return primegap::cli::main(argc, argv, std::cout, std::cerr); }
