#include <iostream>

#include "cellkit_cli.hpp"

int main(int argc, char** argv) { return cellkit::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
